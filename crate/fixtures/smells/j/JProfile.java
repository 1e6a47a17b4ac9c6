package smells.j;

public class JProfile {
    public String nickname;

    public String getName() {
        return "n";
    }

    @Nullable
    public String getAlias() {
        return null;
    }

    public int getAge() {
        return 3;
    }

    public static String defaultName() {
        return "d";
    }
}
