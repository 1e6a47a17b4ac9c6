package clean.j;

public class JProfile {
    @NotNull
    public String nickname = "n";

    @NotNull
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
}
