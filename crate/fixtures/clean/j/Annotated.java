package clean.j;

public class Annotated {
    public static int count;

    @Override
    public String toString() {
        return "a";
    }

    @Deprecated
    public static void run() {
    }
}
