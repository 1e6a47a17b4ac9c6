package one.j;

public class JSource {
    public static String label() {
        return "x";
    }
}
