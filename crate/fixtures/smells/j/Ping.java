package smells.j;

public class Ping {
    public static int hit(int n) {
        return n <= 0 ? 0 : Pong.hit(n - 1); // expect: CircularReferences
    }
}
