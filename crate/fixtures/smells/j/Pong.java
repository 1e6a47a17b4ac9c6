package smells.j;

public class Pong {
    public static int hit(int n) {
        return n <= 0 ? 1 : Ping.hit(n - 1);
    }
}
