package clean.j;

public class ChainB {
    public int end() {
        return 1;
    }
}
