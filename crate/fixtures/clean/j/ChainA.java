package clean.j;

public class ChainA {
    public ChainB next() {
        return new ChainB();
    }
}
