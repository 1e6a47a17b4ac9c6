package smells.j;

public class CycleB {
    public CycleA back() {
        return null;
    }
}
