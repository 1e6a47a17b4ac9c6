package smells.j;

public class CycleA {
    public CycleB partner() { // expect: CircularReferences
        return null;
    }
}
