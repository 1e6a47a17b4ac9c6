package smells.j;

import java.util.Map; // expect: UnusedImport
import java.util.ArrayList;

public class Legacy {
    private final ArrayList<String> names = new ArrayList<>();

    public Legacy(int a, int b, int c, int d, int e, int f, int g, int h) { // expect: ExcessiveParams
    }

    public String describe() {
        return names.toString();
    }
}
