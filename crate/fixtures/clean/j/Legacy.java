package clean.j;

import java.util.ArrayList;
import java.util.Map;

public class Legacy {
    private final ArrayList<String> names = new ArrayList<>();

    public Legacy(int a, int b, int c) {
    }

    public String describe(Map<String, String> extra) {
        return names.toString() + extra;
    }
}
