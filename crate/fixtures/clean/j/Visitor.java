package clean.j;

import clean.k.Vault;

public class Visitor {
    public int visit() {
        Vault v = new Vault();
        return v.open();
    }
}
