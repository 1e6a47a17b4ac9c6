package clean.j;

import java.util.List;
import clean.k.Catalog;
import clean.k.InventoryKt;

public class Store {
    public int fill() {
        InventoryKt.stock().add("b");
        List<String> s = InventoryKt.stock();
        s.clear();
        Catalog.INSTANCE.getEntries().put("k", 1);
        return InventoryKt.frozen().size();
    }
}
