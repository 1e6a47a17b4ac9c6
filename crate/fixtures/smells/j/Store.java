package smells.j;

import java.util.List;
import smells.k.Catalog;
import smells.k.InventoryKt;

public class Store {
    public void fill() {
        InventoryKt.stock().add("b"); // expect: ImmutableCollectionMutation
        List<String> s = InventoryKt.stock();
        s.clear(); // expect: ImmutableCollectionMutation
        Catalog.INSTANCE.getEntries().put("k", 1); // expect: ImmutableCollectionMutation
        Catalog.INSTANCE.ids().remove(1); // expect: ImmutableCollectionMutation
        InventoryKt.tags().add("ok");
        InventoryKt.stock().size();
    }
}
