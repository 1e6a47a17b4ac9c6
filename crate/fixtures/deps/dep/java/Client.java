package dep.java;

import dep.kotlin.KHandler;
import dep.kotlin.KService;
import dep.kotlin.KWidget;

public class Client extends KWidget implements KHandler {
    @Override
    public void handle() {
        KService service = new KService();
        service.onEvent("start");
    }

    public KWidget make(KService service) {
        KWidget w = new KWidget();
        w.size = 3;
        w.render();
        JUser user = new JUser("x");
        return w;
    }
}
