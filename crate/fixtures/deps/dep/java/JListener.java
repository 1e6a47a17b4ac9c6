package dep.java;

public interface JListener {
    void onEvent(String event);
}
