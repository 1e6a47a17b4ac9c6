package dep.java;

public abstract class JBase {
    public void hello() {
        System.out.println("hello");
    }
}
