package smells.j;

import kotlin.jvm.JvmStatic;
import kotlin.jvm.JvmField;

public class Annotated {
    @JvmField // expect: KotlinJvmAnnotationInJava
    public int count;

    @JvmStatic // expect: KotlinJvmAnnotationInJava
    public static void run() {
    }

    @kotlin.jvm.JvmOverloads // expect: KotlinJvmAnnotationInJava
    public void go(int a) {
    }

    @Override
    public String toString() {
        return "a";
    }
}
