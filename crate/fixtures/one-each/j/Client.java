package one.j;

import kotlin.jvm.JvmStatic;
import one.k.BasicsKt;

public class Client {
    @JvmStatic // expect: KotlinJvmAnnotationInJava
    public static void mutate() {
        BasicsKt.numbers().add(2); // expect: ImmutableCollectionMutation
    }

    public static Object reveal() {
        return new one.k.Hidden(); // expect: InternalExposure
    }
}
