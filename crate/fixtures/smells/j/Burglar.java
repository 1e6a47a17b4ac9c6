package smells.j;

import smells.k.PublicDoor;
import smells.k.Vault; // expect: InternalExposure

public class Burglar {
    public int rob(PublicDoor door) {
        Vault v = new Vault(); // expect: InternalExposure x2
        door.ring();
        return v.open() + door.knock(); // expect: InternalExposure x2
    }
}
