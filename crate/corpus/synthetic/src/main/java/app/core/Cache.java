package app.core;

import java.util.HashMap;
import java.util.Map;

public class Cache {
    private final Map<Integer, Object> slots = new HashMap<>();

    public Object get(String key) {
        return slots.get(hash(key));
    }

    public void put(String key, Object value) {
        slots.put(hash(key), value);
    }

    private int hash(String key) {
        /* cheap and deterministic */
        return key.hashCode() & 0xff;
    }
}
