package app.core;

import app.vendor.Json;

public class Registry {
    private final Cache cache = new Cache();

    public Object lookup(String name) {
        Object hit = cache.get(name);
        if (hit == null) {
            hit = Json.parse("{\"name\":\"" + name + "\"}");
            cache.put(name, hit);
        }
        return hit;
    }
}
