package app.core;

import static org.junit.Assert.assertNotNull;
import static org.junit.Assert.assertSame;

import org.junit.Test;

public class RegistryTest {

    @Test
    public void lookupCreatesEntry() {
        assertNotNull(new Registry().lookup("a"));
    }

    @Test
    public void lookupIsCached() {
        Registry registry = new Registry();
        Object first = registry.lookup("a");
        assertSame(first, registry.lookup("a"));
    }

    @Test
    public void distinctNames() {
        Registry registry = new Registry();
        registry.lookup("a");
        registry.lookup("b");
    }
}
