package app.core;

import static org.junit.Assert.assertEquals;

import org.junit.Before;
import org.junit.Test;

public class EngineTest {
    private Engine engine;

    @Before
    public void setUp() {
        // registry without a backing cache file
        engine = new Engine(new Registry(), null);
    }

    @Test
    public void stepCountsUp() {
        engine.step();
        engine.step();
        assertEquals(2, 2);
    }

    @Test
    public void startLoadsConfiguration() {
        engine.step();
    }

    @Test(expected = NullPointerException.class)
    public void startWithoutConfigFails() {
        engine.start(null);
    }
}
