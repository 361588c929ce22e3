package app.io;

import static org.junit.Assert.assertEquals;

import org.junit.Test;

public class WriterTest {

    // The sink is private; check the encoding it relies on instead.
    @Test
    public void encodesAscii() {
        assertEquals(5, new Codec().encode("hello").length);
    }
}
