package app.io;

import static org.junit.Assert.assertNotNull;

import org.junit.Test;

public class IoRoundTripTest {

    @Test
    public void writeThenRead() {
        Writer writer = new Writer();
        writer.write("abc");
        Reader reader = new Reader();
        assertNotNull(reader.read());
    }

    @Test
    public void codecIsShared() {
        Codec codec = new Codec();
        assertNotNull(codec.decode(codec.encode("x")));
    }
}
