package app.util;

import static org.junit.Assert.assertFalse;
import static org.junit.Assert.assertTrue;

import org.junit.Test;

public class StringsTest {
    @Test
    public void nullIsBlank() {
        assertTrue(Strings.isBlank(null));
    }

    @Test
    public void spacesAreBlank() {
        assertTrue(Strings.isBlank("   "));
    }

    @Test
    public void textIsNotBlank() {
        assertFalse(Strings.isBlank("x"));
    }
}
