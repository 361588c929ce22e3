package app.core;

import static org.junit.Assert.assertNotNull;

import org.junit.Test;

// Exercised reflectively so the test does not depend on the constructor.
public class LexerTest {

    @Test
    public void classIsLoadable() throws Exception {
        assertNotNull(Class.forName("app.core.Lexer"));
    }

    @Test
    public void hasNextMethod() throws Exception {
        assertNotNull(Class.forName("app.core.Lexer").getMethod("next"));
    }
}
