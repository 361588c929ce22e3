package app.support;

import app.core.Registry;
import app.core.Token;

/** Shared builders for tests. */
public final class TestFixtures {
    private TestFixtures() {
    }

    public static Registry registryWith(String... names) {
        Registry registry = new Registry();
        for (String name : names) {
            registry.lookup(name);
        }
        return registry;
    }

    public static Token word(String text) {
        return Token.create(Token.Kind.WORD, text);
    }
}
