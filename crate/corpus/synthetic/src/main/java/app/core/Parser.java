package app.core;

import java.util.ArrayList;
import java.util.List;

public class Parser {
    private final Lexer lexer;

    public Parser(Lexer lexer) {
        this.lexer = lexer;
    }

    public List<Token> parse(String source) {
        List<Token> out = new ArrayList<>();
        Token t;
        while ((t = lexer.next()) != null) {
            if (t.kind() == Token.Kind.END) {
                break;
            }
            expect(t);
            out.add(t);
        }
        return out;
    }

    private void expect(Token t) {
        // structural checks only
        if (t == null) {
            throw new IllegalStateException("unexpected end");
        }
    }
}
