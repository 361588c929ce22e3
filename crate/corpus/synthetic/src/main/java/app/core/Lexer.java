package app.core;

public class Lexer {
    private final String input;
    private int pos;

    public Lexer(String input) {
        this.input = input;
    }

    public Token next() {
        if (pos >= input.length()) {
            return Token.create(Token.Kind.END, "");
        }
        advance();
        return Token.create(Token.Kind.WORD, input.substring(pos - 1, pos));
    }

    private void advance() {
        pos++;
    }
}
