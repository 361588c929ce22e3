package app.core;

public final class Token {
    public enum Kind { WORD, END }

    private final Kind kind;
    private final String text;

    private Token(Kind kind, String text) {
        this.kind = kind;
        this.text = text;
    }

    public static Token create(Kind kind, String text) {
        return new Token(kind, text);
    }

    public Kind kind() {
        return kind;
    }

    public String text() {
        return text;
    }
}
