package app.vendor;

public final class Json {
    private Json() {
    }

    public static Object parse(String text) {
        return text;
    }
}
