package app.util;

public class Config {
    private String source = "";

    public void load() {
        source = "a b c";
    }

    public String source() {
        return source;
    }
}
