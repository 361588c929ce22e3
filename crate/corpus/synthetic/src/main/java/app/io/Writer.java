package app.io;

public class Writer {
    private final Codec codec = new Codec();
    private final StringBuilder sink = new StringBuilder();

    public void write(String value) {
        sink.append(codec.encode(value).length);
    }
}
