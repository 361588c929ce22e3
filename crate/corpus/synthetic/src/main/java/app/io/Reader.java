package app.io;

public class Reader {
    private final Codec codec = new Codec();
    private int remaining = 3;

    public String read() {
        if (remaining-- <= 0) {
            return null;
        }
        return codec.decode(new byte[] {1, 2, 3});
    }
}
