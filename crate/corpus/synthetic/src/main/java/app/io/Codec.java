package app.io;

import java.nio.charset.StandardCharsets;

public class Codec {
    public byte[] encode(String value) {
        return value.getBytes(StandardCharsets.UTF_8);
    }

    public String decode(byte[] bytes) {
        return new String(bytes, StandardCharsets.UTF_8);
    }
}
