package app.core;

import app.io.Reader;

public class Scheduler implements Runnable {
    private final Engine engine;
    private final Reader reader;
    private volatile boolean running = true;

    public Scheduler(Engine engine, Reader reader) {
        this.engine = engine;
        this.reader = reader;
    }

    @Override
    public void run() {
        while (running) {
            engine.step();
            if (reader.read() == null) {
                running = false;
            }
        }
    }
}
