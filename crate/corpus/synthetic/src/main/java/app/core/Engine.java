package app.core;

import app.util.Config;

/**
 * Drives a parse/evaluate cycle.
 */
public class Engine {
    private final Registry registry;
    private final Parser parser;
    private final Stats stats = new Stats();

    public Engine(Registry registry, Parser parser) {
        this.registry = registry;
        this.parser = parser;
    }

    public void start(Config config) {
        config.load();
        registry.lookup("root");
        parser.parse(config.source());
    }

    public void step() {
        stats.steps++;
    }

    static class Stats {
        int steps;
    }
}
