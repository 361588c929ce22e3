package app.ui;

import app.core.Engine;

public class Window {
    private final Menu menu = new Menu(this);
    private final Engine engine;

    public Window(Engine engine) {
        this.engine = engine;
    }

    public void open() {
        menu.show();
        engine.start(null);
    }

    public void repaint() {
    }
}
