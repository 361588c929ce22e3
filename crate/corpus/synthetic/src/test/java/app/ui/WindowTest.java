package app.ui;

import org.junit.Test;

public class WindowTest {
    @Test
    public void repaintIsHarmless() {
        new Window(null).repaint();
    }

    @Test(expected = NullPointerException.class)
    public void openNeedsEngine() {
        new Window(null).open();
    }
}
