package app.ui;

public class Menu {
    private final Window owner;

    public Menu(Window owner) {
        this.owner = owner;
    }

    public void show() {
        owner.repaint();
    }
}
