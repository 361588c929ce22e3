package app.ui;

public class Dialog {
    private String title = "";

    public void setTitle(String title) {
        this.title = title;
    }

    public String title() {
        return title;
    }
}
