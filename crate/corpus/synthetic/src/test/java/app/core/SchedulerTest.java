package app.core;

import org.junit.Test;

public class SchedulerTest {

    @Test(expected = NullPointerException.class)
    public void runNeedsCollaborators() {
        new Scheduler(null, null).run();
    }
}
