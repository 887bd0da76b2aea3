package fixture.appender;

import java.io.PrintStream;

import fixture.core.Appender;
import fixture.core.LogEvent;
import fixture.layout.PatternLayout;

public class ConsoleAppender implements Appender {

    private final String name;
    private final PatternLayout layout;
    private final PrintStream target;
    private volatile boolean started;
    private long eventCount;

    public ConsoleAppender(String name, PatternLayout layout, boolean useStdErr) {
        this.name = name;
        this.layout = layout;
        this.target = useStdErr ? System.err : System.out;
        this.started = true;
    }

    @Override
    public String getName() {
        return name;
    }

    @Override
    public boolean isStarted() {
        return started;
    }

    @Override
    public void append(LogEvent event) {
        if (!started || event == null) {
            return;
        }
        String line = layout.format(event);
        synchronized (target) {
            target.print(line);
            if (!line.endsWith("\n")) {
                target.println();
            }
            eventCount++;
        }
        if (event.hasThrowable()) {
            printThrowable(event.getThrown());
        }
    }

    private void printThrowable(Throwable thrown) {
        Throwable cursor = thrown;
        int depth = 0;
        while (cursor != null && depth < 8) {
            synchronized (target) {
                target.print("  caused by: ");
                target.println(cursor.toString());
            }
            cursor = cursor.getCause();
            depth++;
        }
    }

    @Override
    public void close() {
        started = false;
        target.flush();
    }

    public long getEventCount() {
        synchronized (target) {
            return eventCount;
        }
    }
}
