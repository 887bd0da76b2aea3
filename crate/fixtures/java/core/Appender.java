package fixture.core;

public interface Appender {

    String getName();

    void append(LogEvent event);

    void close();

    boolean isStarted();
}
