package fixture.core;

import java.util.ArrayList;
import java.util.Collections;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public class LogEvent {

    private final String loggerName;
    private final LogLevel level;
    private final String message;
    private final long timestamp;
    private final String threadName;
    private final Throwable thrown;
    private final Map<String, String> context;
    private Object[] parameters;

    public LogEvent(String loggerName, LogLevel level, String message, long timestamp) {
        this.loggerName = loggerName;
        this.level = level;
        this.message = message;
        this.timestamp = timestamp;
        this.threadName = Thread.currentThread().getName();
        this.thrown = null;
        this.context = new HashMap<String, String>();
    }

    public LogEvent(String loggerName, LogLevel level, String message, long timestamp,
                    Throwable thrown, Map<String, String> context) {
        this.loggerName = loggerName;
        this.level = level;
        this.message = message;
        this.timestamp = timestamp;
        this.threadName = Thread.currentThread().getName();
        this.thrown = thrown;
        this.context = context;
    }

    public String getLoggerName() {
        return loggerName;
    }

    public LogLevel getLevel() {
        return level;
    }

    public String getMessage() {
        return message;
    }

    public long getTimestamp() {
        return timestamp;
    }

    public String getThreadName() {
        return threadName;
    }

    public Throwable getThrown() {
        return thrown;
    }

    public Object[] getParameters() {
        return parameters;
    }

    public void setParameters(Object[] parameters) {
        this.parameters = parameters;
    }

    public String contextValue(String key) {
        String value = context.get(key);
        if (value == null) {
            return "";
        }
        return value;
    }

    public Map<String, String> contextSnapshot() {
        Map<String, String> copy = new HashMap<String, String>(context);
        return Collections.unmodifiableMap(copy);
    }

    public boolean hasThrowable() {
        return thrown != null;
    }

    public String formattedMessage() {
        if (parameters == null || parameters.length == 0) {
            return message;
        }
        StringBuilder builder = new StringBuilder(message.length() + 32);
        int cursor = 0;
        int argIndex = 0;
        while (cursor < message.length()) {
            int brace = message.indexOf("{}", cursor);
            if (brace < 0 || argIndex >= parameters.length) {
                builder.append(message.substring(cursor));
                break;
            }
            builder.append(message, cursor, brace);
            Object arg = parameters[argIndex];
            builder.append(arg == null ? "null" : arg.toString());
            argIndex++;
            cursor = brace + 2;
        }
        return builder.toString();
    }

    public LogEvent withContext(String key, String value) {
        Map<String, String> merged = new HashMap<String, String>(context);
        merged.put(key, value);
        return new LogEvent(loggerName, level, message, timestamp, thrown, merged);
    }

    public List<String> contextKeys() {
        List<String> keys = new ArrayList<String>(context.keySet());
        Collections.sort(keys);
        return keys;
    }

    public boolean isMoreSpecificThan(LogLevel threshold) {
        return level.isMoreSpecificThan(threshold);
    }

    public long ageMillis(long now) {
        long age = now - timestamp;
        return age < 0 ? 0 : age;
    }

    @Override
    public String toString() {
        StringBuilder builder = new StringBuilder();
        builder.append(level);
        builder.append(' ');
        builder.append(loggerName);
        builder.append(" - ");
        builder.append(formattedMessage());
        return builder.toString();
    }
}
