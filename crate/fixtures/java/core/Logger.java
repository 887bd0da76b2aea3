package fixture.core;

import java.util.ArrayList;
import java.util.List;

public class Logger {

    private final String name;
    private volatile LogLevel level;
    private final List<Appender> appenders;
    private Logger parent;
    private boolean additive;

    public Logger(String name, LogLevel level) {
        this.name = name;
        this.level = level;
        this.appenders = new ArrayList<Appender>();
        this.additive = true;
    }

    public String getName() {
        return name;
    }

    public LogLevel getLevel() {
        return level;
    }

    public void setLevel(LogLevel level) {
        this.level = level;
    }

    public void setParent(Logger parent) {
        this.parent = parent;
    }

    public void setAdditive(boolean additive) {
        this.additive = additive;
    }

    public void addAppender(Appender appender) {
        if (appender == null) {
            throw new IllegalArgumentException("appender must not be null");
        }
        synchronized (appenders) {
            appenders.add(appender);
        }
    }

    public boolean removeAppender(String appenderName) {
        synchronized (appenders) {
            for (int i = 0; i < appenders.size(); i++) {
                Appender candidate = appenders.get(i);
                if (candidate.getName().equals(appenderName)) {
                    appenders.remove(i);
                    return true;
                }
            }
        }
        return false;
    }

    public boolean isEnabled(LogLevel requested) {
        LogLevel effective = effectiveLevel();
        return requested.isMoreSpecificThan(effective);
    }

    public LogLevel effectiveLevel() {
        Logger cursor = this;
        while (cursor != null) {
            LogLevel current = cursor.level;
            if (current != null) {
                return current;
            }
            cursor = cursor.parent;
        }
        return LogLevel.INFO;
    }

    public void trace(String message) {
        log(LogLevel.TRACE, message, null);
    }

    public void debug(String message) {
        log(LogLevel.DEBUG, message, null);
    }

    public void info(String message) {
        log(LogLevel.INFO, message, null);
    }

    public void warn(String message) {
        log(LogLevel.WARN, message, null);
    }

    public void error(String message, Throwable thrown) {
        log(LogLevel.ERROR, message, thrown);
    }

    public void log(LogLevel requested, String message, Throwable thrown) {
        if (!isEnabled(requested)) {
            return;
        }
        long now = System.currentTimeMillis();
        LogEvent event = new LogEvent(name, requested, message, now, thrown, null);
        dispatch(event);
    }

    private void dispatch(LogEvent event) {
        Logger cursor = this;
        while (cursor != null) {
            synchronized (cursor.appenders) {
                for (Appender appender : cursor.appenders) {
                    appender.append(event);
                }
            }
            if (!cursor.additive) {
                break;
            }
            cursor = cursor.parent;
        }
    }

    public int appenderCount() {
        synchronized (appenders) {
            return appenders.size();
        }
    }

    public List<String> appenderNames() {
        List<String> names = new ArrayList<String>();
        synchronized (appenders) {
            for (Appender appender : appenders) {
                names.add(appender.getName());
            }
        }
        return names;
    }
}
