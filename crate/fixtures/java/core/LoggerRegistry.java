package fixture.core;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public final class LoggerRegistry {

    private static final LoggerRegistry INSTANCE = new LoggerRegistry();

    private final Map<String, Logger> loggers;
    private final Logger root;

    private LoggerRegistry() {
        this.loggers = new HashMap<String, Logger>();
        this.root = new Logger("", LogLevel.INFO);
    }

    public static LoggerRegistry getInstance() {
        return INSTANCE;
    }

    public Logger getRoot() {
        return root;
    }

    public synchronized Logger getLogger(String name) {
        if (name == null || name.isEmpty()) {
            return root;
        }
        Logger existing = loggers.get(name);
        if (existing != null) {
            return existing;
        }
        Logger created = new Logger(name, null);
        created.setParent(findParent(name));
        loggers.put(name, created);
        reparentChildren(name, created);
        return created;
    }

    private Logger findParent(String name) {
        String cursor = name;
        while (true) {
            int dot = cursor.lastIndexOf('.');
            if (dot < 0) {
                return root;
            }
            cursor = cursor.substring(0, dot);
            Logger candidate = loggers.get(cursor);
            if (candidate != null) {
                return candidate;
            }
        }
    }

    private void reparentChildren(String name, Logger created) {
        String prefix = name + ".";
        for (Map.Entry<String, Logger> entry : loggers.entrySet()) {
            String childName = entry.getKey();
            if (!childName.startsWith(prefix)) {
                continue;
            }
            Logger child = entry.getValue();
            Logger parent = findParent(childName);
            if (parent == created) {
                child.setParent(created);
            }
        }
    }

    public synchronized boolean exists(String name) {
        return loggers.containsKey(name);
    }

    public synchronized int size() {
        return loggers.size();
    }

    public synchronized List<String> loggerNames() {
        List<String> names = new ArrayList<String>(loggers.keySet());
        java.util.Collections.sort(names);
        return names;
    }

    public synchronized void setLevels(String prefix, LogLevel level) {
        for (Map.Entry<String, Logger> entry : loggers.entrySet()) {
            if (entry.getKey().startsWith(prefix)) {
                entry.getValue().setLevel(level);
            }
        }
    }

    public synchronized void reset() {
        loggers.clear();
        root.setLevel(LogLevel.INFO);
    }
}
