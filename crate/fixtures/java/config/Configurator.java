package fixture.config;

import java.util.List;

import fixture.appender.ConsoleAppender;
import fixture.core.Logger;
import fixture.core.LoggerRegistry;
import fixture.core.LogLevel;
import fixture.layout.PatternLayout;

public class Configurator {

    private final LoggerRegistry registry;
    private final ConfigParser parser;
    private boolean applied;

    public Configurator(LoggerRegistry registry, ConfigParser parser) {
        this.registry = registry;
        this.parser = parser;
    }

    public void apply(String body) {
        parser.parse(body);
        configureRoot();
        configureLoggers();
        applied = true;
    }

    private void configureRoot() {
        LogLevel rootLevel = parser.getLevel("root.level", LogLevel.INFO);
        Logger root = registry.getRoot();
        root.setLevel(rootLevel);
        String pattern = parser.get("root.pattern", "%d %p %c - %m%n");
        PatternLayout layout = new PatternLayout(pattern);
        boolean stderr = parser.getBoolean("root.stderr", false);
        ConsoleAppender appender = new ConsoleAppender("console", layout, stderr);
        root.addAppender(appender);
    }

    private void configureLoggers() {
        List<String> keys = parser.keysWithPrefix("logger.");
        for (String key : keys) {
            String rest = key.substring("logger.".length());
            int dot = rest.lastIndexOf('.');
            if (dot < 0) {
                continue;
            }
            String loggerName = rest.substring(0, dot);
            String property = rest.substring(dot + 1);
            Logger logger = registry.getLogger(loggerName);
            if (property.equals("level")) {
                LogLevel level = parser.getLevel(key, LogLevel.INFO);
                logger.setLevel(level);
            } else if (property.equals("additive")) {
                boolean additive = parser.getBoolean(key, true);
                logger.setAdditive(additive);
            }
        }
    }

    public boolean isApplied() {
        return applied;
    }

    public int warningCount() {
        return parser.getErrors().size();
    }

    public String describe() {
        StringBuilder builder = new StringBuilder();
        builder.append("configured=");
        builder.append(applied);
        builder.append(" entries=");
        builder.append(parser.entryCount());
        builder.append(" loggers=");
        builder.append(registry.size());
        return builder.toString();
    }
}
