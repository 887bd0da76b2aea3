package fixture.core;

public enum LogLevel {
    TRACE(600), DEBUG(500), INFO(400), WARN(300), ERROR(200), FATAL(100), OFF(0);

    private final int intLevel;

    LogLevel(int intLevel) {
        this.intLevel = intLevel;
    }

    public int intLevel() {
        return intLevel;
    }

    public boolean isMoreSpecificThan(LogLevel other) {
        return intLevel <= other.intLevel;
    }

    public boolean isLessSpecificThan(LogLevel other) {
        return intLevel >= other.intLevel;
    }

    public boolean isInRange(LogLevel min, LogLevel max) {
        return intLevel >= max.intLevel && intLevel <= min.intLevel;
    }

    public static LogLevel fromName(String name) {
        if (name == null) {
            return INFO;
        }
        String trimmed = name.trim();
        for (LogLevel level : values()) {
            if (level.name().equalsIgnoreCase(trimmed)) {
                return level;
            }
        }
        return INFO;
    }

    public static LogLevel fromIntLevel(int value) {
        LogLevel best = OFF;
        int distance = Integer.MAX_VALUE;
        for (LogLevel level : values()) {
            int delta = value - level.intLevel;
            if (delta < 0) {
                delta = -delta;
            }
            if (delta < distance) {
                distance = delta;
                best = level;
            }
        }
        return best;
    }

    public LogLevel clampTo(LogLevel floor) {
        if (this.isLessSpecificThan(floor)) {
            return this;
        }
        return floor;
    }
}
