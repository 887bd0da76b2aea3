package fixture.util;

public final class TimeFormat {

    private static final int MILLIS_PER_SECOND = 1000;
    private static final int SECONDS_PER_MINUTE = 60;
    private static final int MINUTES_PER_HOUR = 60;
    private static final int HOURS_PER_DAY = 24;

    private TimeFormat() {
    }

    public static String isoClock(long millisOfDay) {
        long totalSeconds = millisOfDay / MILLIS_PER_SECOND;
        long millis = millisOfDay % MILLIS_PER_SECOND;
        long seconds = totalSeconds % SECONDS_PER_MINUTE;
        long totalMinutes = totalSeconds / SECONDS_PER_MINUTE;
        long minutes = totalMinutes % MINUTES_PER_HOUR;
        long hours = (totalMinutes / MINUTES_PER_HOUR) % HOURS_PER_DAY;
        StringBuilder builder = new StringBuilder(12);
        appendPadded(builder, hours, 2);
        builder.append(':');
        appendPadded(builder, minutes, 2);
        builder.append(':');
        appendPadded(builder, seconds, 2);
        builder.append('.');
        appendPadded(builder, millis, 3);
        return builder.toString();
    }

    static void appendPadded(StringBuilder builder, long value, int width) {
        String digits = Long.toString(value);
        for (int i = digits.length(); i < width; i++) {
            builder.append('0');
        }
        builder.append(digits);
    }

    public static String humanDuration(long millis) {
        if (millis < 0) {
            return "-" + humanDuration(-millis);
        }
        if (millis < MILLIS_PER_SECOND) {
            return millis + "ms";
        }
        long seconds = millis / MILLIS_PER_SECOND;
        if (seconds < SECONDS_PER_MINUTE) {
            return seconds + "s";
        }
        long minutes = seconds / SECONDS_PER_MINUTE;
        if (minutes < MINUTES_PER_HOUR) {
            return minutes + "m" + (seconds % SECONDS_PER_MINUTE) + "s";
        }
        long hours = minutes / MINUTES_PER_HOUR;
        return hours + "h" + (minutes % MINUTES_PER_HOUR) + "m";
    }

    public static long parseDuration(String text) {
        if (text == null || text.isEmpty()) {
            return 0;
        }
        String trimmed = text.trim();
        long multiplier = 1;
        int cut = trimmed.length();
        if (trimmed.endsWith("ms")) {
            cut = trimmed.length() - 2;
        } else if (trimmed.endsWith("s")) {
            multiplier = MILLIS_PER_SECOND;
            cut = trimmed.length() - 1;
        } else if (trimmed.endsWith("m")) {
            multiplier = MILLIS_PER_SECOND * SECONDS_PER_MINUTE;
            cut = trimmed.length() - 1;
        } else if (trimmed.endsWith("h")) {
            multiplier = MILLIS_PER_SECOND * SECONDS_PER_MINUTE * MINUTES_PER_HOUR;
            cut = trimmed.length() - 1;
        }
        String digits = trimmed.substring(0, cut).trim();
        long base = Long.parseLong(digits);
        return base * multiplier;
    }

    public static long startOfDay(long epochMillis) {
        long millisPerDay = 1L * MILLIS_PER_SECOND * SECONDS_PER_MINUTE * MINUTES_PER_HOUR * HOURS_PER_DAY;
        return epochMillis - (epochMillis % millisPerDay);
    }

    public static boolean sameDay(long left, long right) {
        return startOfDay(left) == startOfDay(right);
    }
}
