package fixture.filter;

import fixture.core.LogEvent;
import fixture.core.LogLevel;

public class ThresholdFilter {

    public enum Result {
        ACCEPT, NEUTRAL, DENY
    }

    private final LogLevel threshold;
    private final Result onMatch;
    private final Result onMismatch;
    private long accepted;
    private long denied;

    public ThresholdFilter(LogLevel threshold) {
        this(threshold, Result.NEUTRAL, Result.DENY);
    }

    public ThresholdFilter(LogLevel threshold, Result onMatch, Result onMismatch) {
        this.threshold = threshold;
        this.onMatch = onMatch;
        this.onMismatch = onMismatch;
    }

    public Result decide(LogEvent event) {
        if (event == null) {
            return Result.NEUTRAL;
        }
        boolean matches = event.getLevel().isMoreSpecificThan(threshold);
        if (matches) {
            accepted++;
            return onMatch;
        }
        denied++;
        return onMismatch;
    }

    public boolean accepts(LogEvent event) {
        Result result = decide(event);
        return result != Result.DENY;
    }

    public LogLevel getThreshold() {
        return threshold;
    }

    public long getAccepted() {
        return accepted;
    }

    public long getDenied() {
        return denied;
    }

    public double acceptanceRatio() {
        long total = accepted + denied;
        if (total == 0) {
            return 0.0;
        }
        return (double) accepted / (double) total;
    }

    public void resetCounters() {
        accepted = 0;
        denied = 0;
    }
}
