package fixture.filter;

import fixture.core.LogEvent;
import fixture.core.LogLevel;

public class BurstFilter {

    private final int maxBurst;
    private final long windowMillis;
    private final long[] recent;
    private int cursor;
    private int occupied;
    private long suppressed;

    public BurstFilter(int maxBurst, long windowMillis) {
        if (maxBurst <= 0) {
            throw new IllegalArgumentException("maxBurst must be positive");
        }
        this.maxBurst = maxBurst;
        this.windowMillis = windowMillis;
        this.recent = new long[maxBurst];
        this.cursor = 0;
        this.occupied = 0;
    }

    public synchronized boolean allow(LogEvent event) {
        if (event.getLevel().isMoreSpecificThan(LogLevel.ERROR)) {
            return true;
        }
        long now = event.getTimestamp();
        evictOlderThan(now - windowMillis);
        if (occupied >= maxBurst) {
            suppressed++;
            return false;
        }
        recent[cursor] = now;
        cursor = (cursor + 1) % recent.length;
        occupied++;
        return true;
    }

    private void evictOlderThan(long cutoff) {
        int scanned = 0;
        int start = (cursor - occupied + recent.length) % recent.length;
        while (scanned < occupied) {
            int index = (start + scanned) % recent.length;
            if (recent[index] >= cutoff) {
                break;
            }
            scanned++;
        }
        occupied -= scanned;
    }

    public synchronized long getSuppressed() {
        return suppressed;
    }

    public synchronized int currentLoad() {
        return occupied;
    }

    public int getMaxBurst() {
        return maxBurst;
    }

    public long getWindowMillis() {
        return windowMillis;
    }
}
