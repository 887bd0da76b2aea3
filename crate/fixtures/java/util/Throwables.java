package fixture.util;

import java.util.ArrayList;
import java.util.List;

public final class Throwables {

    private Throwables() {
    }

    public static Throwable rootCause(Throwable thrown) {
        Throwable cursor = thrown;
        while (cursor != null) {
            Throwable cause = cursor.getCause();
            if (cause == null || cause == cursor) {
                return cursor;
            }
            cursor = cause;
        }
        return null;
    }

    public static List<Throwable> causalChain(Throwable thrown) {
        List<Throwable> chain = new ArrayList<Throwable>();
        Throwable cursor = thrown;
        while (cursor != null && !chain.contains(cursor)) {
            chain.add(cursor);
            cursor = cursor.getCause();
        }
        return chain;
    }

    public static int depth(Throwable thrown) {
        return causalChain(thrown).size();
    }

    public static boolean contains(Throwable thrown, Class<?> type) {
        for (Throwable link : causalChain(thrown)) {
            if (type.isInstance(link)) {
                return true;
            }
        }
        return false;
    }

    public static String summarize(Throwable thrown, int maxFrames) {
        if (thrown == null) {
            return "";
        }
        StringBuilder builder = new StringBuilder();
        builder.append(thrown.getClass().getName());
        String message = thrown.getMessage();
        if (message != null) {
            builder.append(": ");
            builder.append(message);
        }
        StackTraceElement[] frames = thrown.getStackTrace();
        int limit = Math.min(maxFrames, frames.length);
        for (int i = 0; i < limit; i++) {
            builder.append("\n  at ");
            builder.append(frames[i].toString());
        }
        if (frames.length > limit) {
            builder.append("\n  ... ");
            builder.append(frames.length - limit);
            builder.append(" more");
        }
        return builder.toString();
    }

    public static RuntimeException propagate(Throwable thrown) {
        if (thrown instanceof RuntimeException) {
            return (RuntimeException) thrown;
        }
        if (thrown instanceof Error) {
            throw (Error) thrown;
        }
        return new RuntimeException(thrown);
    }
}
