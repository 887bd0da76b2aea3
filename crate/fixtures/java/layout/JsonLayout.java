package fixture.layout;

import java.util.List;

import fixture.core.LogEvent;

public class JsonLayout {

    private final boolean includeContext;
    private final boolean compact;

    public JsonLayout(boolean includeContext, boolean compact) {
        this.includeContext = includeContext;
        this.compact = compact;
    }

    public String format(LogEvent event) {
        StringBuilder builder = new StringBuilder(128);
        builder.append('{');
        appendField(builder, "level", event.getLevel().name(), true);
        appendField(builder, "logger", event.getLoggerName(), false);
        appendField(builder, "thread", event.getThreadName(), false);
        appendNumber(builder, "timestamp", event.getTimestamp());
        appendField(builder, "message", event.formattedMessage(), false);
        if (event.hasThrowable()) {
            appendField(builder, "thrown", event.getThrown().getClass().getName(), false);
        }
        if (includeContext) {
            appendContext(builder, event);
        }
        builder.append('}');
        if (!compact) {
            builder.append('\n');
        }
        return builder.toString();
    }

    private void appendField(StringBuilder builder, String key, String value, boolean first) {
        if (!first) {
            builder.append(',');
        }
        builder.append('"');
        builder.append(key);
        builder.append("\":\"");
        escapeInto(builder, value);
        builder.append('"');
    }

    private void appendNumber(StringBuilder builder, String key, long value) {
        builder.append(",\"");
        builder.append(key);
        builder.append("\":");
        builder.append(value);
    }

    private void appendContext(StringBuilder builder, LogEvent event) {
        List<String> keys = event.contextKeys();
        if (keys.isEmpty()) {
            return;
        }
        builder.append(",\"context\":{");
        boolean first = true;
        for (String key : keys) {
            if (!first) {
                builder.append(',');
            }
            builder.append('"');
            escapeInto(builder, key);
            builder.append("\":\"");
            escapeInto(builder, event.contextValue(key));
            builder.append('"');
            first = false;
        }
        builder.append('}');
    }

    static void escapeInto(StringBuilder builder, String raw) {
        if (raw == null) {
            return;
        }
        for (int i = 0; i < raw.length(); i++) {
            char c = raw.charAt(i);
            switch (c) {
                case '"':
                    builder.append("\\\"");
                    break;
                case '\\':
                    builder.append("\\\\");
                    break;
                case '\n':
                    builder.append("\\n");
                    break;
                case '\r':
                    builder.append("\\r");
                    break;
                case '\t':
                    builder.append("\\t");
                    break;
                default:
                    if (c < 0x20) {
                        builder.append("\\u00");
                        int high = (c >> 4) & 0xF;
                        int low = c & 0xF;
                        builder.append(hexDigit(high));
                        builder.append(hexDigit(low));
                    } else {
                        builder.append(c);
                    }
                    break;
            }
        }
    }

    static char hexDigit(int value) {
        if (value < 10) {
            return (char) ('0' + value);
        }
        return (char) ('a' + value - 10);
    }

    public boolean isCompact() {
        return compact;
    }
}
