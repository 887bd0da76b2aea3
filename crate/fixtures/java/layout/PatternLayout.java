package fixture.layout;

import java.util.ArrayList;
import java.util.List;

import fixture.core.LogEvent;
import fixture.core.LogLevel;

public class PatternLayout {

    private final String pattern;
    private final List<Segment> segments;
    private int estimatedLength;

    public PatternLayout(String pattern) {
        this.pattern = pattern;
        this.segments = new ArrayList<Segment>();
        this.estimatedLength = 64;
        compile();
    }

    public String getPattern() {
        return pattern;
    }

    private void compile() {
        int cursor = 0;
        StringBuilder literal = new StringBuilder();
        while (cursor < pattern.length()) {
            char current = pattern.charAt(cursor);
            if (current != '%') {
                literal.append(current);
                cursor++;
                continue;
            }
            if (literal.length() > 0) {
                addLiteral(literal.toString());
                literal.setLength(0);
            }
            cursor++;
            if (cursor >= pattern.length()) {
                break;
            }
            char code = pattern.charAt(cursor);
            addConversion(code);
            cursor++;
        }
        if (literal.length() > 0) {
            addLiteral(literal.toString());
        }
    }

    private void addLiteral(String text) {
        Segment segment = new Segment();
        segment.literal = text;
        segments.add(segment);
        estimatedLength += text.length();
    }

    private void addConversion(char code) {
        Segment segment = new Segment();
        segment.conversion = code;
        segments.add(segment);
        estimatedLength += 16;
    }

    public String format(LogEvent event) {
        StringBuilder builder = new StringBuilder(estimatedLength);
        for (Segment segment : segments) {
            if (segment.literal != null) {
                builder.append(segment.literal);
            } else {
                appendConversion(builder, segment.conversion, event);
            }
        }
        return builder.toString();
    }

    private void appendConversion(StringBuilder builder, char code, LogEvent event) {
        switch (code) {
            case 'p':
                builder.append(padLevel(event.getLevel()));
                break;
            case 'c':
                builder.append(shortenLoggerName(event.getLoggerName(), 2));
                break;
            case 'm':
                builder.append(event.formattedMessage());
                break;
            case 't':
                builder.append(event.getThreadName());
                break;
            case 'd':
                builder.append(event.getTimestamp());
                break;
            case 'n':
                builder.append('\n');
                break;
            case '%':
                builder.append('%');
                break;
            default:
                builder.append('%');
                builder.append(code);
                break;
        }
    }

    static String padLevel(LogLevel level) {
        String name = level.name();
        if (name.length() >= 5) {
            return name;
        }
        StringBuilder padded = new StringBuilder(name);
        while (padded.length() < 5) {
            padded.append(' ');
        }
        return padded.toString();
    }

    static String shortenLoggerName(String loggerName, int keepSegments) {
        if (loggerName == null || loggerName.isEmpty()) {
            return "root";
        }
        String[] parts = loggerName.split("\\.");
        if (parts.length <= keepSegments) {
            return loggerName;
        }
        StringBuilder builder = new StringBuilder();
        int start = parts.length - keepSegments;
        for (int i = 0; i < parts.length; i++) {
            if (i < start) {
                builder.append(parts[i].charAt(0));
            } else {
                builder.append(parts[i]);
            }
            if (i < parts.length - 1) {
                builder.append('.');
            }
        }
        return builder.toString();
    }

    public int segmentCount() {
        return segments.size();
    }

    private static final class Segment {
        String literal;
        char conversion;
    }
}
