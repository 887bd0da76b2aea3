package fixture.config;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

import fixture.core.LogLevel;

public class ConfigParser {

    public static class Entry {
        final String key;
        final String value;
        final int lineNumber;

        Entry(String key, String value, int lineNumber) {
            this.key = key;
            this.value = value;
            this.lineNumber = lineNumber;
        }

        public String getKey() {
            return key;
        }

        public String getValue() {
            return value;
        }
    }

    public static class ParseException extends RuntimeException {
        private final int line;

        public ParseException(String message, int line) {
            super(message + " at line " + line);
            this.line = line;
        }

        public int getLine() {
            return line;
        }
    }

    private final Map<String, String> values;
    private final List<Entry> entries;
    private final List<String> errors;

    public ConfigParser() {
        this.values = new HashMap<String, String>();
        this.entries = new ArrayList<Entry>();
        this.errors = new ArrayList<String>();
    }

    public void parse(String body) {
        if (body == null) {
            return;
        }
        String[] lines = body.split("\n");
        int lineNumber = 0;
        for (String rawLine : lines) {
            lineNumber++;
            String line = stripComment(rawLine).trim();
            if (line.isEmpty()) {
                continue;
            }
            int eq = line.indexOf('=');
            if (eq < 0) {
                errors.add("missing '=' at line " + lineNumber);
                continue;
            }
            String key = line.substring(0, eq).trim();
            String value = line.substring(eq + 1).trim();
            if (key.isEmpty()) {
                errors.add("empty key at line " + lineNumber);
                continue;
            }
            Entry entry = new Entry(key, value, lineNumber);
            entries.add(entry);
            values.put(key, value);
        }
    }

    static String stripComment(String line) {
        int hash = line.indexOf('#');
        if (hash < 0) {
            return line;
        }
        return line.substring(0, hash);
    }

    public String get(String key, String fallback) {
        String value = values.get(key);
        return value == null ? fallback : value;
    }

    public int getInt(String key, int fallback) {
        String raw = values.get(key);
        if (raw == null) {
            return fallback;
        }
        try {
            return Integer.parseInt(raw);
        } catch (NumberFormatException e) {
            errors.add("bad integer for " + key + ": " + raw);
            return fallback;
        }
    }

    public long getBytes(String key, long fallback) {
        String raw = values.get(key);
        if (raw == null || raw.isEmpty()) {
            return fallback;
        }
        long multiplier = 1;
        String digits = raw;
        char suffix = raw.charAt(raw.length() - 1);
        if (suffix == 'k' || suffix == 'K') {
            multiplier = 1024L;
            digits = raw.substring(0, raw.length() - 1);
        } else if (suffix == 'm' || suffix == 'M') {
            multiplier = 1024L * 1024L;
            digits = raw.substring(0, raw.length() - 1);
        } else if (suffix == 'g' || suffix == 'G') {
            multiplier = 1024L * 1024L * 1024L;
            digits = raw.substring(0, raw.length() - 1);
        }
        try {
            long base = Long.parseLong(digits.trim());
            return base * multiplier;
        } catch (NumberFormatException e) {
            errors.add("bad size for " + key + ": " + raw);
            return fallback;
        }
    }

    public boolean getBoolean(String key, boolean fallback) {
        String raw = values.get(key);
        if (raw == null) {
            return fallback;
        }
        String lowered = raw.toLowerCase();
        if (lowered.equals("true") || lowered.equals("yes") || lowered.equals("on")) {
            return true;
        }
        if (lowered.equals("false") || lowered.equals("no") || lowered.equals("off")) {
            return false;
        }
        errors.add("bad boolean for " + key + ": " + raw);
        return fallback;
    }

    public LogLevel getLevel(String key, LogLevel fallback) {
        String raw = values.get(key);
        if (raw == null) {
            return fallback;
        }
        return LogLevel.fromName(raw);
    }

    public List<String> keysWithPrefix(String prefix) {
        List<String> matched = new ArrayList<String>();
        for (Entry entry : entries) {
            if (entry.key.startsWith(prefix) && !matched.contains(entry.key)) {
                matched.add(entry.key);
            }
        }
        return matched;
    }

    public boolean hasErrors() {
        return !errors.isEmpty();
    }

    public List<String> getErrors() {
        return new ArrayList<String>(errors);
    }

    public int entryCount() {
        return entries.size();
    }

    public void requireKeys(String[] required) {
        for (String key : required) {
            if (!values.containsKey(key)) {
                throw new ParseException("missing required key " + key, 0);
            }
        }
    }
}
