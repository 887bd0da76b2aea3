package fixture.util;

import java.util.ArrayList;
import java.util.Iterator;
import java.util.List;

public final class StringUtils {

    private StringUtils() {
    }

    public static boolean isBlank(String text) {
        if (text == null || text.isEmpty()) {
            return true;
        }
        for (int i = 0; i < text.length(); i++) {
            if (!Character.isWhitespace(text.charAt(i))) {
                return false;
            }
        }
        return true;
    }

    public static String defaultIfBlank(String text, String fallback) {
        return isBlank(text) ? fallback : text;
    }

    public static String repeat(String unit, int times) {
        if (times <= 0 || unit == null) {
            return "";
        }
        StringBuilder builder = new StringBuilder(unit.length() * times);
        for (int i = 0; i < times; i++) {
            builder.append(unit);
        }
        return builder.toString();
    }

    public static String leftPad(String text, int width, char pad) {
        if (text == null) {
            text = "";
        }
        int missing = width - text.length();
        if (missing <= 0) {
            return text;
        }
        StringBuilder builder = new StringBuilder(width);
        for (int i = 0; i < missing; i++) {
            builder.append(pad);
        }
        builder.append(text);
        return builder.toString();
    }

    public static String abbreviate(String text, int maxWidth) {
        if (text == null || text.length() <= maxWidth) {
            return text;
        }
        if (maxWidth <= 3) {
            return text.substring(0, maxWidth);
        }
        return text.substring(0, maxWidth - 3) + "...";
    }

    public static String join(List<String> parts, String separator) {
        StringBuilder builder = new StringBuilder();
        Iterator<String> iterator = parts.iterator();
        while (iterator.hasNext()) {
            builder.append(iterator.next());
            if (iterator.hasNext()) {
                builder.append(separator);
            }
        }
        return builder.toString();
    }

    public static List<String> splitAndTrim(String text, char separator) {
        List<String> parts = new ArrayList<String>();
        if (text == null) {
            return parts;
        }
        int start = 0;
        for (int i = 0; i <= text.length(); i++) {
            boolean atEnd = i == text.length();
            if (atEnd || text.charAt(i) == separator) {
                String piece = text.substring(start, i).trim();
                if (!piece.isEmpty()) {
                    parts.add(piece);
                }
                start = i + 1;
            }
        }
        return parts;
    }

    public static int countOccurrences(String haystack, char needle) {
        int count = 0;
        if (haystack == null) {
            return count;
        }
        for (int i = 0; i < haystack.length(); i++) {
            if (haystack.charAt(i) == needle) {
                count++;
            }
        }
        return count;
    }

    public static String capitalize(String word) {
        if (isBlank(word)) {
            return word;
        }
        char first = word.charAt(0);
        char upper = Character.toUpperCase(first);
        if (first == upper) {
            return word;
        }
        return upper + word.substring(1);
    }

    public static boolean equalsIgnoreCase(String left, String right) {
        if (left == null) {
            return right == null;
        }
        return left.equalsIgnoreCase(right);
    }

    public static String commonPrefix(String left, String right) {
        if (left == null || right == null) {
            return "";
        }
        int limit = Math.min(left.length(), right.length());
        int i = 0;
        while (i < limit && left.charAt(i) == right.charAt(i)) {
            i++;
        }
        return left.substring(0, i);
    }

    public static String reverse(String text) {
        if (text == null) {
            return null;
        }
        return new StringBuilder(text).reverse().toString();
    }
}
