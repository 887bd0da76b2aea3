package fixture.appender;

import java.io.BufferedWriter;
import java.io.File;
import java.io.FileWriter;
import java.io.IOException;
import java.io.Writer;

import fixture.core.Appender;
import fixture.core.LogEvent;
import fixture.layout.PatternLayout;

public class RollingFileAppender implements Appender {

    private final String name;
    private final PatternLayout layout;
    private final String fileName;
    private final long maxBytes;
    private final int maxBackups;
    private Writer writer;
    private long writtenBytes;
    private boolean started;

    public RollingFileAppender(String name, PatternLayout layout, String fileName,
                               long maxBytes, int maxBackups) {
        this.name = name;
        this.layout = layout;
        this.fileName = fileName;
        this.maxBytes = maxBytes;
        this.maxBackups = maxBackups;
    }

    @Override
    public String getName() {
        return name;
    }

    @Override
    public boolean isStarted() {
        return started;
    }

    public synchronized void start() throws IOException {
        if (started) {
            return;
        }
        File file = new File(fileName);
        File dir = file.getParentFile();
        if (dir != null && !dir.exists()) {
            dir.mkdirs();
        }
        writer = new BufferedWriter(new FileWriter(file, true));
        writtenBytes = file.length();
        started = true;
    }

    @Override
    public synchronized void append(LogEvent event) {
        if (!started) {
            return;
        }
        String line = layout.format(event);
        try {
            writer.write(line);
            if (!line.endsWith("\n")) {
                writer.write("\n");
            }
            writtenBytes += line.length() + 1;
            if (writtenBytes >= maxBytes) {
                rollover();
            }
        } catch (IOException e) {
            started = false;
        }
    }

    private void rollover() throws IOException {
        writer.flush();
        writer.close();
        for (int index = maxBackups - 1; index >= 1; index--) {
            File source = new File(backupName(index));
            if (source.exists()) {
                File target = new File(backupName(index + 1));
                if (target.exists()) {
                    target.delete();
                }
                source.renameTo(target);
            }
        }
        File current = new File(fileName);
        File firstBackup = new File(backupName(1));
        if (firstBackup.exists()) {
            firstBackup.delete();
        }
        current.renameTo(firstBackup);
        writer = new BufferedWriter(new FileWriter(fileName, false));
        writtenBytes = 0;
    }

    String backupName(int index) {
        return fileName + "." + index;
    }

    @Override
    public synchronized void close() {
        if (!started) {
            return;
        }
        started = false;
        try {
            writer.flush();
            writer.close();
        } catch (IOException ignored) {
            // already closing
        }
    }

    public synchronized long getWrittenBytes() {
        return writtenBytes;
    }

    public int getMaxBackups() {
        return maxBackups;
    }
}
