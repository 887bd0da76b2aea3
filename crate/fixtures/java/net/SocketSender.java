package fixture.net;

import java.io.IOException;
import java.io.OutputStream;
import java.net.InetSocketAddress;
import java.net.Socket;

import fixture.core.LogEvent;
import fixture.layout.JsonLayout;
import fixture.util.RingBuffer;

public class SocketSender {

    private final String host;
    private final int port;
    private final int connectTimeoutMillis;
    private final JsonLayout layout;
    private final RingBuffer<LogEvent> pending;
    private Socket socket;
    private long sentCount;
    private long droppedCount;

    public SocketSender(String host, int port, int connectTimeoutMillis) {
        this.host = host;
        this.port = port;
        this.connectTimeoutMillis = connectTimeoutMillis;
        this.layout = new JsonLayout(true, true);
        this.pending = new RingBuffer<LogEvent>(256);
    }

    public synchronized void connect() throws IOException {
        if (isConnected()) {
            return;
        }
        socket = new Socket();
        InetSocketAddress address = new InetSocketAddress(host, port);
        socket.connect(address, connectTimeoutMillis);
        socket.setTcpNoDelay(true);
    }

    public synchronized boolean isConnected() {
        return socket != null && socket.isConnected() && !socket.isClosed();
    }

    public synchronized void send(LogEvent event) {
        if (event == null) {
            return;
        }
        if (!isConnected()) {
            buffer(event);
            return;
        }
        try {
            writeEvent(event);
            flushPending();
        } catch (IOException e) {
            buffer(event);
            disconnectQuietly();
        }
    }

    private void buffer(LogEvent event) {
        if (pending.isFull()) {
            droppedCount++;
            pending.pop();
        }
        pending.push(event);
    }

    private void flushPending() throws IOException {
        while (!pending.isEmpty() && isConnected()) {
            LogEvent queued = pending.pop();
            writeEvent(queued);
        }
    }

    private void writeEvent(LogEvent event) throws IOException {
        String payload = layout.format(event);
        OutputStream out = socket.getOutputStream();
        byte[] bytes = payload.getBytes("UTF-8");
        out.write(bytes);
        out.write('\n');
        out.flush();
        sentCount++;
    }

    public synchronized void disconnectQuietly() {
        if (socket == null) {
            return;
        }
        try {
            socket.close();
        } catch (IOException ignored) {
            // closing anyway
        } finally {
            socket = null;
        }
    }

    public synchronized long getSentCount() {
        return sentCount;
    }

    public synchronized long getDroppedCount() {
        return droppedCount;
    }

    public synchronized int pendingCount() {
        return pending.size();
    }

    public String describeTarget() {
        return host + ":" + port;
    }
}
