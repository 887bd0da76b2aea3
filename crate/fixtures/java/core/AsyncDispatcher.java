package fixture.core;

import java.util.ArrayList;
import java.util.List;
import java.util.concurrent.ArrayBlockingQueue;
import java.util.concurrent.BlockingQueue;
import java.util.concurrent.TimeUnit;
import java.util.concurrent.atomic.AtomicLong;
import java.util.function.Consumer;

public class AsyncDispatcher {

    private final BlockingQueue<LogEvent> queue;
    private final List<Consumer<LogEvent>> sinks;
    private final AtomicLong dispatched;
    private final AtomicLong dropped;
    private volatile boolean running;
    private Thread worker;

    public AsyncDispatcher(int queueCapacity) {
        this.queue = new ArrayBlockingQueue<LogEvent>(queueCapacity);
        this.sinks = new ArrayList<Consumer<LogEvent>>();
        this.dispatched = new AtomicLong();
        this.dropped = new AtomicLong();
    }

    public void addSink(Consumer<LogEvent> sink) {
        synchronized (sinks) {
            sinks.add(sink);
        }
    }

    public synchronized void start() {
        if (running) {
            return;
        }
        running = true;
        worker = new Thread(new Runnable() {
            @Override
            public void run() {
                drainLoop();
            }
        });
        worker.setDaemon(true);
        worker.setName("log-dispatcher");
        worker.start();
    }

    void drainLoop() {
        while (running || !queue.isEmpty()) {
            LogEvent event;
            try {
                event = queue.poll(50, TimeUnit.MILLISECONDS);
            } catch (InterruptedException e) {
                Thread.currentThread().interrupt();
                break;
            }
            if (event == null) {
                continue;
            }
            deliver(event);
        }
    }

    private void deliver(LogEvent event) {
        synchronized (sinks) {
            for (Consumer<LogEvent> sink : sinks) {
                try {
                    sink.accept(event);
                } catch (RuntimeException e) {
                    dropped.incrementAndGet();
                }
            }
        }
        dispatched.incrementAndGet();
    }

    public boolean offer(LogEvent event) {
        if (!running) {
            return false;
        }
        boolean accepted = queue.offer(event);
        if (!accepted) {
            dropped.incrementAndGet();
        }
        return accepted;
    }

    public synchronized void stop(long timeoutMillis) {
        if (!running) {
            return;
        }
        running = false;
        if (worker == null) {
            return;
        }
        try {
            worker.join(timeoutMillis);
        } catch (InterruptedException e) {
            Thread.currentThread().interrupt();
        }
        worker = null;
    }

    public long getDispatched() {
        return dispatched.get();
    }

    public long getDropped() {
        return dropped.get();
    }

    public int backlog() {
        return queue.size();
    }
}
