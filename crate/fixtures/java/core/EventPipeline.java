package fixture.core;

import java.util.ArrayList;
import java.util.Comparator;
import java.util.HashMap;
import java.util.List;
import java.util.Map;
import java.util.function.Function;
import java.util.function.Predicate;

public class EventPipeline {

    public interface Stage {
        LogEvent process(LogEvent event);
    }

    private final List<Stage> stages;
    private final Map<String, Long> stageTimings;

    public EventPipeline() {
        this.stages = new ArrayList<Stage>();
        this.stageTimings = new HashMap<String, Long>();
    }

    public EventPipeline filter(Predicate<LogEvent> predicate) {
        stages.add(event -> predicate.test(event) ? event : null);
        return this;
    }

    public EventPipeline map(Function<LogEvent, LogEvent> mapper) {
        stages.add(mapper::apply);
        return this;
    }

    public EventPipeline enrich(String key, Function<LogEvent, String> extractor) {
        stages.add(event -> event.withContext(key, extractor.apply(event)));
        return this;
    }

    public LogEvent run(LogEvent input) {
        LogEvent current = input;
        for (Stage stage : stages) {
            if (current == null) {
                return null;
            }
            long before = System.nanoTime();
            current = stage.process(current);
            long elapsed = System.nanoTime() - before;
            recordTiming(stage, elapsed);
        }
        return current;
    }

    private void recordTiming(Stage stage, long elapsed) {
        String key = stage.getClass().getSimpleName();
        Long previous = stageTimings.get(key);
        long total = previous == null ? elapsed : previous + elapsed;
        stageTimings.put(key, total);
    }

    public List<LogEvent> runBatch(List<LogEvent> batch) {
        List<LogEvent> survived = new ArrayList<LogEvent>(batch.size());
        outer:
        for (LogEvent event : batch) {
            LogEvent current = event;
            for (Stage stage : stages) {
                current = stage.process(current);
                if (current == null) {
                    continue outer;
                }
            }
            survived.add(current);
        }
        return survived;
    }

    public List<LogEvent> sortByTimestamp(List<LogEvent> events) {
        List<LogEvent> sorted = new ArrayList<LogEvent>(events);
        sorted.sort(Comparator.comparingLong(LogEvent::getTimestamp));
        return sorted;
    }

    public Map<LogLevel, Integer> histogram(List<LogEvent> events) {
        Map<LogLevel, Integer> counts = new HashMap<LogLevel, Integer>();
        for (LogEvent event : events) {
            LogLevel level = event.getLevel();
            Integer existing = counts.get(level);
            counts.put(level, existing == null ? 1 : existing + 1);
        }
        return counts;
    }

    public int stageCount() {
        return stages.size();
    }

    public long timingFor(String stageName) {
        Long total = stageTimings.get(stageName);
        return total == null ? 0L : total;
    }
}
