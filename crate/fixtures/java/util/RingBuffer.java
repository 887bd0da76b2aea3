package fixture.util;

import java.util.ArrayList;
import java.util.List;
import java.util.NoSuchElementException;

public class RingBuffer<T> {

    private final Object[] slots;
    private int head;
    private int size;

    public RingBuffer(int capacity) {
        if (capacity <= 0) {
            throw new IllegalArgumentException("capacity must be positive: " + capacity);
        }
        this.slots = new Object[capacity];
        this.head = 0;
        this.size = 0;
    }

    public int capacity() {
        return slots.length;
    }

    public int size() {
        return size;
    }

    public boolean isEmpty() {
        return size == 0;
    }

    public boolean isFull() {
        return size == slots.length;
    }

    public void push(T item) {
        int tail = (head + size) % slots.length;
        slots[tail] = item;
        if (size < slots.length) {
            size++;
        } else {
            head = (head + 1) % slots.length;
        }
    }

    @SuppressWarnings("unchecked")
    public T pop() {
        if (isEmpty()) {
            throw new NoSuchElementException("buffer is empty");
        }
        Object item = slots[head];
        slots[head] = null;
        head = (head + 1) % slots.length;
        size--;
        return (T) item;
    }

    @SuppressWarnings("unchecked")
    public T peek(int offset) {
        if (offset < 0 || offset >= size) {
            throw new IndexOutOfBoundsException("offset " + offset + " outside 0.." + size);
        }
        int index = (head + offset) % slots.length;
        return (T) slots[index];
    }

    public List<T> drain() {
        List<T> drained = new ArrayList<T>(size);
        while (!isEmpty()) {
            drained.add(pop());
        }
        return drained;
    }

    @SuppressWarnings("unchecked")
    public List<T> snapshot() {
        List<T> copy = new ArrayList<T>(size);
        for (int offset = 0; offset < size; offset++) {
            int index = (head + offset) % slots.length;
            copy.add((T) slots[index]);
        }
        return copy;
    }

    public void clear() {
        for (int i = 0; i < slots.length; i++) {
            slots[i] = null;
        }
        head = 0;
        size = 0;
    }

    public int freeSlots() {
        return slots.length - size;
    }
}
