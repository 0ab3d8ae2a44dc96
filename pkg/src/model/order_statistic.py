"""
model.order_statistic. A Fenwick tree of 0/1 counts over [1..size] supporting
k-th smallest selection and deletion in O(log size)
"""

class OrderStatisticTree:
    """
    Counts over the values 1..size, each initially present once (or absent when
    `filled` is False).

    === How selection works ===

    1. tree[j] holds the count of the values in (j - lowbit(j), j].
    2. `find(k)` walks down from the largest power of two not above size, taking a
       step of `half` whenever the partial count there is still below k.
    3. The walk ends one short of the smallest value whose prefix count reaches k.
    """
    def __init__(self, size: int, filled: bool = True) -> None:
        if size < 0:
            raise ValueError(f"size must be nonnegative, got {size}")
        self._size: int = size
        self._count: int = size if filled else 0
        if filled:
            self._tree: list[int] = [0] + [j & -j for j in range(1, size + 1)]
        else:
            self._tree = [0] * (size + 1)
        top = 1
        while top * 2 <= size:
            top *= 2
        self._top: int = top if size > 0 else 0

    def __len__(self) -> int:
        return self._count

    @property
    def size(self) -> int:
        """Largest value the tree can hold"""
        return self._size

    def increment(self, value: int, delta: int) -> None:
        """Add delta to the count of value."""
        if not 0 < value <= self._size:
            raise IndexError(f"value {value} outside 1..{self._size}")
        tree = self._tree
        size = self._size
        j = value
        while j <= size:
            tree[j] += delta
            j += j & -j
        self._count += delta

    def insert(self, value: int) -> None:
        """Mark value present."""
        self.increment(value, 1)

    def remove(self, value: int) -> None:
        """Mark value absent."""
        self.increment(value, -1)

    def prefix_count(self, value: int) -> int:
        """Number of present values <= value"""
        tree = self._tree
        j = min(value, self._size)
        total = 0
        while j > 0:
            total += tree[j]
            j -= j & -j
        return total

    def find(self, k: int) -> int:
        """The k-th smallest present value, 1-based"""
        if not 0 < k <= self._count:
            raise IndexError(f"rank {k} outside 1..{self._count}")
        tree = self._tree
        size = self._size
        j = 0
        remaining = k
        half = self._top
        while half > 0:
            step = j + half
            if step <= size and tree[step] < remaining:
                j = step
                remaining -= tree[step]
            half >>= 1
        return j + 1

    def pop_kth(self, k: int) -> int:
        """Remove and return the k-th smallest present value."""
        value = self.find(k)
        self.increment(value, -1)
        return value

    def pop_kth_largest(self, k: int) -> int:
        """Remove and return the k-th largest present value."""
        return self.pop_kth(self._count + 1 - k)
