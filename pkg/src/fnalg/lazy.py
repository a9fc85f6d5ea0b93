"""Memoized on-demand slots for derived function objects."""

import threading

# Total maker invocations across every cell; tests read it to prove laziness.
_maker_calls = 0
_counter_lock = threading.Lock()


def maker_calls():
    """Number of times any LazyCell has run its maker in this process."""
    return _maker_calls


def _tick():
    global _maker_calls
    with _counter_lock:
        _maker_calls += 1


class LazyCell:
    """Holds a value produced by ``maker`` on first demand.

    The maker runs at most once even under concurrent demand; every caller
    observes the same object afterwards.
    """

    __slots__ = ("_maker", "_value", "_lock", "calls")

    _EMPTY = object()

    def __init__(self, maker):
        self._maker = maker
        self._value = self._EMPTY
        self._lock = threading.Lock()
        self.calls = 0

    @property
    def materialized(self):
        return self._value is not self._EMPTY

    def peek(self):
        """The value if already built, else ``None``; never runs the maker."""
        value = self._value
        return None if value is self._EMPTY else value

    def get(self):
        value = self._value
        if value is not self._EMPTY:
            return value
        with self._lock:
            if self._value is self._EMPTY:
                self.calls += 1
                _tick()
                self._value = self._maker()
                # drop the closure so referenced objects can be collected
                self._maker = None
            return self._value

    def __repr__(self):
        state = "materialized" if self.materialized else "empty"
        return f"<LazyCell {state}>"
