"""Accounting for the bit cost of bulk allocations.

Every bulk structure in the library (bit sequences, fixed-width count
arrays, directories) registers its logical size here so tests and the
bench command can observe peak auxiliary space.  Charges are the bit
widths the structures are designed with, not CPython object overhead;
the quantity under test is the space the layout itself needs.

Lookup tables and reusable scratch buffers go to a separate channel:
they are a fixed, input-independent cost, and the space bounds the
package advertises are of the form "c * N bits + table overhead".
"""

from contextlib import contextmanager


class Measurement:
    """Peak auxiliary bits allocated while a measure() block was active."""

    __slots__ = ("baseline", "peak_bits")

    def __init__(self, baseline):
        self.baseline = baseline
        self.peak_bits = 0


class MemoryAccount:
    def __init__(self):
        self._current = 0
        self._tables = 0
        self._active = []

    @property
    def current_bits(self):
        return self._current

    @property
    def table_bits(self):
        return self._tables

    def alloc(self, bits):
        cur = self._current + bits
        self._current = cur
        for m in self._active:
            delta = cur - m.baseline
            if delta > m.peak_bits:
                m.peak_bits = delta

    def free(self, bits):
        self._current -= bits

    def alloc_table(self, bits):
        self._tables += bits

    @contextmanager
    def measure(self):
        """Track the peak allocation delta until the block exits.

        Nesting is allowed; each active measurement sees its own delta.
        """
        m = Measurement(self._current)
        self._active.append(m)
        try:
            yield m
        finally:
            self._active.remove(m)

    @contextmanager
    def borrow(self, bits):
        """Charge `bits` for the duration of the block (plain-list scratch)."""
        self.alloc(bits)
        try:
            yield
        finally:
            self.free(bits)


account = MemoryAccount()
