"""Bit-sequence container, rank/select index and the shared lookup tables.

Bit-order convention, used by every module in the package: logical bit 0
is the most significant bit of word 0.  A field read at position p with
width w returns the bits p .. p+w-1 assembled left to right into the low
bits of an integer, i.e. the bit at p becomes the most significant bit
of the returned value.  Serialising a sequence to bytes therefore puts
bit 0 into the MSB of byte 0.
"""

from bisect import bisect_right

from .memory import account

WORD_BITS = 64
_WORD_MASK = (1 << WORD_BITS) - 1

# Half-frames (lookup-table operands) never exceed this many bits, so a
# table has at most 2**16 entries regardless of input size.
TABLE_CAP = 16


class BitSequence:
    """Fixed-capacity sequence of bits backed by a list of 64-bit words.

    Construction zero-fills in O(n/w) word writes.  Bits at positions
    >= len_bits read as zero.  Out-of-range positions are not checked in
    the accessors; callers stay within len_bits.
    """

    __slots__ = ("len_bits", "words", "_charged")

    def __init__(self, len_bits):
        nwords = (len_bits + 63) >> 6
        self.words = [0] * nwords
        self.len_bits = len_bits
        self._charged = nwords << 6
        account.alloc(self._charged)

    def __del__(self):
        try:
            account.free(self._charged)
        except Exception:
            pass

    def get(self, i):
        return (self.words[i >> 6] >> (63 - (i & 63))) & 1

    def set(self, i, bit=1):
        w = i >> 6
        sh = 63 - (i & 63)
        if bit:
            self.words[w] |= 1 << sh
        else:
            self.words[w] &= ~(1 << sh)

    def read(self, pos, width):
        """Value of bits [pos, pos+width), first bit most significant."""
        if width <= 0:
            return 0
        off = pos & 63
        end = off + width
        w = pos >> 6
        words = self.words
        if end <= 64:
            return (words[w] >> (64 - end)) & ((1 << width) - 1)
        if width <= 64:
            spill = end - 64
            return ((words[w] & ((1 << (64 - off)) - 1)) << spill) | (
                words[w + 1] >> (64 - spill)
            )
        # wide field: assemble word-sized chunks
        val = 0
        p = pos
        left = width
        while left > 0:
            take = 64 - (p & 63)
            if take > left:
                take = left
            val = (val << take) | self.read(p, take)
            p += take
            left -= take
        return val

    def write(self, pos, width, value):
        """Store the low `width` bits of value at [pos, pos+width)."""
        if width <= 0:
            return
        off = pos & 63
        end = off + width
        w = pos >> 6
        words = self.words
        if end <= 64:
            sh = 64 - end
            mask = ((1 << width) - 1) << sh
            words[w] = (words[w] & ~mask) | ((value << sh) & mask)
            return
        if width <= 64:
            spill = end - 64
            hi = value >> spill
            lo = value & ((1 << spill) - 1)
            keep = 64 - off
            mask = (1 << keep) - 1
            words[w] = (words[w] & ~mask) | (hi & mask)
            words[w + 1] = (words[w + 1] & (_WORD_MASK >> spill)) | (
                lo << (64 - spill)
            )
            return
        p = pos
        left = width
        while left > 0:
            take = 64 - (p & 63)
            if take > left:
                take = left
            left -= take
            self.write(p, take, (value >> left) & ((1 << take) - 1))
            p += take

    def to_bytes(self):
        nbytes = (self.len_bits + 7) >> 3
        raw = b"".join(w.to_bytes(8, "big") for w in self.words)
        return raw[:nbytes]

    @classmethod
    def from_bytes(cls, data, len_bits):
        seq = cls(len_bits)
        words = seq.words
        nwords = len(words)
        padded = data + b"\x00" * (nwords * 8 - len(data))
        for i in range(nwords):
            words[i] = int.from_bytes(padded[8 * i : 8 * i + 8], "big")
        # clear any slack bits past len_bits
        tail = len_bits & 63
        if nwords and tail:
            words[-1] &= _WORD_MASK ^ ((1 << (64 - tail)) - 1)
        return seq


def zero_fill(n_bits):
    """Allocate an all-zero sequence of n_bits (O(n/w) word writes)."""
    return BitSequence(n_bits)


def copy_bits(dst, dpos, src, spos, width):
    """Copy `width` bits between sequences in 64-bit chunks."""
    while width > 0:
        take = width if width < 64 else 64
        dst.write(dpos, take, src.read(spos, take))
        dpos += take
        spos += take
        width -= take


class RankSelectIndex:
    """Static rank/select over an immutable BitSequence.

    Two-level counting: absolute 32-bit counts every 512 bits plus 16-bit
    within-superblock counts per 64-bit word, costing 0.3125 bits per
    input bit.  rank is O(1); select binary-searches the superblock
    directory and finishes with word popcounts, O(log(n/512) + 8).

    rank(j) counts ones among the first j bits, which equals the
    1-indexed-inclusive convention rank_B(j) over bits b_1..b_j.
    select(k) returns the 0-indexed position of the k-th one (k >= 1);
    select1(k) returns the same position 1-indexed.
    """

    __slots__ = ("base", "sb", "blk", "total_ones", "_charged")

    def __init__(self, base):
        self.base = base
        words = base.words
        sb = []
        blk = []
        total = 0
        for j, w in enumerate(words):
            if not j & 7:
                sb.append(total)
            blk.append(total - sb[-1])
            total += w.bit_count()
        self.sb = sb
        self.blk = blk
        self.total_ones = total
        self._charged = len(sb) * 32 + len(blk) * 16
        account.alloc(self._charged)

    def __del__(self):
        try:
            account.free(self._charged)
        except Exception:
            pass

    def rank(self, j):
        """Number of ones among the first j bits (0 <= j <= len)."""
        if j <= 0:
            return 0
        if j >= self.base.len_bits:
            return self.total_ones
        w = j >> 6
        r = self.sb[w >> 3] + self.blk[w]
        off = j & 63
        if off:
            r += (self.base.words[w] >> (64 - off)).bit_count()
        return r

    def select(self, k):
        """0-indexed position of the k-th one, 1 <= k <= total_ones."""
        if k < 1 or k > self.total_ones:
            raise ValueError(f"select({k}) out of range (ones={self.total_ones})")
        i = bisect_right(self.sb, k - 1) - 1
        base = self.sb[i]
        blk = self.blk
        words = self.base.words
        w = i << 3
        last = min(w + 8, len(words))
        while w + 1 < last and base + blk[w + 1] < k:
            w += 1
        need = k - base - blk[w]
        word = words[w]
        pos = w << 6
        for sh in range(56, -1, -8):
            b = (word >> sh) & 0xFF
            c = b.bit_count()
            if c >= need:
                for bit in range(7, -1, -1):
                    if (b >> bit) & 1:
                        need -= 1
                        if not need:
                            return pos + (7 - bit)
                break
            need -= c
            pos += 8
        raise AssertionError("select fell through")

    def select1(self, k):
        """1-indexed position of the k-th one."""
        return self.select(k) + 1


def build_rank_select(b):
    """Index an immutable BitSequence for O(1) rank and fast select."""
    return RankSelectIndex(b)


class PopcountTable:
    """entries[z] = number of one bits of z, for z < 2**half_frame_bits."""

    __slots__ = ("half_frame_bits", "entries")

    def __init__(self, half_frame_bits):
        if not 1 <= half_frame_bits <= TABLE_CAP:
            raise ValueError(
                f"half frame of {half_frame_bits} bits exceeds table cap {TABLE_CAP}"
            )
        self.half_frame_bits = half_frame_bits
        self.entries = [z.bit_count() for z in range(1 << half_frame_bits)]
        account.alloc_table((1 << half_frame_bits) * 16)


class PrefixSumTable:
    """Sums of the codeword values packed into one half-frame.

    entries[e] decodes the half_frame_bits of e from the most significant
    bit down as self-delimiting codewords and sums their values; a
    trailing fragment that is not a complete codeword is ignored.
    """

    __slots__ = ("half_frame_bits", "entries")

    def __init__(self, half_frame_bits):
        if not 1 <= half_frame_bits <= TABLE_CAP:
            raise ValueError(
                f"half frame of {half_frame_bits} bits exceeds table cap {TABLE_CAP}"
            )
        self.half_frame_bits = half_frame_bits
        h = half_frame_bits
        self.entries = [_frame_value_sum(e, h) for e in range(1 << h)]
        account.alloc_table((1 << h) * 32)


def _frame_value_sum(e, width):
    """Decode `width` bits of e MSB-first as codewords and sum the values."""
    total = 0
    i = width
    while i > 0:
        run = 0
        while i > 0 and (e >> (i - 1)) & 1:
            run += 1
            i -= 1
        if i == 0:
            break  # run of ones hit the frame edge: incomplete
        i -= 1  # the 0 bit: terminator of the run (or a zero codeword)
        if run == 0:
            continue  # value 0 contributes nothing
        if i < run:
            break  # payload truncated by the frame edge
        i -= run
        total += (e >> i) & ((1 << run) - 1)
    return total


def build_popcount_table(tau):
    """Population-count table for frames of ceil(tau/2) bits."""
    return PopcountTable((tau + 1) // 2)


def build_prefixsum_table(tau):
    """Codeword-sum table for frames of ceil(tau/2) bits."""
    return PrefixSumTable((tau + 1) // 2)


_pop_cache = {}
_prefix_cache = {}


def get_popcount_table(half_frame_bits):
    t = _pop_cache.get(half_frame_bits)
    if t is None:
        t = PopcountTable(half_frame_bits)
        _pop_cache[half_frame_bits] = t
    return t


def get_prefixsum_table(half_frame_bits):
    t = _prefix_cache.get(half_frame_bits)
    if t is None:
        t = PrefixSumTable(half_frame_bits)
        _prefix_cache[half_frame_bits] = t
    return t
