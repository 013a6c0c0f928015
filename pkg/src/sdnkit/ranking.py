"""Constant-time dense and competitive rank over a packed sequence.

Both structures are built by sorting the sequence once and walking the
sorted values.  Values up to the payload bit count N are answered
through half-frame machinery (a presence bit vector plus frame prefix
sums for dense rank; per-region occurrence tables for competitive
rank).  Larger values get their precomputed answer written into an
N-bit overlay at the position their codeword occupies in the input, so
a query (position, value) is O(1) in every case.

Queries are only defined for (position, value) pairs that occur in the
input sequence; anything else returns garbage by contract.
"""

import struct

from .bits import (
    BitSequence,
    RankSelectIndex,
    copy_bits,
    get_popcount_table,
    get_prefixsum_table,
)
from .codec import SdnSequence, codeword, encoded_length
from .errors import FormatError
from .memory import account
from .sorting import SortConfig, presort_small, small_value_cap, sort


class QueryStats:
    """Worst-case access counts observed over all queries on a structure.

    directory: region/overlay directory slots touched (at most one).
    selects:   start-marker select calls.
    frames:    half-frame or overlay field reads.
    tables:    precomputed-array lookups (popcount, prefix-sum, frame
               prefix entries).
    """

    __slots__ = ("queries", "directory", "selects", "frames", "tables")

    def __init__(self):
        self.queries = 0
        self.directory = 0
        self.selects = 0
        self.frames = 0
        self.tables = 0

    def record(self, directory, selects, frames, tables):
        self.queries += 1
        if directory > self.directory:
            self.directory = directory
        if selects > self.selects:
            self.selects = selects
        if frames > self.frames:
            self.frames = frames
        if tables > self.tables:
            self.tables = tables


class _FixedArray:
    """Fixed-width unsigned entries packed into a BitSequence."""

    __slots__ = ("bits", "width", "length")

    def __init__(self, length, width):
        self.bits = BitSequence(length * width)
        self.width = width
        self.length = length

    def get(self, i):
        w = self.width
        return self.bits.read(i * w, w)

    def set(self, i, v):
        w = self.width
        self.bits.write(i * w, w, v)


_P_ENTRY_BITS = 32  # half-frame-wide prefix entries can overflow; fixed 32 stays flat


def _split_by_threshold(seq, threshold, cfg, entries=None):
    """Sort values <= threshold and > threshold separately.

    Returns (sorted small sequence, sorted big sequence, original bit
    positions permuted alongside the big values).  entries, when given,
    are the known (position, value) pairs of seq and spare the scans.
    """
    src_bits = seq.bits
    sread = src_bits.read
    if entries is None:
        items = seq.scan_lengths()
        thr_len = encoded_length(threshold)
        flags = []
        small_bits = big_bits = 0
        for pos, length in items:
            if length < thr_len:
                small = True
            elif length > thr_len:
                small = False
            else:
                run = (length - 1) >> 1
                small = (0 if run == 0 else sread(pos + run + 1, run)) <= threshold
            flags.append(small)
            if small:
                small_bits += length
            else:
                big_bits += length
    else:
        items = [(pos, encoded_length(v)) for pos, v in entries]
        flags = [v <= threshold for _, v in entries]
        small_bits = big_bits = 0
        for f, (_, length) in zip(flags, items):
            if f:
                small_bits += length
            else:
                big_bits += length

    small_seq = SdnSequence(small_bits)
    big_seq = SdnSequence(big_bits)
    small_items = []
    big_items = []
    big_positions = []
    j = 0
    for pos, length in items:
        if flags[j]:
            target, t_items = small_seq, small_items
        else:
            target, t_items = big_seq, big_items
            big_positions.append(pos)
        off = target.write_cursor
        if length <= 64:
            target.bits.write(off, length, sread(pos, length))
        else:
            copy_bits(target.bits, off, src_bits, pos, length)
        t_items.append((off, length))
        target.write_cursor = off + length
        target.count += 1
        j += 1

    small_sorted = _sort_with_items(small_seq, cfg, small_items)
    if big_seq.count:
        big_sorted, big_positions = sort(big_seq, cfg, tags=big_positions)
    else:
        big_sorted = big_seq
    return small_sorted, big_sorted, big_positions


def _sort_with_items(seq, cfg, items):
    if not items:
        return seq
    cap = small_value_cap(seq.bits.len_bits, cfg)
    cap_len = 2 * cap.bit_length() + 1
    if all(length < cap_len for _, length in items):
        return presort_small(seq, cfg, value_cap=cap, items=items)
    return sort(seq, cfg)


class DenseRankStructure:
    """Number of distinct smaller values, for members of one sequence.

    Small values are marked in a presence bit vector partitioned into
    half-frames; a prefix array gives the distinct count before each
    touched frame and a popcount lookup finishes within the frame.
    Entries for frames no value touches are never read and may hold
    anything.
    """

    __slots__ = (
        "n_bits",
        "half_frame",
        "threshold",
        "marks",
        "frame_prefix",
        "overlay",
        "overlay_width",
        "pop",
        "stats",
    )

    def __init__(self, n_bits, half_frame):
        self.n_bits = n_bits
        self.half_frame = half_frame
        self.threshold = n_bits
        nframes = (n_bits + half_frame) // half_frame + 1
        self.marks = BitSequence(nframes * half_frame)
        self.frame_prefix = _FixedArray(nframes + 1, _P_ENTRY_BITS)
        self.overlay = BitSequence(n_bits)
        self.overlay_width = max(1, n_bits.bit_length())
        self.pop = get_popcount_table(half_frame)
        self.stats = QueryStats()

    def rank(self, p_x, x):
        """Dense rank of the value x whose codeword starts at bit p_x."""
        if x > self.threshold:
            r = self.overlay.read(p_x, self.overlay_width)
            self.stats.record(1, 0, 1, 0)
            return r
        hf = self.half_frame
        frame = x // hf
        offset = x - frame * hf
        base = self.frame_prefix.get(frame)
        inside = self.pop.entries[self.marks.read(frame * hf, hf) >> (hf - offset)]
        self.stats.record(0, 0, 1, 2)
        return base + inside


def build_dense_rank(seq, cfg=None, *, entries=None):
    """Build a DenseRankStructure in one sort plus one sorted walk.

    entries, when given, are the known (position, value) pairs of seq.
    """
    cfg = cfg or SortConfig()
    hf = cfg.half_frame_bits
    n_bits = seq.write_cursor
    d = DenseRankStructure(n_bits, hf)
    if seq.count == 0:
        return d

    small_sorted, big_sorted, big_positions = _split_by_threshold(
        seq, d.threshold, cfg, entries
    )

    marks = d.marks
    prefix = d.frame_prefix
    distinct = 0
    cur_frame = -1
    prev = -1
    for _, x in small_sorted.entries():
        frame = x // hf
        if frame != cur_frame:
            prefix.set(frame, distinct)
            cur_frame = frame
        if x != prev:
            distinct += 1
            prev = x
            marks.set(x)

    width = d.overlay_width
    idx = 0
    for _, x in big_sorted.entries():
        if x != prev:
            distinct += 1
            prev = x
        rank_value = distinct - 1
        assert width < encoded_length(x), "overlay slot wider than the codeword"
        d.overlay.write(big_positions[idx], width, rank_value)
        idx += 1
    return d


def dense_rank(d, p_x, x):
    """Dense rank of x in the indexed sequence, given its bit position."""
    return d.rank(p_x, x)


class _RegionPacket:
    """Occurrence counts of one value region, frame aligned.

    counts_bits holds one codeword per region slot (0 for absent
    values); no codeword straddles a frame boundary, and a count too
    wide for one frame becomes an all-ones marker frame followed by two
    frames of plain binary.  starts marks the first bit of each slot's
    representation; frame_prefix[f] is the number of occurrences, over
    all regions so far, written before frame f began.
    """

    __slots__ = ("counts_bits", "starts", "start_index", "frame_prefix")

    def __init__(self, counts_bits, starts, start_index, frame_prefix):
        self.counts_bits = counts_bits
        self.starts = starts
        self.start_index = start_index
        self.frame_prefix = frame_prefix


class CompetitiveRankStructure:
    """Number of strictly smaller elements, with multiplicity."""

    __slots__ = (
        "n_bits",
        "half_frame",
        "threshold",
        "regions",
        "overlay",
        "overlay_width",
        "prefix_table",
        "stats",
    )

    def __init__(self, n_bits, half_frame):
        self.n_bits = n_bits
        self.half_frame = half_frame
        self.threshold = n_bits
        nregions = (n_bits + half_frame) // half_frame + 1
        self.regions = [None] * nregions
        account.alloc(nregions * 64)  # directory: one pointer slot per region
        self.overlay = BitSequence(n_bits)
        self.overlay_width = max(1, n_bits.bit_length())
        self.prefix_table = get_prefixsum_table(half_frame)
        self.stats = QueryStats()

    def __del__(self):
        try:
            account.free(len(self.regions) * 64)
        except Exception:
            pass

    def rank(self, p_x, x):
        """Competitive rank of the value x whose codeword starts at bit p_x."""
        if x > self.threshold:
            r = self.overlay.read(p_x, self.overlay_width)
            self.stats.record(1, 0, 1, 0)
            return r
        hf = self.half_frame
        region = x // hf
        packet = self.regions[region]
        slot = x - region * hf
        p = packet.start_index.select(slot + 1)
        frame = p // hf
        z = packet.counts_bits.read(frame * hf, hf)
        full = (1 << hf) - 1
        if z == full:
            base = packet.frame_prefix.get(frame)
            self.stats.record(1, 1, 3, 1)
            return base
        offset = p - frame * hf
        truncated = (z >> (hf - offset)) << (hf - offset) if offset else 0
        base = packet.frame_prefix.get(frame)
        inside = self.prefix_table.entries[truncated]
        self.stats.record(1, 1, 1, 2)
        return base + inside


def _build_region_packet(counts, hf, running_total):
    """Lay out one region's occurrence counts; returns (packet, new total).

    counts[i] is the multiplicity of the region's i-th value.  The
    layout walk is run twice: once to size the arrays, once to fill
    them.
    """
    widths = [encoded_length(c) for c in counts]

    pos = 0
    for w in widths:
        off = pos % hf
        rem = hf - off
        if w <= rem:
            pos += w
        elif w <= hf:
            pos += rem + w
        else:
            if off:
                pos += rem
            pos += 3 * hf
    total_bits = ((pos + hf - 1) // hf) * hf
    nframes = total_bits // hf

    counts_bits = BitSequence(total_bits)
    starts = BitSequence(total_bits)
    frame_prefix = _FixedArray(nframes + 1, _P_ENTRY_BITS)

    pos = 0
    filled_frame = -1
    full_frame = (1 << hf) - 1
    for i, c in enumerate(counts):
        w = widths[i]
        off = pos % hf
        rem = hf - off
        if w <= rem:
            start = pos
        elif w <= hf:
            start = pos + rem
        else:
            start = pos + rem if off else pos
        frame = start // hf
        while filled_frame < frame:
            filled_frame += 1
            frame_prefix.set(filled_frame, running_total)
        if w <= hf:
            cw_width, cw_value = codeword(c)
            counts_bits.write(start, cw_width, cw_value)
            pos = start + w
        else:
            assert c.bit_length() <= 2 * hf, "count exceeds two binary frames"
            counts_bits.write(start, hf, full_frame)
            counts_bits.write(start + hf, 2 * hf, c)
            while filled_frame < frame + 2:
                filled_frame += 1
                frame_prefix.set(filled_frame, running_total)
            pos = start + 3 * hf
        starts.set(start)
        running_total += c
    while filled_frame < nframes:
        filled_frame += 1
        frame_prefix.set(filled_frame, running_total)

    packet = _RegionPacket(
        counts_bits, starts, RankSelectIndex(starts), frame_prefix
    )
    return packet, running_total


def build_rank(seq, cfg=None):
    """Build a CompetitiveRankStructure in one sort plus one sorted walk."""
    cfg = cfg or SortConfig()
    hf = cfg.half_frame_bits
    n_bits = seq.write_cursor
    r = CompetitiveRankStructure(n_bits, hf)
    if seq.count == 0:
        return r

    small_sorted, big_sorted, big_positions = _split_by_threshold(
        seq, r.threshold, cfg
    )

    running = 0
    cur_region = -1
    counts = [0] * hf
    for _, x in small_sorted.entries():
        region = x // hf
        if region != cur_region:
            if cur_region >= 0:
                r.regions[cur_region], running = _build_region_packet(
                    counts, hf, running
                )
                counts = [0] * hf
            cur_region = region
        counts[x - region * hf] += 1
    if cur_region >= 0:
        r.regions[cur_region], running = _build_region_packet(counts, hf, running)

    width = r.overlay_width
    idx = 0
    prev = None
    group_base = running
    for _, x in big_sorted.entries():
        if x != prev:
            group_base = running
            prev = x
        assert width < encoded_length(x), "overlay slot wider than the codeword"
        r.overlay.write(big_positions[idx], width, group_base)
        running += 1
        idx += 1
    return r


def rank(r, p_x, x):
    """Competitive rank of x in the indexed sequence, given its bit position."""
    return r.rank(p_x, x)


# -- serialization ----------------------------------------------------------
#
# Both structures serialize as: magic, u32 version, u64 n_bits, u32
# half_frame, then raw little-endian sections.  Bit payloads are stored
# via their byte form; fixed arrays via (length, width, bytes).

_DENSE_MAGIC = b"SDR1"
_COMP_MAGIC = b"SCR1"
_SER_VERSION = 1


def _pack_bits(b):
    raw = b.to_bytes()
    return struct.pack("<QI", b.len_bits, len(raw)) + raw


def _unpack_bits(buf, off):
    len_bits, nraw = struct.unpack_from("<QI", buf, off)
    off += 12
    seq = BitSequence.from_bytes(buf[off : off + nraw], len_bits)
    return seq, off + nraw


def _pack_fixed(a):
    return struct.pack("<QI", a.length, a.width) + _pack_bits(a.bits)


def _unpack_fixed(buf, off):
    length, width = struct.unpack_from("<QI", buf, off)
    off += 12
    bits, off = _unpack_bits(buf, off)
    arr = _FixedArray.__new__(_FixedArray)
    arr.bits = bits
    arr.width = width
    arr.length = length
    return arr, off


def dense_to_bytes(d):
    out = [struct.pack("<4sIQI", _DENSE_MAGIC, _SER_VERSION, d.n_bits, d.half_frame)]
    out.append(_pack_bits(d.marks))
    out.append(_pack_fixed(d.frame_prefix))
    out.append(_pack_bits(d.overlay))
    return b"".join(out)


def dense_from_bytes(buf):
    magic, version, n_bits, hf = struct.unpack_from("<4sIQI", buf, 0)
    if magic != _DENSE_MAGIC or version != _SER_VERSION:
        raise FormatError("not a dense rank section")
    d = DenseRankStructure(n_bits, hf)
    off = struct.calcsize("<4sIQI")
    d.marks, off = _unpack_bits(buf, off)
    d.frame_prefix, off = _unpack_fixed(buf, off)
    d.overlay, off = _unpack_bits(buf, off)
    return d


def rank_to_bytes(r):
    out = [
        struct.pack(
            "<4sIQII",
            _COMP_MAGIC,
            _SER_VERSION,
            r.n_bits,
            r.half_frame,
            len(r.regions),
        )
    ]
    for packet in r.regions:
        if packet is None:
            out.append(b"\x00")
            continue
        out.append(b"\x01")
        out.append(_pack_bits(packet.counts_bits))
        out.append(_pack_bits(packet.starts))
        out.append(_pack_fixed(packet.frame_prefix))
    out.append(_pack_bits(r.overlay))
    return b"".join(out)


def rank_from_bytes(buf):
    magic, version, n_bits, hf, nregions = struct.unpack_from("<4sIQII", buf, 0)
    if magic != _COMP_MAGIC or version != _SER_VERSION:
        raise FormatError("not a competitive rank section")
    r = CompetitiveRankStructure(n_bits, hf)
    off = struct.calcsize("<4sIQII")
    regions = []
    for _ in range(nregions):
        flag = buf[off]
        off += 1
        if not flag:
            regions.append(None)
            continue
        counts_bits, off = _unpack_bits(buf, off)
        starts, off = _unpack_bits(buf, off)
        frame_prefix, off = _unpack_fixed(buf, off)
        regions.append(
            _RegionPacket(counts_bits, starts, RankSelectIndex(starts), frame_prefix)
        )
    account.free(len(r.regions) * 64)
    account.alloc(len(regions) * 64)
    r.regions = regions
    r.overlay, off = _unpack_bits(buf, off)
    return r
