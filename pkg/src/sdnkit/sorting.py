"""Stable sorting of packed self-delimiting numbers in O(N) auxiliary bits.

The pipeline splits the input at a capacity-derived threshold.  Values at
or below the threshold are presorted into areas of equal codeword length
by counting, then each area is finished with LSD radix passes over
half-frame digits.  Values above the threshold are sorted as strings:
(length, position) pairs are permuted by the digit passes and the
payload bits are moved exactly once at the end.

Codewords of equal length compare by value exactly as their raw bits
compare, and longer codewords always encode larger values, so both the
area split and the in-area digit passes order by numeric value.
"""

import threading
from dataclasses import dataclass

from .bits import BitSequence, TABLE_CAP, copy_bits
from .codec import SdnSequence
from .memory import account

DEFAULT_LOOKUP_BITS = 32


@dataclass(frozen=True)
class SortConfig:
    """Operand width for table-driven passes.

    lookup_bits plays the role of the word budget for one indirect
    addressing step; digit passes use half of it (rounded up) so one
    table size serves counting, popcount and prefix-sum lookups.
    """

    lookup_bits: int = DEFAULT_LOOKUP_BITS

    def __post_init__(self):
        if not 2 <= self.lookup_bits <= 2 * TABLE_CAP:
            raise ValueError(
                f"lookup_bits must be in [2, {2 * TABLE_CAP}], got {self.lookup_bits}"
            )

    @property
    def half_frame_bits(self):
        return (self.lookup_bits + 1) // 2


def small_value_cap(n_bits, cfg):
    """Largest value treated as small for an n_bits container: 2^(n/lookup)."""
    return 1 << max(1, n_bits // cfg.lookup_bits)


class AreaDirectory:
    """Per-codeword-length counts and running write offsets.

    offsets[L] starts at the first bit of the length-L area; the
    distribution pass advances it by L per stored number, so afterwards
    every offset sits at the end of its area.
    """

    __slots__ = ("counts", "offsets", "max_len")

    def __init__(self, counts_by_len):
        max_len = max(counts_by_len) if counts_by_len else 0
        counts = [0] * (max_len + 1)
        for length, c in counts_by_len.items():
            counts[length] = c
        offsets = [0] * (max_len + 1)
        for i in range(2, max_len + 1):
            offsets[i] = offsets[i - 1] + (i - 1) * counts[i - 1]
        self.counts = counts
        self.offsets = offsets
        self.max_len = max_len


class _Scratch:
    """Reusable per-thread counting machinery for one half-frame width."""

    __slots__ = ("hist", "dirty")

    def __init__(self, half_frame_bits):
        self.hist = [0] * (1 << half_frame_bits)
        self.dirty = []
        account.alloc_table((1 << half_frame_bits) * 32)


_tls = threading.local()


def _scratch(half_frame_bits):
    table = getattr(_tls, "scratch", None)
    if table is None:
        table = {}
        _tls.scratch = table
    s = table.get(half_frame_bits)
    if s is None:
        s = _Scratch(half_frame_bits)
        table[half_frame_bits] = s
    return s


def _payload_value(bits, pos, length):
    """Value of the codeword at pos given its total length."""
    if length == 1:
        return 0
    run = (length - 1) >> 1
    return bits.read(pos + run + 1, run)


def presort_small(seq, cfg=None, *, tags=None, value_cap=None, out_capacity=None, items=None):
    """Stable sort of a sequence whose values are all at most value_cap.

    Numbers are distributed into areas of equal codeword length by a
    counting pass, then each area is radix sorted over half-frame
    digits.  Returns a new sequence of out_capacity bits (defaults to
    the input capacity); with tags, returns (sequence, permuted tags).
    """
    cfg = cfg or SortConfig()
    hf = cfg.half_frame_bits
    if out_capacity is None:
        out_capacity = seq.bits.len_bits
    cap = value_cap if value_cap is not None else small_value_cap(seq.bits.len_bits, cfg)
    cap_len = 1 if cap == 0 else 2 * cap.bit_length() + 1
    if items is None:
        items = seq.scan_lengths()

    src_bits = seq.bits
    counts_by_len = {}
    for pos, length in items:
        if length > cap_len or (
            length == cap_len and _payload_value(src_bits, pos, length) > cap
        ):
            raise ValueError("value above the small cap passed to the small sorter")
        counts_by_len[length] = counts_by_len.get(length, 0) + 1
    k = len(items)

    out = SdnSequence(out_capacity)
    out.count = k
    out.write_cursor = seq.write_cursor
    if k == 0:
        return (out, []) if tags is not None else out

    directory = AreaDirectory(counts_by_len)
    max_len = directory.max_len
    with account.borrow((max_len + 1) * 2 * 32):
        counts = directory.counts
        starts = list(directory.offsets)
        write_off = directory.offsets
        out_tags = None
        num_before = [0] * (max_len + 2)
        for length in range(1, max_len + 1):
            num_before[length + 1] = num_before[length] + counts[length]
        if tags is not None:
            out_tags = [None] * k
            placed = [0] * (max_len + 1)

        dst_bits = out.bits
        sread = src_bits.read
        dwrite = dst_bits.write
        j = 0
        for pos, length in items:
            off = write_off[length]
            if length <= 64:
                dwrite(off, length, sread(pos, length))
            else:
                copy_bits(dst_bits, off, src_bits, pos, length)
            write_off[length] = off + length
            if out_tags is not None:
                dest = num_before[length] + placed[length]
                placed[length] += 1
                out_tags[dest] = tags[j]
            j += 1

        if any(c >= 2 for c in counts_by_len.values()):
            scratch = _scratch(hf)
            widest = max(
                length * c for length, c in counts_by_len.items() if c >= 2
            )
            with account.borrow(widest):  # staging list for the largest area
                for length in sorted(counts_by_len):
                    c = counts[length]
                    if c >= 2:
                        area_tags = (
                            out_tags[num_before[length] : num_before[length] + c]
                            if out_tags is not None
                            else None
                        )
                        _radix_area(
                            dst_bits, starts[length], c, length, hf, scratch, area_tags
                        )
                        if area_tags is not None:
                            out_tags[
                                num_before[length] : num_before[length] + c
                            ] = area_tags

    return (out, out_tags) if out_tags is not None else out


def _radix_area(buf, start_bit, m, length, hf, scratch, tags):
    """LSD radix sort of m equal-length codewords stored back to back.

    The numbers are staged through an integer list (one field read and
    one write each); digit extraction and the per-pass moves then run on
    plain integers, costing O(length/word) word operations per touch
    exactly like a two-buffer bit shuffle would.
    """
    hist = scratch.hist
    dirty = scratch.dirty
    mask = (1 << hf) - 1
    npass = (length + hf - 1) // hf

    sread = buf.read
    p = start_bit
    vals = [0] * m
    for j in range(m):
        vals[j] = sread(p, length)
        p += length
    cur_tags = tags
    alt_tags = [None] * m if tags is not None else None
    for d in range(npass):
        shift = d * hf
        for v in vals:
            dig = (v >> shift) & mask
            if not hist[dig]:
                dirty.append(dig)
            hist[dig] += 1
        if len(dirty) == 1:
            # single digit value: the pass is the identity
            hist[dirty[0]] = 0
            dirty.clear()
            continue
        dirty.sort()
        run = 0
        for dig in dirty:
            c = hist[dig]
            hist[dig] = run
            run += c
        nxt = [0] * m
        if cur_tags is None:
            for v in vals:
                dig = (v >> shift) & mask
                slot = hist[dig]
                hist[dig] = slot + 1
                nxt[slot] = v
        else:
            for j, v in enumerate(vals):
                dig = (v >> shift) & mask
                slot = hist[dig]
                hist[dig] = slot + 1
                nxt[slot] = v
                alt_tags[slot] = cur_tags[j]
            cur_tags, alt_tags = alt_tags, cur_tags
        for dig in dirty:
            hist[dig] = 0
        dirty.clear()
        vals = nxt
    dwrite = buf.write
    p = start_bit
    for v in vals:
        dwrite(p, length, v)
        p += length
    if tags is not None and cur_tags is not tags:
        tags[:] = cur_tags


def sort_big(seq, cfg=None, *, tags=None, value_floor=None, out_capacity=None, items=None):
    """Stable sort of a sequence whose values all exceed value_floor.

    The numbers stay put while (length, position) pairs are counting
    sorted by length and then radix sorted digit by digit; each payload
    is moved O(length / half_frame) word chunks in the two rewrite
    passes, never re-read wholesale per digit pass.
    """
    cfg = cfg or SortConfig()
    hf = cfg.half_frame_bits
    if out_capacity is None:
        out_capacity = seq.bits.len_bits
    floor = (
        value_floor
        if value_floor is not None
        else small_value_cap(seq.bits.len_bits, cfg)
    )
    floor_len = 1 if floor == 0 else 2 * floor.bit_length() + 1
    if items is None:
        items = seq.scan_lengths()

    for pos, length in items:
        if length < floor_len or (
            length == floor_len
            and _payload_value(seq.bits, pos, length) <= floor
        ):
            raise ValueError("value at or below the floor passed to the big sorter")
    lens = [length for _, length in items]
    poss = [pos for pos, _ in items]
    k = len(items)

    out = SdnSequence(out_capacity)
    out.count = k
    out.write_cursor = seq.write_cursor
    if k == 0:
        return (out, []) if tags is not None else out
    if k == 1:
        copy_bits(out.bits, 0, seq.bits, poss[0], lens[0])
        return (out, list(tags)) if tags is not None else out

    with account.borrow(k * 3 * 64):
        order = _counting_sort_by_key(list(range(k)), lens, hf)

        # rewrite into length areas, recording (length, start bit, count)
        staged = BitSequence(seq.write_cursor)
        pos2 = [0] * k
        areas = []
        cursor = 0
        prev_len = -1
        for rank_idx, j in enumerate(order):
            length = lens[j]
            if length != prev_len:
                areas.append([length, cursor, rank_idx, 0])
                prev_len = length
            copy_bits(staged, cursor, seq.bits, poss[j], length)
            pos2[rank_idx] = cursor
            cursor += length
            areas[-1][3] += 1

        # per-area digit passes permute pair indices only
        final_order = list(range(k))
        for length, start_bit, first, m in areas:
            if m < 2:
                continue
            idx = final_order[first : first + m]
            npass = (length + hf - 1) // hf
            for d in range(npass):
                width = length - d * hf
                if width > hf:
                    width = hf
                lo = length - d * hf - width
                keys = [staged.read(pos2[i] + lo, width) for i in idx]
                idx = _counting_sort_permute(idx, keys, hf)
            final_order[first : first + m] = idx

        out_tags = [None] * k if tags is not None else None
        cursor = 0
        for dest, i in enumerate(final_order):
            j = order[i]
            length = lens[j]
            copy_bits(out.bits, cursor, staged, pos2[i], length)
            cursor += length
            if out_tags is not None:
                out_tags[dest] = tags[j]
        del staged

    return (out, out_tags) if out_tags is not None else out


def _counting_sort_by_key(items, keys, hf):
    """Stable LSD radix of items by integer keys, hf-bit digits."""
    scratch = _scratch(hf)
    hist = scratch.hist
    dirty = scratch.dirty
    max_key = max(keys[i] for i in items)
    shift = 0
    while True:
        for i in items:
            dig = (keys[i] >> shift) & ((1 << hf) - 1)
            if not hist[dig]:
                dirty.append(dig)
            hist[dig] += 1
        dirty.sort()
        run = 0
        for dig in dirty:
            c = hist[dig]
            hist[dig] = run
            run += c
        nxt = [0] * len(items)
        for i in items:
            dig = (keys[i] >> shift) & ((1 << hf) - 1)
            nxt[hist[dig]] = i
            hist[dig] += 1
        for dig in dirty:
            hist[dig] = 0
        dirty.clear()
        items = nxt
        shift += hf
        if (max_key >> shift) == 0:
            return items


def _counting_sort_permute(idx, keys, hf):
    """One stable counting pass of idx by parallel keys (already digit-sized)."""
    scratch = _scratch(hf)
    hist = scratch.hist
    dirty = scratch.dirty
    for dig in keys:
        if not hist[dig]:
            dirty.append(dig)
        hist[dig] += 1
    dirty.sort()
    run = 0
    for dig in dirty:
        c = hist[dig]
        hist[dig] = run
        run += c
    nxt = [0] * len(idx)
    for j, dig in enumerate(keys):
        nxt[hist[dig]] = idx[j]
        hist[dig] += 1
    for dig in dirty:
        hist[dig] = 0
    dirty.clear()
    return nxt


def sort(seq, cfg=None, *, tags=None, items=None):
    """Stable full sort: split at the small cap, sort both halves, concatenate.

    Returns a sequence with the same capacity, payload length and count
    as the input; with tags, returns (sequence, permuted tags).  items,
    when given, are the known (position, length) pairs of seq.
    """
    cfg = cfg or SortConfig()
    n_bits = seq.bits.len_bits
    cap = small_value_cap(n_bits, cfg)
    cap_len = 2 * cap.bit_length() + 1

    if seq.write_cursor == 0:
        out = SdnSequence(n_bits)
        return (out, []) if tags is not None else out

    if items is None:
        items = seq.scan_lengths()
    src_bits = seq.bits
    small_bits = big_bits = 0
    flags = []
    for pos, length in items:
        if length < cap_len:
            small = True
        elif length > cap_len:
            small = False
        else:
            small = _payload_value(src_bits, pos, length) <= cap
        flags.append(small)
        if small:
            small_bits += length
        else:
            big_bits += length

    if big_bits == 0:
        return presort_small(seq, cfg, tags=tags, value_cap=cap, items=items)
    if small_bits == 0:
        return sort_big(seq, cfg, tags=tags, value_floor=cap, items=items)

    small_seq = SdnSequence(small_bits)
    big_seq = SdnSequence(big_bits)
    small_items = []
    big_items = []
    small_tags = [] if tags is not None else None
    big_tags = [] if tags is not None else None
    sread = src_bits.read
    j = 0
    for pos, length in items:
        if flags[j]:
            target, t_items, t_tags = small_seq, small_items, small_tags
        else:
            target, t_items, t_tags = big_seq, big_items, big_tags
        off = target.write_cursor
        if length <= 64:
            target.bits.write(off, length, sread(pos, length))
        else:
            copy_bits(target.bits, off, src_bits, pos, length)
        t_items.append((off, length))
        target.write_cursor = off + length
        target.count += 1
        if tags is not None:
            t_tags.append(tags[j])
        j += 1

    if tags is not None:
        small_sorted, small_tags = presort_small(
            small_seq, cfg, tags=small_tags, value_cap=cap, items=small_items
        )
        big_sorted, big_tags = sort_big(
            big_seq, cfg, tags=big_tags, value_floor=cap, items=big_items
        )
    else:
        small_sorted = presort_small(small_seq, cfg, value_cap=cap, items=small_items)
        big_sorted = sort_big(big_seq, cfg, value_floor=cap, items=big_items)
    del small_seq, big_seq

    out = SdnSequence(n_bits)
    copy_bits(out.bits, 0, small_sorted.bits, 0, small_sorted.write_cursor)
    copy_bits(
        out.bits,
        small_sorted.write_cursor,
        big_sorted.bits,
        0,
        big_sorted.write_cursor,
    )
    out.count = seq.count
    out.write_cursor = seq.write_cursor
    if tags is not None:
        return out, small_tags + big_tags
    return out
