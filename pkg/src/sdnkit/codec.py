"""Self-delimiting number codec and packed sequences.

A value x >= 1 is written as 1^l 0 followed by the binary digits of x
without leading zeros, where l is the digit count; x = 0 is the single
bit 0.  The code is prefix free, so back-to-back codewords decode
without separators.  Codewords longer than a machine word are read and
written through multi-word field access, so values are bounded only by
container capacity.
"""

import struct

from .bits import BitSequence, copy_bits
from .errors import ContainerFullError, CorruptSequenceError, FormatError


def encoded_length(x):
    """Bit length of the codeword for x: 1 if x == 0, else 2*floor(log2 x)+3."""
    return 1 if x == 0 else 2 * x.bit_length() + 1


def codeword(x):
    """(width, value) of the codeword for x, ready for a field write."""
    if x == 0:
        return 1, 0
    l = x.bit_length()
    return 2 * l + 1, (((1 << l) - 1) << (l + 1)) | x


def encode(x):
    """Codeword for x as a '0'/'1' string."""
    width, value = codeword(x)
    return format(value, "b").zfill(width)


class SdnSequence:
    """k self-delimiting numbers packed back to back in a fixed bit budget.

    Single writer: append until sealed by use; readers may then iterate
    concurrently.  Decoding from bit 0 yields exactly `count` codewords
    ending at `write_cursor`.
    """

    __slots__ = ("bits", "count", "write_cursor")

    def __init__(self, capacity_bits):
        self.bits = BitSequence(capacity_bits)
        self.count = 0
        self.write_cursor = 0

    @classmethod
    def from_values(cls, values, capacity_bits=None):
        values = list(values)
        need = sum(encoded_length(x) for x in values)
        if capacity_bits is None:
            capacity_bits = need
        seq = cls(capacity_bits)
        for x in values:
            seq.append(x)
        return seq

    @property
    def capacity(self):
        return self.bits.len_bits

    def __len__(self):
        return self.count

    def append(self, x):
        width, value = codeword(x)
        pos = self.write_cursor
        if pos + width > self.bits.len_bits:
            raise ContainerFullError(
                f"codeword of {width} bits does not fit at {pos}/{self.bits.len_bits}"
            )
        self.bits.write(pos, width, value)
        self.write_cursor = pos + width
        self.count += 1
        return pos

    def decode_at(self, p):
        """Decode the codeword starting at bit p; returns (value, next position)."""
        cur = self.write_cursor
        if p < 0 or p >= cur:
            raise CorruptSequenceError(f"position {p} outside payload of {cur} bits")
        words = self.bits.words
        run = 0
        q = p
        while True:
            off = q & 63
            avail = 64 - off
            if q + avail > cur:
                avail = cur - q
            if avail <= 0:
                raise CorruptSequenceError(f"run of ones at bit {p} never terminates")
            mask = (1 << avail) - 1
            chunk = (words[q >> 6] >> (64 - off - avail)) & mask
            if chunk == mask:
                run += avail
                q += avail
                continue
            lead = avail - (chunk ^ mask).bit_length()
            run += lead
            q += lead + 1  # leading ones plus the 0 bit
            break
        if run == 0:
            return 0, q
        if q + run > cur:
            raise CorruptSequenceError(f"payload of codeword at bit {p} is truncated")
        return self.bits.read(q, run), q + run

    def iterate(self):
        """Yield (position, value) for every stored number, in order."""
        p = 0
        cur = self.write_cursor
        while p < cur:
            v, nxt = self.decode_at(p)
            yield p, v
            p = nxt

    def entries(self):
        """All (position, value) pairs as a list; one tight pass."""
        out = []
        cur = self.write_cursor
        words = self.bits.words
        read = self.bits.read
        p = 0
        while p < cur:
            start = p
            run = 0
            while True:
                off = p & 63
                avail = 64 - off
                if p + avail > cur:
                    avail = cur - p
                if avail <= 0:
                    raise CorruptSequenceError(
                        f"run of ones at bit {start} never terminates"
                    )
                mask = (1 << avail) - 1
                chunk = (words[p >> 6] >> (64 - off - avail)) & mask
                if chunk == mask:
                    run += avail
                    p += avail
                    continue
                lead = avail - (chunk ^ mask).bit_length()
                run += lead
                p += lead + 1
                break
            if run == 0:
                out.append((start, 0))
                continue
            if p + run > cur:
                raise CorruptSequenceError(
                    f"payload of codeword at bit {start} is truncated"
                )
            out.append((start, read(p, run)))
            p += run
        return out

    def values(self):
        return [v for _, v in self.entries()]

    def scan_lengths(self):
        """All (position, codeword length) pairs without decoding payloads."""
        out = []
        cur = self.write_cursor
        words = self.bits.words
        p = 0
        while p < cur:
            run = 0
            q = p
            while True:
                off = q & 63
                avail = 64 - off
                if q + avail > cur:
                    avail = cur - q
                if avail <= 0:
                    raise CorruptSequenceError(
                        f"run of ones at bit {p} never terminates"
                    )
                mask = (1 << avail) - 1
                chunk = (words[q >> 6] >> (64 - off - avail)) & mask
                if chunk == mask:
                    run += avail
                    q += avail
                    continue
                run += avail - (chunk ^ mask).bit_length()
                break
            length = 1 if run == 0 else 2 * run + 1
            if p + length > cur:
                raise CorruptSequenceError(
                    f"payload of codeword at bit {p} is truncated"
                )
            out.append((p, length))
            p += length
        return out

    def copy_payload_from(self, src, src_pos, dst_pos, width):
        copy_bits(self.bits, dst_pos, src.bits, src_pos, width)


# Binary container: magic, u32 version, u64 payload bits, u64 count,
# then ceil(N/8) payload bytes with bit 0 in the MSB of byte 0.
# All header integers are little endian.
CONTAINER_MAGIC = b"SDN1"
CONTAINER_VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


def write_container(seq, fobj):
    fobj.write(
        _HEADER.pack(CONTAINER_MAGIC, CONTAINER_VERSION, seq.write_cursor, seq.count)
    )
    payload = seq.bits.to_bytes()[: (seq.write_cursor + 7) >> 3]
    fobj.write(payload)


def read_container(fobj):
    head = fobj.read(_HEADER.size)
    if len(head) != _HEADER.size:
        raise FormatError("container header truncated")
    magic, version, n_bits, count = _HEADER.unpack(head)
    if magic != CONTAINER_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != CONTAINER_VERSION:
        raise FormatError(f"unsupported container version {version}")
    payload = fobj.read((n_bits + 7) >> 3)
    if len(payload) != (n_bits + 7) >> 3:
        raise FormatError("container payload truncated")
    seq = SdnSequence(0)
    seq.bits = BitSequence.from_bytes(payload, n_bits)
    seq.write_cursor = n_bits
    seq.count = count
    return seq
