"""Seeded bounded-independence randomness for the query algorithms.

Everything random in a query -- center coins, marking coins, phase coins,
sampled indices, concatenated rank blocks -- is a pure function of a 64-bit
master seed.  Functions are drawn from the polynomial d-wise independent
family over GF(2^w): a hash with input width gamma and output width beta is
a degree-(d-1) polynomial with d coefficients over GF(2^w), w = max(gamma,
beta), truncated to the low beta bits.  Drawing one consumes exactly
d*max(gamma, beta) bits of the seed expansion, and an accounting counter
tracks the total so the polylogarithmic seed budget is testable.

The master seed is expanded into the required bit pool with a counter-mode
SHA-256 stream, domain-separated by a role label per drawn function.  The
d-wise independence guarantees hold over the coefficient space itself; the
expansion is engineering plumbing, and the exactness tests enumerate the
coefficient space directly.
"""

from __future__ import annotations

import hashlib
from array import array
from dataclasses import dataclass

# Lexicographically smallest irreducible polynomial of each degree over
# GF(2), found by brute-force search and re-verified by the test suite.
IRREDUCIBLE = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11B,
    9: 0x203, 10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201B, 14: 0x4021,
    15: 0x8003, 16: 0x1002B, 17: 0x20009, 18: 0x40009, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x100001B,
    25: 0x2000009, 26: 0x400001B, 27: 0x8000027, 28: 0x10000003,
    29: 0x20000005, 30: 0x40000003, 31: 0x80000009, 32: 0x10000008D,
    33: 0x20000004B, 34: 0x40000001B, 35: 0x800000005, 36: 0x1000000035,
    37: 0x200000003F, 38: 0x4000000063, 39: 0x8000000011, 40: 0x10000000039,
    41: 0x20000000009, 42: 0x40000000027, 43: 0x80000000059,
    44: 0x100000000021, 45: 0x20000000001B, 46: 0x400000000003,
    47: 0x800000000021, 48: 0x100000000002D, 49: 0x2000000000071,
    50: 0x400000000001D, 51: 0x800000000004B, 52: 0x10000000000009,
    53: 0x20000000000047, 54: 0x4000000000007D, 55: 0x80000000000047,
    56: 0x100000000000095, 57: 0x200000000000011, 58: 0x400000000000063,
    59: 0x80000000000007B, 60: 0x1000000000000003, 61: 0x2000000000000027,
    62: 0x4000000000000069, 63: 0x8000000000000003,
    64: 0x1000000000000001B,
}

# Widths up to this get exp/log multiplication tables (array-backed, built
# lazily); wider fields fall back to shift-and-reduce multiplication.
_TABLE_MAX_W = 20

_tables: dict = {}


def _slow_mul(a: int, b: int, w: int) -> int:
    poly = IRREDUCIBLE[w]
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> w:
            a ^= poly
    return r


def _build_tables(w: int):
    size = 1 << w
    order = size - 1
    g = 2
    while True:
        exp = array("q", [0] * (2 * order))
        log = array("q", [0] * size)
        x = 1
        ok = True
        for i in range(order):
            if x == 1 and i != 0:
                ok = False  # g's multiplicative order is a proper divisor
                break
            exp[i] = x
            log[x] = i
            x = _slow_mul(x, g, w)
        if ok and x == 1:
            for i in range(order):
                exp[order + i] = exp[i]
            log[1] = 0
            return exp, log, order
        g += 1


def gf_mul(a: int, b: int, w: int) -> int:
    """Product in GF(2^w) modulo the documented irreducible polynomial."""
    if a == 0 or b == 0:
        return 0
    if w <= _TABLE_MAX_W:
        tab = _tables.get(w)
        if tab is None:
            tab = _tables[w] = _build_tables(w)
        exp, log, order = tab
        return exp[log[a] + log[b]]
    return _slow_mul(a, b, w)


@dataclass(frozen=True)
class HashFunction:
    """One member of the d-wise independent family H_{gamma,beta}.

    Evaluation is Horner's rule over GF(2^w); the result keeps only the low
    ``beta`` bits.  For any d distinct inputs the outputs are independent
    and uniform on beta-bit strings (the Vandermonde map from coefficients
    to values is a bijection), which the tests verify by enumeration for
    tiny parameters.
    """

    gamma: int
    beta: int
    d: int
    coeffs: tuple

    def __post_init__(self):
        if self.d < 1 or self.gamma < 1 or self.beta < 0:
            raise ValueError("need d >= 1, gamma >= 1, beta >= 0")
        if len(self.coeffs) != self.d:
            raise ValueError("expected d coefficients")

    @property
    def width(self) -> int:
        return max(self.gamma, self.beta)

    def eval(self, x: int) -> int:
        if x >> self.gamma:
            raise ValueError(f"input {x} exceeds {self.gamma} bits")
        w = max(self.gamma, self.beta)
        coeffs = self.coeffs
        acc = coeffs[-1]
        if w <= _TABLE_MAX_W:
            tab = _tables.get(w)
            if tab is None:
                tab = _tables[w] = _build_tables(w)
            exp, log, order = tab
            if x == 0:
                acc = coeffs[0]
            else:
                lx = log[x]
                for i in range(self.d - 2, -1, -1):
                    if acc:
                        acc = exp[log[acc] + lx]
                    acc ^= coeffs[i]
        else:
            for i in range(self.d - 2, -1, -1):
                acc = _slow_mul(acc, x, w) ^ coeffs[i]
        return acc & ((1 << self.beta) - 1)


class MasterSeed:
    """64-bit human-facing seed plus the bit pool expanded from it.

    Each drawn hash function gets its own role label; repeated draws of the
    same (role, gamma, beta, d) return the identical function and are
    charged once.  ``bits_consumed`` is the accounting counter backing the
    seed-budget checks.
    """

    def __init__(self, value: int):
        self.value = value & 0xFFFFFFFFFFFFFFFF
        self.bits_consumed = 0
        self._cache = {}

    def _expand_bits(self, role: str, nbits: int) -> int:
        base = self.value.to_bytes(8, "big") + role.encode()
        out = b""
        ctr = 0
        while 8 * len(out) < nbits:
            out += hashlib.sha256(base + ctr.to_bytes(4, "big")).digest()
            ctr += 1
        return int.from_bytes(out, "big") >> (8 * len(out) - nbits)

    def draw_hash(self, role: str, gamma: int, beta: int, d: int) -> HashFunction:
        key = (role, gamma, beta, d)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        w = max(gamma, beta)
        if w > 64:
            raise ValueError(f"field width {w} unsupported")
        raw = self._expand_bits(role, d * w)
        mask = (1 << w) - 1
        coeffs = tuple((raw >> (w * i)) & mask for i in range(d))
        fn = HashFunction(gamma=gamma, beta=beta, d=d, coeffs=coeffs)
        self.bits_consumed += d * w
        self._cache[key] = fn
        return fn


def independence_order(n: int) -> int:
    """d = 2*ceil(log2 n), the order used by every drawn function."""
    return 2 * max(1, (max(2, n) - 1).bit_length())


def bias_beta(p: float) -> int:
    """Output width for a coin of bias p: largest beta with 2^-beta >= p.

    The realized bias 2^-beta lands in [p, 2p); hitting-set arguments need
    at least p, and size bounds absorb the at-most-2x inflation.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"bias {p} outside (0, 1]")
    beta = 0
    while beta < 63 and 2.0 ** -(beta + 1) >= p:
        beta += 1
    return beta


def coin(h: HashFunction, vid: int, p: float) -> bool:
    """Head iff h(id) == 0; h must have been drawn with beta = bias_beta(p)."""
    want = bias_beta(p)
    if h.beta != want:
        raise ValueError(f"coin hash has beta={h.beta}, bias {p} needs {want}")
    return h.eval(vid) == 0


@dataclass(frozen=True)
class RankAssignment:
    """Per-vertex rank of T concatenated N-bit hash blocks.

    Block 1 is most significant, so lexicographic comparison by blocks
    equals numeric comparison of the assembled value.
    """

    T: int
    N: int
    funcs: tuple

    def rank(self, vid: int) -> int:
        r = 0
        for fn in self.funcs:
            r = (r << self.N) | fn.eval(vid)
        return r

    def block(self, vid: int, i: int) -> int:
        """i-th block (1-based), readable independently."""
        return self.funcs[i - 1].eval(vid)


def draw_ranks(seed: MasterSeed, role: str, n: int, k: int, gamma: int,
               d=None) -> RankAssignment:
    lg = max(1, (max(2, n) - 1).bit_length())
    k = max(1, min(k, lg))
    N = -(-lg // k)
    d = d if d is not None else independence_order(n)
    funcs = tuple(
        seed.draw_hash(f"{role}/block{i}", gamma, N, d) for i in range(1, k + 1)
    )
    return RankAssignment(T=k, N=N, funcs=funcs)


class IndexSampler:
    """Deterministic multiset sampler of Theta(log n) indices per vertex.

    Index j of vertex v comes from one d-wise independent hash applied to
    the packed input (v, j).  Output width carries 8 extra bits so the
    modulo fold onto [1, range] is within 2^-8 of uniform.
    """

    def __init__(self, seed: MasterSeed, role: str, id_bits: int,
                 max_range: int, count: int, d: int):
        if max_range < 1 or count < 1:
            raise ValueError("max_range and count must be >= 1")
        self.count = count
        self.slot_bits = max(1, (count - 1).bit_length())
        beta = max(1, (max_range - 1).bit_length()) + 8
        self.h = seed.draw_hash(role, id_bits + self.slot_bits, beta, d)

    def indices(self, vid: int, range_: int) -> tuple:
        if range_ < 1:
            raise ValueError("range must be >= 1")
        sb = self.slot_bits
        h = self.h
        return tuple((h.eval((vid << sb) | slot) % range_) + 1
                     for slot in range(self.count))


def sample_indices(seed: MasterSeed, role: str, vid: int, range_: int,
                   count: int, id_bits: int, d=None) -> tuple:
    """One-shot wrapper around IndexSampler (same function per role)."""
    d = d if d is not None else independence_order(1 << id_bits)
    sampler = IndexSampler(seed, role, id_bits, range_, count, d)
    return sampler.indices(vid, range_)
