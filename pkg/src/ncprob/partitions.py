"""Non-crossing, interval and pair partitions of {1, ..., n}.

A partition is represented as a tuple of blocks, each block a tuple of
1-based positions in increasing order, with blocks sorted by their minimum.
This canonical form makes partitions hashable and enumeration deterministic.
"""

from functools import lru_cache
from math import comb

_MAX_N = 16


def _check_n(n):
    if not 0 <= n <= _MAX_N:
        raise ValueError(f"partition order must be in [0, {_MAX_N}], got {n}")


def canonical(blocks):
    """Return the canonical form of a partition given as an iterable of blocks."""
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def is_partition(pi, n):
    """Check that ``pi`` is a set partition of {1, ..., n} in canonical form."""
    seen = [x for b in pi for x in b]
    return sorted(seen) == list(range(1, n + 1)) and pi == canonical(pi)


def is_noncrossing(pi):
    """True if no two blocks cross: a < b < c < d with {a,c}, {b,d} split."""
    blocks = list(pi)
    for i, B in enumerate(blocks):
        for C in blocks[i + 1:]:
            # B and C cross iff their elements interleave
            for a in B:
                for b in C:
                    for c in B:
                        for d in C:
                            if a < b < c < d or b < a < d < c:
                                return False
    return True


def is_interval(pi):
    """True if every block is a set of consecutive integers."""
    return all(b[-1] - b[0] + 1 == len(b) for b in pi)


@lru_cache(maxsize=None)
def noncrossing_partitions(n):
    """All non-crossing partitions of {1, ..., n}, canonically ordered.

    Recursive construction: the block of the smallest element m is
    {m} ∪ T; the remaining elements split into the gaps between
    consecutive members of that block (plus the region after the last),
    and each gap is partitioned independently.  This yields exactly the
    non-crossing partitions, Catalan(n) of them.
    """
    _check_n(n)
    return tuple(sorted(_relabel(p, range(1, n + 1)) for p in _nc_shapes(n)))


def _relabel(pi, labels):
    labels = tuple(labels)
    return canonical(tuple(tuple(labels[x] for x in b) for b in pi))


@lru_cache(maxsize=None)
def _nc_shapes(k):
    """Non-crossing partitions of {0, ..., k-1} (unsorted)."""
    if k == 0:
        return ((),)
    out = []
    rest = tuple(range(1, k))
    for mask in range(1 << (k - 1)):
        block = (0,) + tuple(x for i, x in enumerate(rest) if mask >> i & 1)
        # leftover elements fall into the gaps between consecutive block
        # members (or after the last) and are partitioned independently;
        # this decomposition produces exactly the non-crossing partitions.
        gaps = [[] for _ in block]
        j = 0
        for i, x in enumerate(rest):
            if mask >> i & 1:
                j += 1
            else:
                gaps[j].append(x)
        partials = [()]
        for g in gaps:
            partials = [p + _relabel(s, g) for p in partials
                        for s in _nc_shapes(len(g))]
        out.extend((block,) + p for p in partials)
    return tuple(out)


@lru_cache(maxsize=None)
def interval_partitions(n):
    """All interval partitions of {1, ..., n} (ordered compositions), 2^(n-1)."""
    _check_n(n)
    if n == 0:
        return ((),)
    out = []
    for mask in range(1 << (n - 1)):
        blocks = []
        start = 1
        for i in range(1, n):
            if mask >> (i - 1) & 1:
                blocks.append(tuple(range(start, i + 1)))
                start = i + 1
        blocks.append(tuple(range(start, n + 1)))
        out.append(tuple(blocks))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def noncrossing_pairings(n):
    """All non-crossing pair partitions of {1, ..., n}; empty unless n is even."""
    _check_n(n)
    if n % 2:
        return ()
    return tuple(sorted(_nc2_of(tuple(range(1, n + 1)))))


def _nc2_of(elems):
    if not elems:
        return [()]
    m = elems[0]
    out = []
    for j in range(1, len(elems), 2):
        inner, outer = elems[1:j], elems[j + 1:]
        for pi in _nc2_of(inner):
            for rho in _nc2_of(outer):
                out.append(canonical(((m, elems[j]),) + pi + rho))
    return out


def tau_count(pi, block):
    """Number of blocks of ``pi`` contained in the span [min(block), max(block)]."""
    lo, hi = block[0], block[-1]
    return sum(1 for W in pi if lo <= W[0] and W[-1] <= hi)


def tau_factorial(pi):
    """Monotone weight τ(π)! = ∏_{V∈π} #{W∈π : W ⊆ [min V, max V]}.

    Counts nestings: τ(π)! = 1 on interval partitions, and e.g. 2 for the
    nested pairing {{1,4},{2,3}}.
    """
    out = 1
    for V in pi:
        out *= tau_count(pi, V)
    return out


def catalan(m):
    """The m-th Catalan number."""
    return comb(2 * m, m) // (m + 1)
