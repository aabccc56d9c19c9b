"""Shared pieces of the spanner query algorithms."""

from __future__ import annotations

from dataclasses import dataclass


class NotAnEdgeError(ValueError):
    """Query precondition violated: the pair is not an edge of the graph."""


@dataclass(frozen=True)
class QueryOutcome:
    """Answer to one edge query plus the count of fallback activations.

    ``failures`` counts whp-excluded events (an empty center or
    representative set on a stretch-critical path) where the algorithm
    answered YES defensively to keep the stretch guarantee deterministic.
    """

    keep: bool
    failures: int = 0


def block_bounds(pos: int, deg: int, width: int) -> tuple:
    """1-based (start, end) of the neighbor-list block containing ``pos``.

    Lists are split into consecutive width-``width`` blocks; the last block
    absorbs the remainder and may hold up to 2*width - 1 entries.  A list
    shorter than ``width`` is a single block.
    """
    nblocks = max(1, deg // width)
    bi = min((pos - 1) // width, nblocks - 1)
    start = bi * width + 1
    end = deg if bi == nblocks - 1 else start + width - 1
    return start, end


def first_block_width(deg: int, width: int) -> int:
    """Width of block 1 under the same splitting rule."""
    return deg if deg < 2 * width else width


def scan_center_window(oracle, v, window: int, coin_memo: dict,
                       coin_eval) -> list:
    """Centers among the first ``window`` neighbors of v, with their indices.

    Scans neighbor probes until the window or the list ends.  A vertex is a
    center when its hash evaluates to zero; outcomes are memoized in
    ``coin_memo`` (id-keyed, probe-free).  At most ``window`` NEIGHBOR
    probes.
    """
    found = []
    neighbor = oracle.neighbor
    get = coin_memo.get
    for i in range(1, window + 1):
        w = neighbor(v, i)
        if w is None:
            break
        r = get(w)
        if r is None:
            r = coin_memo[w] = coin_eval(w) == 0
        if r:
            found.append((w, i))
    return found


def new_center_scan(oracle, scan_from, targets_centers, first_pos: int,
                    last_pos: int, window: int) -> bool:
    """Does the target keep a center no earlier list entry already holds?

    Walks positions [first_pos, last_pos] of ``scan_from``'s neighbor list;
    each entry w covers center s when s sits within the first ``window``
    positions of w's own list (one ADJACENCY probe).  Early exit once every
    center is covered.
    """
    remaining = list(targets_centers)
    if not remaining:
        return False
    adjacency = oracle.adjacency
    neighbor = oracle.neighbor
    for i in range(first_pos, last_pos + 1):
        w = neighbor(scan_from, i)
        if w is None:
            break
        survivors = []
        for s in remaining:
            idx = adjacency(w, s)
            if idx is None or idx > window:
                survivors.append(s)
        remaining = survivors
        if not remaining:
            return False
    return True
