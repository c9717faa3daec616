"""Deterministic catalogs of small posets, one per isomorphism class."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .config import DEFAULT_CAPS, Caps
from .errors import SizeCap
from .posets import Poset, canonical_key, chain, discrete, empty, make_poset, point


def diamond() -> Poset:
    """Bottom, two incomparable middles, top."""
    return make_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


def vee() -> Poset:
    """One bottom under two incomparable tops."""
    return make_poset(["0", "a", "b"], [("0", "a"), ("0", "b")])


def wedge() -> Poset:
    """Two incomparable bottoms under one top."""
    return make_poset(["a", "b", "1"], [("a", "1"), ("b", "1")])


@lru_cache(maxsize=None)
def generate_catalog(max_size: int, caps: Caps = DEFAULT_CAPS) -> tuple[Poset, ...]:
    """All posets with at most max_size elements, one per iso class.

    Enumerates order relations compatible with the index order (every
    poset has such a labeling), dedupes by canonical form, and returns
    them sorted by (size, canonical bits).
    """
    if max_size > caps.max_poset:
        raise SizeCap(f"catalog size {max_size} exceeds cap {caps.max_poset}")
    out: list[tuple[tuple[int, int], Poset]] = [((0, 0), empty())]
    for n in range(1, max_size + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        seen: dict[tuple[int, int], Poset] = {}
        for bits in range(1 << len(pairs)):
            rel = [[False] * n for _ in range(n)]
            for t, (i, j) in enumerate(pairs):
                if (bits >> t) & 1:
                    rel[i][j] = True
            ok = True
            for i in range(n):
                for j in range(i + 1, n):
                    if not rel[i][j]:
                        continue
                    for k in range(j + 1, n):
                        if rel[j][k] and not rel[i][k]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                continue
            rows = []
            for i in range(n):
                row = 1 << i
                for j in range(i + 1, n):
                    if rel[i][j]:
                        row |= 1 << j
                rows.append(row)
            p = Poset(tuple(f"x{i}" for i in range(n)), tuple(rows))
            key = canonical_key(p)
            if key not in seen:
                seen[key] = p
        out.extend(sorted(seen.items()))
    return tuple(p for _, p in out)


def catalog_maps(xs, ys, caps: Caps = DEFAULT_CAPS):
    """All monotone maps between members of two poset families."""
    from .posets import enumerate_monotone

    for x in xs:
        for y in ys:
            for f in enumerate_monotone(x, y, caps):
                yield f


def standard_posets() -> dict[str, Poset]:
    return {
        "empty": empty(),
        "1": point(),
        "C2": chain(2),
        "D2": discrete(2),
        "C3": chain(3),
        "D3": discrete(3),
        "V": vee(),
        "W": wedge(),
        "B2": diamond(),
    }
