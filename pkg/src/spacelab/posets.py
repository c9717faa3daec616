"""Finite posets and monotone maps.

The ambient category: objects are finite posets, morphisms are monotone
maps, and every hom-set carries the pointwise order.  Orders are stored as
per-element up-set bitmasks so the hot loops are integer bit twiddling.
All values are immutable and hashable; equal constructions compare equal,
which lets results be cached and composed structurally.

Element orderings are deterministic everywhere (lexicographic on source
data) so that reports reproduce byte-for-byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

from .config import DEFAULT_CAPS, Caps
from .errors import (
    CycleDetected,
    DuplicateName,
    NotMonotone,
    ShapeMismatch,
    SizeCap,
)


@dataclass(frozen=True)
class Poset:
    """A finite poset: element names plus the full order relation.

    ``up[i]`` is the bitmask of indices j with i <= j; it is reflexive,
    transitive and antisymmetric (validated on construction).
    """

    names: tuple[str, ...]
    up: tuple[int, ...]

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise DuplicateName(f"duplicate element names in {self.names}")
        if len(self.up) != n:
            raise ValueError("up-mask table length does not match names")
        full = (1 << n) - 1
        for i, row in enumerate(self.up):
            if row & ~full:
                raise ValueError(f"up[{i}] has bits outside the carrier")
            if not (row >> i) & 1:
                raise ValueError(f"order not reflexive at {self.names[i]}")
        for i in range(n):
            row = self.up[i]
            rest = row
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if self.up[j] & ~row:
                    raise ValueError(
                        f"order not transitive at {self.names[i]} <= {self.names[j]}"
                    )
                if i != j and (self.up[j] >> i) & 1:
                    raise CycleDetected(
                        f"antisymmetry violated between {self.names[i]} and {self.names[j]}"
                    )

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    @cached_property
    def down(self) -> tuple[int, ...]:
        n = self.size
        rows = [0] * n
        for i in range(n):
            for j in range(n):
                if (self.up[i] >> j) & 1:
                    rows[j] |= 1 << i
        return tuple(rows)

    @cached_property
    def linext(self) -> tuple[int, ...]:
        """A linear extension: indices sorted so i appears before its strict
        upper bounds (ties broken by index)."""
        return tuple(sorted(range(self.size), key=lambda i: (bin(self.down[i]).count("1"), i)))

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs (i, j): i < j with nothing strictly between."""
        out = []
        for i in range(self.size):
            strict = self.up[i] & ~(1 << i)
            rest = strict
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                between = strict & self.down[j] & ~(1 << j)
                if between == 0:
                    out.append((i, j))
        return tuple(out)

    def is_upset(self, mask: int) -> bool:
        rest = mask
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if self.up[i] & ~mask:
                return False
        return True

    def up_closure(self, mask: int) -> int:
        out = 0
        rest = mask
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            out |= self.up[i]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        rest = mask
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            out |= self.down[i]
        return out

    def dual(self) -> "Poset":
        """The opposite poset (order reversed, same names)."""
        return Poset(self.names, self.down)

    def subset_names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[i] for i in range(self.size) if (mask >> i) & 1)

    def __repr__(self):
        rel = ",".join(f"{self.names[i]}<{self.names[j]}" for i, j in self.covers)
        return f"Poset({list(self.names)}; {rel})"


@dataclass(frozen=True)
class MonotoneMap:
    """A monotone map, stored as a total index assignment."""

    dom: Poset
    cod: Poset
    assign: tuple[int, ...]

    def __post_init__(self):
        if len(self.assign) != self.dom.size:
            raise ValueError("assignment length does not match domain")
        for v in self.assign:
            if not (0 <= v < self.cod.size):
                raise ValueError(f"assignment target {v} outside codomain")
        for i, j in self.dom.covers:
            if not self.cod.leq(self.assign[i], self.assign[j]):
                raise NotMonotone(
                    f"{self.dom.names[i]} <= {self.dom.names[j]} but images "
                    f"{self.cod.names[self.assign[i]]} !<= {self.cod.names[self.assign[j]]}",
                    (self.dom.names[i], self.dom.names[j]),
                )

    def __call__(self, i: int) -> int:
        return self.assign[i]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """self after other."""
        if other.cod != self.dom:
            raise ShapeMismatch("composition shapes do not match")
        return MonotoneMap(other.dom, self.cod, tuple(self.assign[v] for v in other.assign))

    def image_mask(self, mask: int | None = None) -> int:
        out = 0
        src = self.dom.full_mask if mask is None else mask
        rest = src
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            out |= 1 << self.assign[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.assign):
            if (mask >> v) & 1:
                out |= 1 << i
        return out

    @property
    def is_surjective(self) -> bool:
        return self.image_mask() == self.cod.full_mask

    @property
    def is_injective(self) -> bool:
        return len(set(self.assign)) == self.dom.size

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(v == i for i, v in enumerate(self.assign))

    def pointwise_leq(self, other: "MonotoneMap") -> bool:
        if self.dom != other.dom or self.cod != other.cod:
            raise ShapeMismatch("maps not parallel")
        return all(self.cod.leq(a, b) for a, b in zip(self.assign, other.assign))

    def __repr__(self):
        pairs = ",".join(
            f"{self.dom.names[i]}>{self.cod.names[v]}" for i, v in enumerate(self.assign)
        )
        return f"MonotoneMap({pairs})"


def identity(x: Poset) -> MonotoneMap:
    return MonotoneMap(x, x, tuple(range(x.size)))


def constant(dom: Poset, cod: Poset, target: int) -> MonotoneMap:
    return MonotoneMap(dom, cod, (target,) * dom.size)


def make_poset(names: Sequence[str], cover_pairs: Iterable[tuple] = ()) -> Poset:
    """Build a poset from names and covering pairs (by name or index).

    The order is the reflexive-transitive closure of the pairs; a closure
    that violates antisymmetry raises CycleDetected.
    """
    names = tuple(str(s) for s in names)
    if not names:
        return Poset((), ())
    if len(set(names)) != len(names):
        raise DuplicateName(f"duplicate element names in {names}")
    n = len(names)
    idx = {s: i for i, s in enumerate(names)}
    rows = [1 << i for i in range(n)]
    for a, b in cover_pairs:
        i = idx[a] if isinstance(a, str) else int(a)
        j = idx[b] if isinstance(b, str) else int(b)
        if not (0 <= i < n and 0 <= j < n):
            raise KeyError(f"cover pair ({a}, {b}) out of range")
        rows[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            row = rows[i]
            acc = row
            rest = row
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                acc |= rows[j]
            if acc != row:
                rows[i] = acc
                changed = True
    for i in range(n):
        for j in range(n):
            if i != j and (rows[i] >> j) & 1 and (rows[j] >> i) & 1:
                raise CycleDetected(f"cycle through {names[i]} and {names[j]}")
    return Poset(names, tuple(rows))


def chain(n: int, prefix: str = "") -> Poset:
    names = [f"{prefix}{i}" for i in range(n)]
    return make_poset(names, [(i, i + 1) for i in range(n - 1)])


def discrete(n: int, prefix: str = "x") -> Poset:
    if n == 2 and prefix == "x":
        return make_poset(["a", "b"])
    return make_poset([f"{prefix}{i}" for i in range(n)])


def empty() -> Poset:
    return Poset((), ())


def point(name: str = "*") -> Poset:
    return make_poset([name])


class ProductResult(NamedTuple):
    poset: Poset
    p1: MonotoneMap
    p2: MonotoneMap


class CoproductResult(NamedTuple):
    poset: Poset
    inl: MonotoneMap
    inr: MonotoneMap


class EqualizerResult(NamedTuple):
    poset: Poset
    include: MonotoneMap


class PullbackResult(NamedTuple):
    poset: Poset
    p1: MonotoneMap
    p2: MonotoneMap


class CoequalizerResult(NamedTuple):
    poset: Poset
    quotient: MonotoneMap


def product(x: Poset, y: Poset, caps: Caps = DEFAULT_CAPS) -> ProductResult:
    """Cartesian product with componentwise order; pairs in index-lex order."""
    if x.size * y.size > caps.max_elements:
        raise SizeCap(f"product would have {x.size * y.size} > {caps.max_elements} elements")
    names = tuple(f"({a},{b})" for a in x.names for b in y.names)
    m = y.size
    rows = []
    for i in range(x.size):
        for j in range(y.size):
            row = 0
            xi = x.up[i]
            rest = xi
            while rest:
                k = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                yj = y.up[j]
                r2 = yj
                while r2:
                    l = (r2 & -r2).bit_length() - 1
                    r2 &= r2 - 1
                    row |= 1 << (k * m + l)
            rows.append(row)
    p = Poset(names, tuple(rows))
    p1 = MonotoneMap(p, x, tuple(i for i in range(x.size) for _ in range(y.size)))
    p2 = MonotoneMap(p, y, tuple(j for _ in range(x.size) for j in range(y.size)))
    return ProductResult(p, p1, p2)


def pair_map(f: MonotoneMap, g: MonotoneMap, prod: ProductResult) -> MonotoneMap:
    """The mediating map <f, g> into a product."""
    if f.dom != g.dom:
        raise ShapeMismatch("pairing requires a common domain")
    m = g.cod.size
    return MonotoneMap(f.dom, prod.poset, tuple(f.assign[i] * m + g.assign[i] for i in range(f.dom.size)))


def coproduct(x: Poset, y: Poset, caps: Caps = DEFAULT_CAPS) -> CoproductResult:
    """Disjoint union with no cross order."""
    if x.size + y.size > caps.max_elements:
        raise SizeCap(f"coproduct would have {x.size + y.size} > {caps.max_elements} elements")
    names = tuple(f"l:{a}" for a in x.names) + tuple(f"r:{b}" for b in y.names)
    rows = tuple(r for r in x.up) + tuple(r << x.size for r in y.up)
    p = Poset(names, rows)
    inl = MonotoneMap(x, p, tuple(range(x.size)))
    inr = MonotoneMap(y, p, tuple(range(x.size, x.size + y.size)))
    return CoproductResult(p, inl, inr)


def case_map(f: MonotoneMap, g: MonotoneMap, cop: CoproductResult) -> MonotoneMap:
    """The mediating map [f, g] out of a coproduct."""
    if f.cod != g.cod:
        raise ShapeMismatch("case analysis requires a common codomain")
    return MonotoneMap(cop.poset, f.cod, f.assign + g.assign)


def _subposet(x: Poset, keep: Sequence[int]) -> tuple[Poset, MonotoneMap]:
    keep = list(keep)
    pos = {k: t for t, k in enumerate(keep)}
    names = tuple(x.names[k] for k in keep)
    rows = []
    for k in keep:
        row = 0
        for t, k2 in enumerate(keep):
            if x.leq(k, k2):
                row |= 1 << t
        rows.append(row)
    sub = Poset(names, tuple(rows))
    include = MonotoneMap(sub, x, tuple(keep))
    return sub, include


def equalizer(f: MonotoneMap, g: MonotoneMap) -> EqualizerResult:
    """Sub-poset where the parallel pair agrees, with the induced order."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("equalizer requires a parallel pair")
    keep = [i for i in range(f.dom.size) if f.assign[i] == g.assign[i]]
    sub, include = _subposet(f.dom, keep)
    return EqualizerResult(sub, include)


def pullback(f: MonotoneMap, g: MonotoneMap, caps: Caps = DEFAULT_CAPS) -> PullbackResult:
    """Sub-poset of the product where the two legs agree over the cospan."""
    if f.cod != g.cod:
        raise ShapeMismatch("pullback requires a cospan")
    prod = product(f.dom, g.dom, caps)
    m = g.dom.size
    keep = [
        i * m + j
        for i in range(f.dom.size)
        for j in range(g.dom.size)
        if f.assign[i] == g.assign[j]
    ]
    sub, include = _subposet(prod.poset, keep)
    p1 = prod.p1.compose(include)
    p2 = prod.p2.compose(include)
    return PullbackResult(sub, p1, p2)


def coequalizer(f: MonotoneMap, g: MonotoneMap) -> CoequalizerResult:
    """Posetal quotient of the codomain by the pair, used as an oracle.

    Identify f(x) with g(x), project the order, close transitively, then
    collapse the strongly connected components of the resulting preorder.
    The couniversal property (any h with hf = hg factors uniquely) holds by
    construction and is certified separately by enumeration.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("coequalizer requires a parallel pair")
    y = f.cod
    n = y.size
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(f.dom.size):
        union(f.assign[i], g.assign[i])
    reps = sorted({find(i) for i in range(n)})
    rep_pos = {r: t for t, r in enumerate(reps)}
    k = len(reps)
    reach = [0] * k
    for i in range(n):
        a = rep_pos[find(i)]
        for j in range(n):
            if y.leq(i, j):
                reach[a] |= 1 << rep_pos[find(j)]
    for a in range(k):
        reach[a] |= 1 << a
    changed = True
    while changed:
        changed = False
        for a in range(k):
            row = reach[a]
            acc = row
            rest = row
            while rest:
                b = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                acc |= reach[b]
            if acc != row:
                reach[a] = acc
                changed = True
    scc_parent = list(range(k))

    def sfind(a: int) -> int:
        while scc_parent[a] != a:
            scc_parent[a] = scc_parent[scc_parent[a]]
            a = scc_parent[a]
        return a

    for a in range(k):
        for b in range(a + 1, k):
            if (reach[a] >> b) & 1 and (reach[b] >> a) & 1:
                ra, rb = sfind(a), sfind(b)
                if ra != rb:
                    scc_parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[int]] = {}
    for i in range(n):
        c = sfind(rep_pos[find(i)])
        classes.setdefault(c, []).append(i)
    ordered = sorted(classes.values(), key=lambda members: min(members))
    names = tuple("[" + min(y.names[m] for m in members) + "]" for members in ordered)
    member_of = {}
    for t, members in enumerate(ordered):
        for m in members:
            member_of[m] = t
    q = len(ordered)
    rows = [0] * q
    for t, members in enumerate(ordered):
        a = sfind(rep_pos[find(members[0])])
        rest = reach[a]
        while rest:
            b = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            rows[t] |= 1 << member_of[reps[b]]
    quot = Poset(names, tuple(rows))
    qmap = MonotoneMap(y, quot, tuple(member_of[i] for i in range(n)))
    return CoequalizerResult(quot, qmap)


@dataclass(frozen=True)
class HomSet:
    """All monotone maps dom -> cod in the pointwise order."""

    dom: Poset
    cod: Poset
    maps: tuple[MonotoneMap, ...]

    @cached_property
    def order_rows(self) -> tuple[int, ...]:
        rows = []
        for f in self.maps:
            row = 0
            for t, g in enumerate(self.maps):
                if all(self.cod.leq(a, b) for a, b in zip(f.assign, g.assign)):
                    row |= 1 << t
            rows.append(row)
        return tuple(rows)

    def leq(self, i: int, j: int) -> bool:
        return bool((self.order_rows[i] >> j) & 1)

    @cached_property
    def as_poset(self) -> Poset:
        names = tuple("-".join(str(v) for v in f.assign) if f.assign else "!" for f in self.maps)
        return Poset(names, self.order_rows)

    def index(self, f: MonotoneMap) -> int:
        return self.maps.index(f)

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


@lru_cache(maxsize=None)
def enumerate_monotone(x: Poset, y: Poset, caps: Caps = DEFAULT_CAPS) -> HomSet:
    """Backtracking enumeration of every monotone map x -> y.

    Maps come out in lexicographic order of their assignment tuples.
    """
    if x.size == 0:
        return HomSet(x, y, (MonotoneMap(x, y, ()),))
    if y.size == 0:
        return HomSet(x, y, ())
    order = x.linext
    below: list[list[int]] = []
    for pos, i in enumerate(order):
        below.append([p for p in range(pos) if x.leq(order[p], i)])
    results: list[tuple[int, ...]] = []
    assign = [0] * x.size

    def extend(pos: int):
        if pos == x.size:
            results.append(tuple(assign[i] for i in order_inv))
            if len(results) > caps.max_homset:
                raise SizeCap(
                    f"hom-set {x.names}->{y.names} exceeds cap {caps.max_homset}"
                )
            return
        need = y.full_mask
        for p in below[pos]:
            need &= y.up[assign[p]]
        rest = need
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            assign[pos] = v
            extend(pos + 1)

    order_inv = [0] * x.size
    for pos, i in enumerate(order):
        order_inv[i] = pos
    extend(0)
    results.sort()
    maps = tuple(MonotoneMap(x, y, t) for t in results)
    return HomSet(x, y, maps)


def is_isomorphism(f: MonotoneMap) -> bool:
    if f.dom.size != f.cod.size or not f.is_injective:
        return False
    inv = [0] * f.cod.size
    for i, v in enumerate(f.assign):
        inv[v] = i
    try:
        MonotoneMap(f.cod, f.dom, tuple(inv))
    except NotMonotone:
        return False
    return True


def inverse(f: MonotoneMap) -> MonotoneMap:
    if not is_isomorphism(f):
        raise ShapeMismatch("map is not an isomorphism")
    inv = [0] * f.cod.size
    for i, v in enumerate(f.assign):
        inv[v] = i
    return MonotoneMap(f.cod, f.dom, tuple(inv))


def verify_distributivity(
    x: Poset, y: Poset, z: Poset,
    test_family: Sequence[MonotoneMap] = (),
    caps: Caps = DEFAULT_CAPS,
):
    """Products distribute over coproducts, also after pulling back.

    Certifies the canonical map X x Y + X x Z -> X x (Y + Z) is an
    isomorphism, X x 0 is initial, and that pulling the coproduct legs
    back along each supplied map u : U -> X x (Y+Z) splits the pullback
    accordingly.
    """
    from .certificates import Certificate, Check

    yz = coproduct(y, z, caps)
    lhs = coproduct(product(x, y, caps).poset, product(x, z, caps).poset, caps)
    rhs = product(x, yz.poset, caps)
    ny, nz, nyz = y.size, z.size, yz.poset.size
    assign = tuple(
        (k // ny) * nyz + (k % ny) if k < x.size * ny
        else ((k - x.size * ny) // nz) * nyz + ny + ((k - x.size * ny) % nz)
        for k in range(lhs.poset.size)
    )
    canonical = MonotoneMap(lhs.poset, rhs.poset, assign)
    checks = [
        Check("canonical-map-iso", is_isomorphism(canonical)),
        Check("product-with-initial-empty", product(x, empty(), caps).poset.size == 0),
    ]
    w = None
    inl_flat = canonical.compose(lhs.inl)
    inr_flat = canonical.compose(lhs.inr)
    for u in test_family:
        if u.cod != rhs.poset:
            continue
        left = pullback(u, inl_flat, caps)
        right = pullback(u, inr_flat, caps)
        whole = left.poset.size + right.poset.size
        if whole != u.dom.size:
            w = {"map": list(u.assign), "parts": [left.poset.size, right.poset.size]}
            break
    checks.append(Check("pullback-splits-coproduct", w is None, w))
    return Certificate("distributivity", tuple(checks))


def canonical_key(x: Poset) -> tuple[int, int]:
    """Canonical form of the unlabeled poset: (size, minimal relation bits).

    Minimizes the flattened order matrix over all relabelings, pruned by a
    degree invariant.  Fine at desk scale.
    """
    n = x.size
    if n == 0:
        return (0, 0)

    def bits_for(perm: Sequence[int]) -> int:
        # perm[k] = original index placed at position k
        out = 0
        for a in range(n):
            for b in range(n):
                if x.leq(perm[a], perm[b]):
                    out |= 1 << (a * n + b)
        return out

    inv_key = lambda i: (bin(x.down[i]).count("1"), bin(x.up[i]).count("1"))
    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        groups.setdefault(inv_key(i), []).append(i)
    keys = sorted(groups)
    best: int | None = None
    pools = [groups[k] for k in keys]
    for parts in itertools.product(*(itertools.permutations(p) for p in pools)):
        perm = [i for part in parts for i in part]
        b = bits_for(perm)
        if best is None or b < best:
            best = b
    assert best is not None
    return (n, best)


def are_isomorphic(x: Poset, y: Poset) -> bool:
    return canonical_key(x) == canonical_key(y)


def find_isomorphism(x: Poset, y: Poset) -> MonotoneMap | None:
    """Some order isomorphism x -> y, or None."""
    if x.size != y.size:
        return None
    n = x.size
    for perm in itertools.permutations(range(n)):
        ok = True
        for a in range(n):
            for b in range(n):
                if x.leq(a, b) != y.leq(perm[a], perm[b]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return MonotoneMap(x, y, tuple(perm))
    return None
