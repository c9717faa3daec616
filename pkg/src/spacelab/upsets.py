"""Up-set lattices: the concrete Sierpinski machinery.

Maps into the 2-chain S classify up-sets (the preimage of the top point is
upward closed), so the exponential S^X is, concretely, the distributive
lattice of up-sets of X ordered by inclusion.  Up-sets are bitmasks over
the base poset; lattice elements are listed in ascending mask order, which
is a linear extension of inclusion.

Orientation convention, fixed once: a map X -> S corresponds to the UP-set
that is the preimage of the top point of S.  Every duality below is stated
and checked against this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple

from .certificates import Certificate, Check
from .config import DEFAULT_CAPS, Caps
from .errors import (
    NotDistributive,
    NotLattice,
    NotMonotone,
    ShapeMismatch,
    SizeCap,
)
from .posets import (
    MonotoneMap,
    Poset,
    chain,
    enumerate_monotone,
    make_poset,
    product,
)


def sierpinski() -> Poset:
    """The 2-chain 0 < 1."""
    return chain(2, "s")


@dataclass(frozen=True)
class UpSet:
    base: Poset
    mask: int

    def __post_init__(self):
        if not self.base.is_upset(self.mask):
            raise ValueError(
                f"{self.base.subset_names(self.mask)} is not upward closed"
            )

    def names(self) -> tuple[str, ...]:
        return self.base.subset_names(self.mask)

    def __repr__(self):
        return "{" + ",".join(self.names()) + "}"


@dataclass(frozen=True)
class UpSetLattice:
    """The lattice S^X of all up-sets of a poset, ordered by inclusion."""

    base: Poset
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def top(self) -> int:
        return self.base.full_mask

    bottom = 0

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.elements)}

    def index(self, mask: int) -> int:
        return self.index_of[mask]

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    @cached_property
    def cover_successors(self) -> tuple[tuple[int, ...], ...]:
        """For each element, its upper covers (the masks reachable by adding
        one element whose strict up-set already lies inside)."""
        n = self.base.size
        out = []
        for m in self.elements:
            covers = []
            for i in range(n):
                if not (m >> i) & 1 and self.base.up[i] & ~m & ~(1 << i) == 0:
                    covers.append(m | (1 << i))
            out.append(tuple(covers))
        return tuple(out)

    @cached_property
    def as_poset(self) -> Poset:
        names = tuple("{" + ",".join(self.base.subset_names(m)) + "}" for m in self.elements)
        rows = []
        for a in self.elements:
            row = 0
            for j, b in enumerate(self.elements):
                if a & ~b == 0:
                    row |= 1 << j
            rows.append(row)
        return Poset(names, tuple(rows))

    def element_name(self, mask: int) -> str:
        return "{" + ",".join(self.base.subset_names(mask)) + "}"

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"UpSetLattice(|X|={self.base.size}, size={self.size})"


@lru_cache(maxsize=None)
def upset_lattice(x: Poset, caps: Caps = DEFAULT_CAPS) -> UpSetLattice:
    """Enumerate every up-set of x; SizeCap if 2^|x| exceeds the cap."""
    if 1 << x.size > caps.max_upsets:
        raise SizeCap(f"2^{x.size} up-set candidates exceed cap {caps.max_upsets}")
    n = x.size
    if n == 0:
        return UpSetLattice(x, (0,))
    found = [m for m in range(1 << n) if x.is_upset(m)]
    found.sort()
    return UpSetLattice(x, tuple(found))


_FLAG_PAIR_BUDGET = 1 << 21  # above this, meet/join flags are computed on demand


@dataclass(frozen=True)
class LatticeMap:
    """A monotone map S^X -> S^Y between up-set lattices.

    ``assign[i]`` is the image mask of the i-th element of ``dom``.
    Monotonicity is enforced at construction (checked on covering pairs);
    the homomorphism flags are exact, computed over all argument pairs.
    """

    dom: UpSetLattice
    cod: UpSetLattice
    assign: tuple[int, ...]

    def __post_init__(self):
        if len(self.assign) != self.dom.size:
            raise ValueError("assignment length does not match domain lattice")
        cod_index = self.cod.index_of
        for m in self.assign:
            if m not in cod_index:
                raise ValueError(f"image {m:#x} is not an up-set of the codomain base")
        idx = self.dom.index_of
        for i, m in enumerate(self.dom.elements):
            a = self.assign[i]
            for succ in self.dom.cover_successors[i]:
                if a & ~self.assign[idx[succ]]:
                    raise NotMonotone(
                        "lattice map not monotone",
                        (self.dom.element_name(m), self.dom.element_name(succ)),
                    )

    def __call__(self, mask: int) -> int:
        return self.assign[self.dom.index(mask)]

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self after other."""
        if other.cod != self.dom:
            raise ShapeMismatch("lattice map composition shapes do not match")
        idx = self.dom.index_of
        return LatticeMap(
            other.dom, self.cod, tuple(self.assign[idx[m]] for m in other.assign)
        )

    @property
    def preserves_bottom(self) -> bool:
        return self.assign[self.dom.index(0)] == 0

    @property
    def preserves_top(self) -> bool:
        return self.assign[self.dom.index(self.dom.top)] == self.cod.top

    @cached_property
    def preserves_meet(self) -> bool:
        return self._binary_flag(lambda a, b: a & b)

    @cached_property
    def preserves_join(self) -> bool:
        return self._binary_flag(lambda a, b: a | b)

    def _binary_flag(self, op) -> bool:
        els = self.dom.elements
        idx = self.dom.index_of
        a = self.assign
        for i, mi in enumerate(els):
            for j in range(i, len(els)):
                if a[idx[op(mi, els[j])]] != op(a[i], a[j]):
                    return False
        return True

    @property
    def is_join_hom(self) -> bool:
        return self.preserves_bottom and self.preserves_join

    @property
    def is_meet_hom(self) -> bool:
        return self.preserves_top and self.preserves_meet

    @property
    def is_dlat_hom(self) -> bool:
        return self.is_join_hom and self.is_meet_hom

    def pointwise_leq(self, other: "LatticeMap") -> bool:
        if self.dom != other.dom or self.cod != other.cod:
            raise ShapeMismatch("lattice maps not parallel")
        return all(a & ~b == 0 for a, b in zip(self.assign, other.assign))

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.assign == self.dom.elements

    def dlat_law_failure(self) -> tuple[str, dict] | None:
        """First violated distributive-lattice-homomorphism law, if any."""
        if not self.preserves_bottom:
            return "bottom", {"got": self.cod.element_name(self(0))}
        if not self.preserves_top:
            return "top", {"got": self.cod.element_name(self(self.dom.top))}
        els = self.dom.elements
        for i, a in enumerate(els):
            for b in els[i:]:
                if self(a & b) != self(a) & self(b):
                    return "meet", {
                        "u": self.dom.element_name(a),
                        "v": self.dom.element_name(b),
                        "lhs": self.cod.element_name(self(a & b)),
                        "rhs": self.cod.element_name(self(a) & self(b)),
                    }
                if self(a | b) != self(a) | self(b):
                    return "join", {
                        "u": self.dom.element_name(a),
                        "v": self.dom.element_name(b),
                        "lhs": self.cod.element_name(self(a | b)),
                        "rhs": self.cod.element_name(self(a) | self(b)),
                    }
        return None

    def __repr__(self):
        return f"LatticeMap({self.dom!r} -> {self.cod!r})"


def lattice_identity(lat: UpSetLattice) -> LatticeMap:
    return LatticeMap(lat, lat, lat.elements)


def inverse_image(f: MonotoneMap, caps: Caps = DEFAULT_CAPS) -> LatticeMap:
    """S^f : S^Y -> S^X, U |-> f^-1(U).  Preserves all four operations."""
    sy = upset_lattice(f.cod, caps)
    sx = upset_lattice(f.dom, caps)
    return LatticeMap(sy, sx, tuple(f.preimage_mask(v) for v in sy.elements))


def direct_image_exists(f: MonotoneMap, caps: Caps = DEFAULT_CAPS) -> LatticeMap:
    """The left adjoint of S^f: U |-> upward closure of f(U).

    Adjointness is verified by check_adjoint, not assumed; whether the
    Frobenius equation also holds (openness) is a separate test.
    """
    sx = upset_lattice(f.dom, caps)
    sy = upset_lattice(f.cod, caps)
    return LatticeMap(
        sx, sy, tuple(f.cod.up_closure(f.image_mask(u)) for u in sx.elements)
    )


def check_adjoint(left: LatticeMap, right: LatticeMap) -> Certificate:
    """Certify left -| right: left.right <= id and id <= right.left."""
    if left.cod != right.dom or right.cod != left.dom:
        raise ShapeMismatch("adjunction candidates do not form a cycle")
    checks = []
    counit_witness = None
    for v in right.dom.elements:
        if left(right(v)) & ~v:
            counit_witness = {
                "element": right.dom.element_name(v),
                "image": right.dom.element_name(left(right(v))),
            }
            break
    checks.append(Check("counit:left.right<=id", counit_witness is None, counit_witness))
    unit_witness = None
    for u in left.dom.elements:
        if u & ~right(left(u)):
            unit_witness = {
                "element": left.dom.element_name(u),
                "image": left.dom.element_name(right(left(u))),
            }
            break
    checks.append(Check("unit:id<=right.left", unit_witness is None, unit_witness))
    return Certificate("adjoint", tuple(checks))


def frobenius_holds(f: MonotoneMap, caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Check E_f(U /\\ S^f V) = E_f(U) /\\ V over all pairs."""
    ex = direct_image_exists(f, caps)
    inv = inverse_image(f, caps)
    sx, sy = ex.dom, ex.cod
    witness = None
    for u in sx.elements:
        if witness:
            break
        for v in sy.elements:
            lhs = ex(u & inv(v))
            rhs = ex(u) & v
            if lhs != rhs:
                witness = {
                    "U": sx.element_name(u),
                    "V": sy.element_name(v),
                    "lhs": sy.element_name(lhs),
                    "rhs": sy.element_name(rhs),
                }
                break
    return Certificate("frobenius", (Check("frobenius-equation", witness is None, witness),))


def verify_order_internal_lattice(lat: UpSetLattice) -> Certificate:
    """The lattice operations as adjoints to the diagonal, checked literally.

    Delta -| meet and join -| Delta, plus the nullary versions via the
    unique map to the one-point lattice (so top and bottom are part of the
    meet/join structure, not extra data).
    """
    checks = []
    els = lat.elements
    w = None
    for a in els:
        for b in els:
            for c in els:
                lhs = (a & ~b == 0) and (a & ~c == 0)       # diag(a) <= (b, c)
                rhs = a & ~(b & c) == 0                       # a <= b /\ c
                if lhs != rhs:
                    w = {"a": lat.element_name(a), "b": lat.element_name(b), "c": lat.element_name(c)}
                    break
            if w:
                break
        if w:
            break
    checks.append(Check("diagonal-adjoint-meet", w is None, w))
    w = None
    for a in els:
        for b in els:
            for c in els:
                lhs = (a | b) & ~c == 0                      # a \/ b <= c
                rhs = (a & ~c == 0) and (b & ~c == 0)        # (a, b) <= diag(c)
                if lhs != rhs:
                    w = {"a": lat.element_name(a), "b": lat.element_name(b), "c": lat.element_name(c)}
                    break
            if w:
                break
        if w:
            break
    checks.append(Check("join-adjoint-diagonal", w is None, w))
    checks.append(Check("top-right-adjoint", all(m & ~lat.top == 0 for m in els)))
    checks.append(Check("bottom-left-adjoint", all(0 & ~m == 0 for m in els)))
    w = None
    for a in els:
        for b in els:
            for c in els:
                if (a & (b | c)) != ((a & b) | (a & c)):
                    w = {"a": lat.element_name(a), "b": lat.element_name(b), "c": lat.element_name(c)}
                    break
            if w:
                break
        if w:
            break
    checks.append(Check("distributivity", w is None, w))
    return Certificate("order-internal-lattice", tuple(checks))


# ---------------------------------------------------------------------------
# Generic finite lattices over a Poset carrier, and Birkhoff duality.
# ---------------------------------------------------------------------------


class LatticeStructure(NamedTuple):
    carrier: Poset
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    top: int
    bottom: int


def poset_as_lattice(p: Poset) -> LatticeStructure:
    """Meet/join tables from the order; NotLattice if some pair has none."""
    n = p.size
    if n == 0:
        raise NotLattice("empty carrier has no top or bottom")
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            lower = p.down[i] & p.down[j]
            best = None
            rest = lower
            while rest:
                k = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if lower & ~p.down[k] == 0:
                    best = k
                    break
            if best is None:
                raise NotLattice(f"{p.names[i]} and {p.names[j]} have no meet")
            meet[i][j] = best
            upper = p.up[i] & p.up[j]
            best = None
            rest = upper
            while rest:
                k = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if upper & ~p.up[k] == 0:
                    best = k
                    break
            if best is None:
                raise NotLattice(f"{p.names[i]} and {p.names[j]} have no join")
            join[i][j] = best
    bottom = next(i for i in range(n) if bin(p.up[i]).count("1") == n)
    top = next(i for i in range(n) if bin(p.down[i]).count("1") == n)
    return LatticeStructure(p, tuple(map(tuple, meet)), tuple(map(tuple, join)), top, bottom)


def check_distributive(ls: LatticeStructure) -> None:
    n = ls.carrier.size
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if ls.meet[a][ls.join[b][c]] != ls.join[ls.meet[a][b]][ls.meet[a][c]]:
                    raise NotDistributive(
                        f"a={ls.carrier.names[a]} b={ls.carrier.names[b]} c={ls.carrier.names[c]}"
                    )


def _as_structure(lat: UpSetLattice | LatticeStructure | Poset) -> LatticeStructure:
    if isinstance(lat, UpSetLattice):
        return poset_as_lattice(lat.as_poset)
    if isinstance(lat, Poset):
        return poset_as_lattice(lat)
    return lat


def join_irreducibles(lat: UpSetLattice | LatticeStructure | Poset) -> Poset:
    """Sub-poset of elements that are not the join of the strictly smaller
    elements (bottom excluded)."""
    ls = _as_structure(lat)
    check_distributive(ls)
    p = ls.carrier
    irr = []
    for i in range(p.size):
        if i == ls.bottom:
            continue
        below = ls.bottom
        rest = p.down[i] & ~(1 << i)
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            below = ls.join[below][j]
        if below != i:
            irr.append(i)
    names = tuple(p.names[i] for i in irr)
    rows = []
    for i in irr:
        row = 0
        for t, j in enumerate(irr):
            if p.leq(i, j):
                row |= 1 << t
        rows.append(row)
    return Poset(names, tuple(rows))


class BirkhoffDuality(NamedTuple):
    poset: Poset                    # Y with L iso to S^Y
    lattice: UpSetLattice           # S^Y
    to_upsets: tuple[int, ...]      # carrier index -> up-set mask of Y
    from_upsets: dict[int, int]     # up-set mask of Y -> carrier index
    certificate: Certificate


def lattice_to_poset(
    lat: UpSetLattice | LatticeStructure | Poset, caps: Caps = DEFAULT_CAPS
) -> BirkhoffDuality:
    """Recover a poset Y with L isomorphic to S^Y, with a certified iso.

    Y is the set of join-irreducibles with the order REVERSED, so that
    a |-> {irreducible j : j <= a} lands in up-sets of Y under the fixed
    orientation convention.  The isomorphism is checked element by element
    on both operations and both units.
    """
    ls = _as_structure(lat)
    check_distributive(ls)
    p = ls.carrier
    irr_sub = join_irreducibles(ls)
    irr_indices = tuple(p.index(nm) for nm in irr_sub.names)
    y = irr_sub.dual()
    sy = upset_lattice(y, caps)
    to_upsets = []
    for a in range(p.size):
        mask = 0
        for t, j in enumerate(irr_indices):
            if p.leq(j, a):
                mask |= 1 << t
        to_upsets.append(mask)
    from_upsets: dict[int, int] = {}
    checks = []
    bij_witness = None
    for a, m in enumerate(to_upsets):
        if m not in sy.index_of:
            bij_witness = {"element": p.names[a], "image-not-upset": True}
            break
        if m in from_upsets:
            bij_witness = {"collision": [p.names[from_upsets[m]], p.names[a]]}
            break
        from_upsets[m] = a
    if bij_witness is None and len(from_upsets) != sy.size:
        missing = next(m for m in sy.elements if m not in from_upsets)
        bij_witness = {"unhit-upset": sy.element_name(missing)}
    checks.append(Check("bijective", bij_witness is None, bij_witness))
    ok_order = bij_witness is None and all(
        p.leq(a, b) == (to_upsets[a] & ~to_upsets[b] == 0)
        for a in range(p.size)
        for b in range(p.size)
    )
    checks.append(Check("order-isomorphism", ok_order))
    ok_ops = bij_witness is None and all(
        to_upsets[ls.meet[a][b]] == to_upsets[a] & to_upsets[b]
        and to_upsets[ls.join[a][b]] == to_upsets[a] | to_upsets[b]
        for a in range(p.size)
        for b in range(p.size)
    )
    checks.append(Check("preserves-meet-join", ok_ops))
    ok_units = bij_witness is None and (
        to_upsets[ls.top] == sy.top and to_upsets[ls.bottom] == 0
    )
    checks.append(Check("preserves-units", ok_units))
    cert = Certificate("birkhoff", tuple(checks))
    cert.require()
    return BirkhoffDuality(y, sy, tuple(to_upsets), from_upsets, cert)


def verify_sierpinski(x: Poset, candidates: Iterable[MonotoneMap] | None = None,
                      caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Maps X -> S classify up-sets via the preimage of the top point, and
    complementarily down-sets via the bottom point."""
    s = sierpinski()
    if candidates is None:
        candidates = enumerate_monotone(x, s, caps).maps
    maps = list(candidates)
    sx = upset_lattice(x, caps)
    seen_up: dict[int, int] = {}
    witness = None
    for t, f in enumerate(maps):
        m = f.preimage_mask(2)  # preimage of the top point (index 1)
        if not x.is_upset(m):
            witness = {"map": t, "preimage-not-upset": sx.base.subset_names(m)}
            break
        if m in seen_up:
            witness = {"maps": [seen_up[m], t], "same-upset": sx.element_name(m)}
            break
        seen_up[m] = t
    checks = [Check("classifies-upsets-injectively", witness is None, witness)]
    total = witness is None and len(seen_up) == sx.size
    checks.append(Check(
        "classifies-upsets-surjectively", total,
        None if total else {"maps": len(maps), "upsets": sx.size}))
    down_ok = True
    dwitness = None
    seen_down: dict[int, int] = {}
    for t, f in enumerate(maps):
        m = f.preimage_mask(1)  # preimage of the bottom point
        if x.down_closure(m) != m:
            down_ok = False
            dwitness = {"map": t, "preimage-not-downset": x.subset_names(m)}
            break
        if m != x.full_mask & ~f.preimage_mask(2):
            down_ok = False
            dwitness = {"map": t, "not-complementary": True}
            break
        if m in seen_down:
            down_ok = False
            dwitness = {"maps": [seen_down[m], t]}
            break
        seen_down[m] = t
    checks.append(Check("classifies-downsets-complementarily", down_ok, dwitness))
    return Certificate("sierpinski", tuple(checks), {"maps": len(maps), "upsets": sx.size})
