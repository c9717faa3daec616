"""Internal monoids and groups, their actions on posets, and stability.

A monoid object is a poset M with a monotone multiplication M x M -> M and
a unit point; a group object adds a monotone inversion.  An action is a
monotone map M x X -> X obeying the unit and associativity laws; morphisms
of actions are monotone maps commuting with the action.

The heart of the module is the induced action on the double power P(X)
(strength followed by the functorial action) and the verification that
transposition restricts to an order isomorphism between action-compatible
lattice maps S^X -> S^Y and action-preserving maps Y -> P(X).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .certificates import Certificate, Check
from .config import DEFAULT_CAPS, Caps
from .errors import (
    AssocFailure,
    AxiomFailure,
    ConditionFailure,
    GroupRequired,
    NotMonotone,
    ShapeMismatch,
    UnitLawFailure,
)
from .posets import (
    MonotoneMap,
    Poset,
    coproduct,
    discrete,
    enumerate_monotone,
    equalizer,
    identity,
    make_poset,
    product,
)
from .power import DoublePower, double_power, nat_trans_space, power_map, strength
from .upsets import LatticeMap, UpSetLattice, inverse_image, upset_lattice


@dataclass(frozen=True)
class MonoidObject:
    """(M, mult, e) internal to the category of posets."""

    carrier: Poset
    mult: MonotoneMap
    unit: int

    def __post_init__(self):
        n = self.carrier.size
        if self.mult.cod != self.carrier or self.mult.dom != product(self.carrier, self.carrier).poset:
            raise ShapeMismatch("multiplication must be a map M x M -> M")
        if not (0 <= self.unit < n):
            raise AxiomFailure("unit index out of range")
        for i in range(n):
            if self.op(self.unit, i) != i or self.op(i, self.unit) != i:
                raise UnitLawFailure(f"{self.carrier.names[i]} not fixed by the unit")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.op(self.op(i, j), k) != self.op(i, self.op(j, k)):
                        raise AssocFailure(
                            f"({self.carrier.names[i]}.{self.carrier.names[j]})."
                            f"{self.carrier.names[k]} differs from the other bracketing"
                        )

    def op(self, i: int, j: int) -> int:
        return self.mult.assign[i * self.carrier.size + j]

    @property
    def size(self) -> int:
        return self.carrier.size

    def element_names(self) -> tuple[str, ...]:
        return self.carrier.names

    def table_json(self) -> dict:
        names = self.carrier.names
        return {
            a: {b: names[self.op(i, j)] for j, b in enumerate(names)}
            for i, a in enumerate(names)
        }


@dataclass(frozen=True)
class GroupObject(MonoidObject):
    inv: MonotoneMap

    def __post_init__(self):
        super().__post_init__()
        if self.inv.dom != self.carrier or self.inv.cod != self.carrier:
            raise ShapeMismatch("inversion must be an endomap of the carrier")
        for i in range(self.size):
            if self.op(i, self.inv.assign[i]) != self.unit or self.op(self.inv.assign[i], i) != self.unit:
                raise AxiomFailure(f"{self.carrier.names[i]} has no two-sided inverse")

    def invert(self, i: int) -> int:
        return self.inv.assign[i]

    def discreteness_certificate(self) -> Certificate:
        """Group objects in posets have discrete carriers; record it."""
        w = None
        for i, j in self.carrier.covers:
            w = {"pair": [self.carrier.names[i], self.carrier.names[j]]}
            break
        return Certificate("group-carrier-discrete", (Check("no-strict-order", w is None, w),))


def make_monoid(
    carrier: Poset,
    table: Mapping[str, Mapping[str, str]] | Sequence[Sequence[int]],
    unit: str | int,
) -> MonoidObject:
    n = carrier.size
    assign = [0] * (n * n)
    if isinstance(table, Mapping):
        for a, row in table.items():
            i = carrier.index(a)
            for b, c in row.items():
                assign[i * n + carrier.index(b)] = carrier.index(c)
        if len(table) != n or any(len(row) != n for row in table.values()):
            raise AxiomFailure("multiplication table is not total")
    else:
        for i, row in enumerate(table):
            for j, c in enumerate(row):
                assign[i * n + j] = int(c)
    mult = MonotoneMap(product(carrier, carrier).poset, carrier, tuple(assign))
    e = carrier.index(unit) if isinstance(unit, str) else int(unit)
    return MonoidObject(carrier, mult, e)


def make_group(
    table: Mapping[str, Mapping[str, str]] | Sequence[Sequence[int]],
    carrier: Poset | None = None,
) -> GroupObject:
    """Build a group from a multiplication table; the unit is inferred.

    The carrier defaults to the discrete poset on the table's keys, in
    table order.
    """
    if carrier is None:
        if isinstance(table, Mapping):
            carrier = make_poset(tuple(table.keys()))
        else:
            carrier = discrete(len(table), prefix="g")
    n = carrier.size
    mono = make_monoid(carrier, table, _find_unit(carrier, table))
    inv_assign = []
    for i in range(n):
        j = next((j for j in range(n) if mono.op(i, j) == mono.unit and mono.op(j, i) == mono.unit), None)
        if j is None:
            raise AxiomFailure(f"{carrier.names[i]} has no inverse")
        inv_assign.append(j)
    inv = MonotoneMap(carrier, carrier, tuple(inv_assign))
    return GroupObject(carrier, mono.mult, mono.unit, inv)


def _find_unit(carrier: Poset, table) -> int:
    n = carrier.size
    op: list[list[int]] = [[0] * n for _ in range(n)]
    if isinstance(table, Mapping):
        for a, row in table.items():
            for b, c in row.items():
                op[carrier.index(a)][carrier.index(b)] = carrier.index(c)
    else:
        for i, row in enumerate(table):
            for j, c in enumerate(row):
                op[i][j] = int(c)
    for e in range(n):
        if all(op[e][i] == i and op[i][e] == i for i in range(n)):
            return e
    raise AxiomFailure("no two-sided unit in the table")


def cyclic(n: int) -> GroupObject:
    names = ["e"] + [f"r{i}" for i in range(1, n)]
    carrier = make_poset(names)
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    mult = MonotoneMap(product(carrier, carrier).poset, carrier,
                       tuple(table[i][j] for i in range(n) for j in range(n)))
    inv = MonotoneMap(carrier, carrier, tuple((-i) % n for i in range(n)))
    return GroupObject(carrier, mult, 0, inv)


def trivial_group() -> GroupObject:
    return cyclic(1)


def min_monoid() -> MonoidObject:
    """The 2-chain under minimum, with the top element as unit."""
    from .posets import chain

    c2 = chain(2)
    return make_monoid(c2, [[0, 0], [0, 1]], 1)


@dataclass(frozen=True)
class ActedPoset:
    """(X, a : M x X -> X) with the unit and associativity laws enforced."""

    acting: MonoidObject
    carrier: Poset
    action: MonotoneMap

    def __post_init__(self):
        m, x = self.acting.carrier, self.carrier
        if self.action.dom != product(m, x).poset or self.action.cod != x:
            raise ShapeMismatch("action must be a map M x X -> X")
        for xi in range(x.size):
            if self.act(self.acting.unit, xi) != xi:
                raise UnitLawFailure(f"unit moves {x.names[xi]}")
        for mi in range(m.size):
            for mj in range(m.size):
                for xi in range(x.size):
                    if self.act(mi, self.act(mj, xi)) != self.act(self.acting.op(mi, mj), xi):
                        raise AssocFailure(
                            f"{m.names[mi]}.({m.names[mj]}.{x.names[xi]}) differs from "
                            f"({m.names[mi]}{m.names[mj]}).{x.names[xi]}"
                        )

    def act(self, mi: int, xi: int) -> int:
        return self.action.assign[mi * self.carrier.size + xi]

    @property
    def is_group_action(self) -> bool:
        return isinstance(self.acting, GroupObject)

    @cached_property
    def translate_inverse_tables(self) -> tuple[tuple[int, ...], ...]:
        """For each m, the map U |-> {x : m.x in U} on up-set masks."""
        lat = upset_lattice(self.carrier)
        out = []
        for mi in range(self.acting.size):
            row = []
            for u in lat.elements:
                v = 0
                for xi in range(self.carrier.size):
                    if (u >> self.act(mi, xi)) & 1:
                        v |= 1 << xi
                row.append(v)
            out.append(tuple(row))
        return tuple(out)

    def table_json(self) -> dict:
        m, x = self.acting.carrier, self.carrier
        return {
            g: {x.names[xi]: x.names[self.act(mi, xi)] for xi in range(x.size)}
            for mi, g in enumerate(m.names)
        }

    def __repr__(self):
        return f"ActedPoset(M={self.acting.carrier.names}, X={self.carrier.names})"


def make_acted(
    monoid: MonoidObject,
    poset: Poset,
    table: Mapping[str, Mapping[str, str]] | Sequence[Sequence[int]],
) -> ActedPoset:
    m, n = monoid.size, poset.size
    assign = [0] * (m * n)
    if isinstance(table, Mapping):
        for g, row in table.items():
            mi = monoid.carrier.index(g)
            for a, b in row.items():
                assign[mi * n + poset.index(a)] = poset.index(b)
        if len(table) != m or any(len(row) != n for row in table.values()):
            raise AxiomFailure("action table is not total")
    else:
        for mi, row in enumerate(table):
            for xi, b in enumerate(row):
                assign[mi * n + xi] = int(b)
    action = MonotoneMap(product(monoid.carrier, poset).poset, poset, tuple(assign))
    return ActedPoset(monoid, poset, action)


def trivial_action(monoid: MonoidObject, poset: Poset) -> ActedPoset:
    assign = tuple(xi for _ in range(monoid.size) for xi in range(poset.size))
    action = MonotoneMap(product(monoid.carrier, poset).poset, poset, assign)
    return ActedPoset(monoid, poset, action)


def self_action(group: GroupObject) -> ActedPoset:
    """A group acting on its own carrier by multiplication."""
    return ActedPoset(group, group.carrier, group.mult)


def enumerate_actions(
    monoid: MonoidObject, poset: Poset, caps: Caps = DEFAULT_CAPS
) -> tuple[ActedPoset, ...]:
    """Every action of the monoid on the poset, in deterministic order."""
    ends = enumerate_monotone(poset, poset, caps)
    n = monoid.size
    id_index = next(i for i, f in enumerate(ends.maps) if f.is_identity())
    comp: dict[tuple[int, int], int] = {}
    index_of = {f.assign: i for i, f in enumerate(ends.maps)}

    def compose_idx(i: int, j: int) -> int:
        key = (i, j)
        if key not in comp:
            comp[key] = index_of[ends.maps[i].compose(ends.maps[j]).assign]
        return comp[key]

    results = []
    choice = [id_index] * n
    others = [k for k in range(n) if k != monoid.unit]

    def extend(pos: int):
        if pos == len(others):
            results.append(tuple(choice))
            return
        k = others[pos]
        assigned = [monoid.unit] + others[: pos + 1]
        for cand in range(len(ends.maps)):
            choice[k] = cand
            ok = True
            for k2 in assigned:
                a = monoid.op(k, k2)
                if a in assigned and compose_idx(choice[k], choice[k2]) != choice[a]:
                    ok = False
                    break
                b = monoid.op(k2, k)
                if b in assigned and compose_idx(choice[k2], choice[k]) != choice[b]:
                    ok = False
                    break
            if ok:
                extend(pos + 1)
        choice[k] = id_index

    extend(0)
    out = []
    for tup in sorted(set(results)):
        assign = tuple(
            ends.maps[tup[mi]].assign[xi]
            for mi in range(n)
            for xi in range(poset.size)
        )
        # the incremental pruning only sees products among assigned
        # elements, so laws (and joint monotonicity over an ordered
        # carrier) are revalidated here
        try:
            out.append(
                ActedPoset(
                    monoid, poset,
                    MonotoneMap(product(monoid.carrier, poset).poset, poset, assign),
                )
            )
        except (UnitLawFailure, AssocFailure, NotMonotone):
            continue
    return tuple(out)


@dataclass(frozen=True)
class EquivariantMap:
    dom: ActedPoset
    cod: ActedPoset
    map: MonotoneMap

    def __post_init__(self):
        if self.dom.acting != self.cod.acting:
            raise ShapeMismatch("acting objects differ")
        if self.map.dom != self.dom.carrier or self.map.cod != self.cod.carrier:
            raise ShapeMismatch("underlying map does not match the carriers")
        for mi in range(self.dom.acting.size):
            for xi in range(self.dom.carrier.size):
                if self.map.assign[self.dom.act(mi, xi)] != self.cod.act(mi, self.map.assign[xi]):
                    raise ConditionFailure(
                        "equivariance",
                        {
                            "m": self.dom.acting.carrier.names[mi],
                            "x": self.dom.carrier.names[xi],
                        },
                    )


def enumerate_equivariant(
    a: ActedPoset, b: ActedPoset, caps: Caps = DEFAULT_CAPS
) -> tuple[EquivariantMap, ...]:
    out = []
    for f in enumerate_monotone(a.carrier, b.carrier, caps):
        if all(
            f.assign[a.act(mi, xi)] == b.act(mi, f.assign[xi])
            for mi in range(a.acting.size)
            for xi in range(a.carrier.size)
        ):
            out.append(EquivariantMap(a, b, f))
    return tuple(out)


# ---------------------------------------------------------------------------
# Limits and colimits of actions (created by the forgetful functor)
# ---------------------------------------------------------------------------


def acted_product(a: ActedPoset, b: ActedPoset, caps: Caps = DEFAULT_CAPS) -> tuple[ActedPoset, EquivariantMap, EquivariantMap]:
    if a.acting != b.acting:
        raise ShapeMismatch("acting objects differ")
    prod = product(a.carrier, b.carrier, caps)
    ny = b.carrier.size
    assign = tuple(
        a.act(mi, k // ny) * ny + b.act(mi, k % ny)
        for mi in range(a.acting.size)
        for k in range(prod.poset.size)
    )
    acted = ActedPoset(a.acting, prod.poset,
                       MonotoneMap(product(a.acting.carrier, prod.poset).poset, prod.poset, assign))
    return acted, EquivariantMap(acted, a, prod.p1), EquivariantMap(acted, b, prod.p2)


def acted_coproduct(a: ActedPoset, b: ActedPoset, caps: Caps = DEFAULT_CAPS) -> tuple[ActedPoset, EquivariantMap, EquivariantMap]:
    if a.acting != b.acting:
        raise ShapeMismatch("acting objects differ")
    cop = coproduct(a.carrier, b.carrier, caps)
    na = a.carrier.size
    assign = tuple(
        (a.act(mi, k) if k < na else na + b.act(mi, k - na))
        for mi in range(a.acting.size)
        for k in range(cop.poset.size)
    )
    acted = ActedPoset(a.acting, cop.poset,
                       MonotoneMap(product(a.acting.carrier, cop.poset).poset, cop.poset, assign))
    return acted, EquivariantMap(a, acted, cop.inl), EquivariantMap(b, acted, cop.inr)


def acted_equalizer(f: EquivariantMap, g: EquivariantMap) -> tuple[ActedPoset, EquivariantMap]:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("need a parallel pair of equivariant maps")
    eq = equalizer(f.map, g.map)
    src = f.dom
    keep = list(eq.include.assign)
    pos = {k: t for t, k in enumerate(keep)}
    assign = tuple(
        pos[src.act(mi, k)]
        for mi in range(src.acting.size)
        for k in keep
    )
    acted = ActedPoset(src.acting, eq.poset,
                       MonotoneMap(product(src.acting.carrier, eq.poset).poset, eq.poset, assign))
    return acted, EquivariantMap(acted, src, eq.include)


def creation_certificate(
    a: ActedPoset, b: ActedPoset, targets: Sequence[ActedPoset] = (), caps: Caps = DEFAULT_CAPS
) -> Certificate:
    """The forgetful functor creates products, equalizers and coproducts:
    the acted constructions sit on the plain poset constructions, and the
    universal properties restrict to action-preserving cones/cocones."""
    checks = []
    prod_acted, p1, p2 = acted_product(a, b, caps)
    checks.append(Check("product-underlying", prod_acted.carrier == product(a.carrier, b.carrier, caps).poset))
    w = None
    for z in targets:
        pairs = len(enumerate_equivariant(z, a, caps)) * len(enumerate_equivariant(z, b, caps))
        cones = len(enumerate_equivariant(z, prod_acted, caps))
        if pairs != cones:
            w = {"target": z.carrier.names, "pairs": pairs, "cones": cones}
            break
    checks.append(Check("product-universal", w is None, w))
    cop_acted, _, _ = acted_coproduct(a, b, caps)
    checks.append(Check("coproduct-underlying", cop_acted.carrier == coproduct(a.carrier, b.carrier, caps).poset))
    w = None
    for z in targets:
        pairs = len(enumerate_equivariant(a, z, caps)) * len(enumerate_equivariant(b, z, caps))
        cocones = len(enumerate_equivariant(cop_acted, z, caps))
        if pairs != cocones:
            w = {"target": z.carrier.names, "pairs": pairs, "cocones": cocones}
            break
    checks.append(Check("coproduct-couniversal", w is None, w))
    w = None
    for f in enumerate_equivariant(a, b, caps):
        for g in enumerate_equivariant(a, b, caps):
            eq_acted, inc = acted_equalizer(f, g)
            if eq_acted.carrier != equalizer(f.map, g.map).poset:
                w = {"pair": [list(f.map.assign), list(g.map.assign)]}
                break
        if w:
            break
    checks.append(Check("equalizer-underlying", w is None, w))
    return Certificate("forgetful-creates-limits", tuple(checks))


# ---------------------------------------------------------------------------
# Free actions and the free -| forgetful adjunction
# ---------------------------------------------------------------------------


def free_action(monoid: MonoidObject, x: Poset, caps: Caps = DEFAULT_CAPS) -> ActedPoset:
    """(M x X, mult x Id)."""
    m = monoid.carrier
    mx = product(m, x, caps)
    n = x.size
    assign = tuple(
        monoid.op(mi, k // n) * n + (k % n)
        for mi in range(m.size)
        for k in range(mx.poset.size)
    )
    return ActedPoset(monoid, mx.poset,
                      MonotoneMap(product(m, mx.poset).poset, mx.poset, assign))


@dataclass(frozen=True)
class FreeForgetful:
    group: GroupObject
    base: Poset
    free: ActedPoset
    unit_map: MonotoneMap           # X -> G x X
    certificate: Certificate

    def counit_at(self, acted: ActedPoset) -> EquivariantMap:
        free_on = free_action(acted.acting, acted.carrier)
        return EquivariantMap(free_on, acted, acted.action)


def free_forgetful(group: GroupObject, x: Poset, caps: Caps = DEFAULT_CAPS,
                   sample_actions: Sequence[ActedPoset] = ()) -> FreeForgetful:
    """The free-action adjunction with its Frobenius witness.

    The Frobenius map (g, x, y) |-> (g.x, g, y) and its stated inverse
    (x, g, y) |-> (g, g^-1 x, y) are built explicitly and checked to be
    mutually inverse equivariant maps for each sampled action.
    """
    g = group.carrier
    free = free_action(group, x, caps)
    n = x.size
    unit_map = MonotoneMap(x, free.carrier, tuple(group.unit * n + xi for xi in range(x.size)))
    checks = []
    # triangle 1: counit at free object after free(unit) is the identity
    mu_free = free.action  # (m x Id) is also the counit at the free object
    free_unit = MonotoneMap(
        free.carrier, product(g, free.carrier, caps).poset,
        tuple(gi * free.carrier.size + (group.unit * n + xi)
              for gi in range(g.size) for xi in range(n)),
    )
    tri1 = mu_free.compose(free_unit)
    checks.append(Check("triangle-free", tri1.is_identity()))
    ws = None
    for acted in sample_actions:
        na = acted.carrier.size
        eta = MonotoneMap(acted.carrier,
                          free_action(group, acted.carrier, caps).carrier,
                          tuple(group.unit * na + xi for xi in range(na)))
        tri2 = acted.action.compose(eta)
        if not tri2.is_identity():
            ws = {"carrier": acted.carrier.names}
            break
    checks.append(Check("triangle-forgetful", ws is None, ws))
    ws = None
    for acted in sample_actions:
        if not _frobenius_iso_ok(group, acted, x, caps):
            ws = {"carrier": acted.carrier.names}
            break
    checks.append(Check("frobenius-reciprocity", ws is None, ws))
    ws = None
    for acted in sample_actions:
        if not _free_twist_iso_ok(group, acted, caps):
            ws = {"carrier": acted.carrier.names}
            break
    checks.append(Check("free-twist-isomorphism", ws is None, ws))
    cert = Certificate("free-forgetful", tuple(checks))
    return FreeForgetful(group, x, free, unit_map, cert)


def _frobenius_iso_ok(group: GroupObject, acted: ActedPoset, y: Poset, caps: Caps) -> bool:
    g = group.carrier
    x = acted.carrier
    nx, ny = x.size, y.size
    gxy = product(g, product(x, y, caps).poset, caps).poset     # G x (X x Y)
    xgy = product(x, product(g, y, caps).poset, caps).poset     # X x (G x Y)
    fwd_assign = []
    for gi in range(g.size):
        for k in range(nx * ny):
            xi, yi = k // ny, k % ny
            fwd_assign.append(acted.act(gi, xi) * (g.size * ny) + gi * ny + yi)
    fwd = MonotoneMap(gxy, xgy, tuple(fwd_assign))
    bwd_assign = []
    for xi in range(nx):
        for k in range(g.size * ny):
            gi, yi = k // ny, k % ny
            bwd_assign.append(gi * (nx * ny) + acted.act(group.invert(gi), xi) * ny + yi)
    bwd = MonotoneMap(xgy, gxy, tuple(bwd_assign))
    if not (bwd.compose(fwd).is_identity() and fwd.compose(bwd).is_identity()):
        return False
    # equivariance: source h.(g,x,y)=(hg,x,y); target h.(x,g,y)=(h.x,hg,y)
    for hi in range(g.size):
        for gi in range(g.size):
            for k in range(nx * ny):
                lhs = fwd.assign[group.op(hi, gi) * (nx * ny) + k]
                v = fwd.assign[gi * (nx * ny) + k]
                xi2, rest = v // (g.size * ny), v % (g.size * ny)
                gi2, yi2 = rest // ny, rest % ny
                rhs = acted.act(hi, xi2) * (g.size * ny) + group.op(hi, gi2) * ny + yi2
                if lhs != rhs:
                    return False
    return True


def _free_twist_iso_ok(group: GroupObject, acted: ActedPoset, caps: Caps) -> bool:
    """(G, m) x (X, trivial)  ~  (G, m) x (X, a) via (g, x) |-> (g, g.x)."""
    g = group.carrier
    x = acted.carrier
    n = x.size
    gx = product(g, x, caps).poset
    twist = MonotoneMap(gx, gx, tuple(
        gi * n + acted.act(gi, xi) for gi in range(g.size) for xi in range(n)
    ))
    untwist = MonotoneMap(gx, gx, tuple(
        gi * n + acted.act(group.invert(gi), xi) for gi in range(g.size) for xi in range(n)
    ))
    if not (untwist.compose(twist).is_identity() and twist.compose(untwist).is_identity()):
        return False
    diag, _, _ = acted_product(
        ActedPoset(group, g, group.mult),
        trivial_action(group, x),
        caps,
    )
    target, _, _ = acted_product(ActedPoset(group, g, group.mult), acted, caps)
    for gi in range(g.size):
        for k in range(gx.size):
            if twist.assign[diag.act(gi, k)] != target.act(gi, twist.assign[k]):
                return False
    return True


# ---------------------------------------------------------------------------
# The induced action on P(X) and the stability verification
# ---------------------------------------------------------------------------


def power_action(acted: ActedPoset, caps: Caps = DEFAULT_CAPS) -> tuple[ActedPoset, Certificate]:
    """a^P = P(a) . t_{M,X} : M x P(X) -> P(X).

    For group actions the closed form g.Phi = {U : g^-1 U in Phi} is an
    independent oracle and must agree with the strength route.
    """
    m = acted.acting.carrier
    x = acted.carrier
    t = strength(m, x, caps)
    pa = power_map(acted.action, caps)
    action = pa.compose(t)
    dp = double_power(x, caps)
    result = ActedPoset(acted.acting, dp.carrier, action)
    checks = []
    if acted.is_group_action:
        group = acted.acting
        assert isinstance(group, GroupObject)
        lat = dp.lattice
        inv_tables = acted.translate_inverse_tables
        w = None
        for gi in range(m.size):
            table = inv_tables[gi]
            for t_idx, phi in enumerate(dp.points.elements):
                closed = 0
                for i in range(lat.size):
                    if (phi >> lat.index(table[i])) & 1:
                        closed |= 1 << i
                if dp.points.index(closed) != result.act(gi, t_idx):
                    w = {"g": m.names[gi], "phi": t_idx}
                    break
            if w:
                break
        checks.append(Check("group-closed-form", w is None, w))
    return result, Certificate("power-action", tuple(checks), {"carrier": dp.size})


def delta_exp(m: Poset, delta: LatticeMap, caps: Caps = DEFAULT_CAPS) -> LatticeMap:
    """The exponentiated transformation delta^M : S^{MxX} -> S^{MxY},
    applying delta fiberwise over M (restriction along the points of M)."""
    x = delta.dom.base
    y = delta.cod.base
    smx = upset_lattice(product(m, x, caps).poset, caps)
    smy = upset_lattice(product(m, y, caps).poset, caps)
    nx, ny = x.size, y.size
    xmask = (1 << nx) - 1
    assign = []
    for w in smx.elements:
        out = 0
        for mi in range(m.size):
            fiber = (w >> (mi * nx)) & xmask
            out |= delta(fiber) << (mi * ny)
        assign.append(out)
    return LatticeMap(smx, smy, tuple(assign))


def _equivariance_tables(a: ActedPoset, b: ActedPoset, caps: Caps):
    """Index tables turning the square delta^M S^a = S^b delta into a
    pointwise condition on lattice-map tables."""
    sx = upset_lattice(a.carrier, caps)
    sy = upset_lattice(b.carrier, caps)
    a_inv = a.translate_inverse_tables       # masks
    b_inv = b.translate_inverse_tables
    a_idx = tuple(tuple(sx.index(v) for v in row) for row in a_inv)
    return sx, sy, a_idx, b_inv


def is_equivariant_lattice_map(
    a: ActedPoset, b: ActedPoset, delta: LatticeMap, caps: Caps = DEFAULT_CAPS
) -> bool:
    sx, sy, a_idx, b_inv = _equivariance_tables(a, b, caps)
    assign = delta.assign
    for mi in range(a.acting.size):
        arow = a_idx[mi]
        brow = b_inv[mi]
        for i in range(sx.size):
            if assign[arow[i]] != brow[sy.index(assign[i])]:
                return False
    return True


def equivariant_nats(
    a: ActedPoset, b: ActedPoset, caps: Caps = DEFAULT_CAPS
) -> tuple[LatticeMap, ...]:
    """Lattice maps S^X -> S^Y commuting with the two actions."""
    if a.acting != b.acting:
        raise ShapeMismatch("acting objects differ")
    sx, sy, a_idx, b_inv = _equivariance_tables(a, b, caps)
    sy_index = sy.index_of
    out = []
    for delta in nat_trans_space(a.carrier, b.carrier, caps):
        assign = delta.assign
        ok = True
        for mi in range(a.acting.size):
            arow = a_idx[mi]
            brow = b_inv[mi]
            for i in range(sx.size):
                if assign[arow[i]] != brow[sy_index[assign[i]]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(delta)
    return tuple(out)


def equivariance_square_certificate(
    a: ActedPoset, b: ActedPoset, delta: LatticeMap, caps: Caps = DEFAULT_CAPS
) -> Certificate:
    """Cross-check the pointwise filter against the literal square built
    from the genuine exponentiated transformation."""
    d_exp = delta_exp(a.acting.carrier, delta, caps)
    sa = inverse_image(a.action, caps)
    sb = inverse_image(b.action, caps)
    lhs = d_exp.compose(sa)
    rhs = sb.compose(delta)
    agree = (lhs == rhs) == is_equivariant_lattice_map(a, b, delta, caps)
    return Certificate(
        "equivariance-square",
        (Check("pointwise-matches-literal-square", agree),),
    )


def _relation_bitset_from_delta(delta: LatticeMap) -> int:
    """{(U index, y)} as one integer, the invariant shared by both transposes."""
    ny = delta.cod.base.size
    out = 0
    for i, v in enumerate(delta.assign):
        out |= v << (i * ny)
    return out


def _relation_bitset_from_map(h: MonotoneMap, dp: DoublePower) -> int:
    ny = h.dom.size
    out = 0
    for yi in range(ny):
        phi = dp.points.elements[h.assign[yi]]
        for i in range(dp.lattice.size):
            if (phi >> i) & 1:
                out |= 1 << (i * ny + yi)
    return out


def verify_stability(
    a: ActedPoset, b: ActedPoset, caps: Caps = DEFAULT_CAPS,
    naturality: Sequence[ActedPoset] = (),
    pair_check_budget: int = 200,
) -> Certificate:
    """Transpose restricts to an order isomorphism between
    action-compatible lattice maps S^X -> S^Y and action-preserving maps
    Y -> (P(X), a^P).

    Both sides are enumerated independently; the two transposes are applied
    elementwise and must compose to the identity both ways.  Each map and
    its transpose must induce the same membership relation, which makes
    both orders inclusion of the same bitsets, hence an order isomorphism;
    small instances additionally get the quadratic pairwise comparison.
    """
    if a.acting != b.acting:
        raise ShapeMismatch("acting objects differ")
    dp = double_power(a.carrier, caps)
    p_acted, power_cert = power_action(a, caps)
    sy = upset_lattice(b.carrier, caps)
    deltas = equivariant_nats(a, b, caps)
    maps = [e.map for e in enumerate_equivariant(b, p_acted, caps)]
    map_set = {h.assign for h in maps}
    delta_set = {d.assign for d in deltas}
    checks = list(power_cert.checks)
    checks.append(Check(
        "counts-agree", len(deltas) == len(maps),
        None if len(deltas) == len(maps) else {"deltas": len(deltas), "maps": len(maps)}))
    w = None
    transposed = []
    for delta in deltas:
        h = dp.transpose_nat(delta)
        transposed.append(h)
        if h.assign not in map_set:
            w = {"delta": list(delta.assign)}
            break
    checks.append(Check("transpose-lands-equivariant", w is None, w))
    w = None
    for h in maps:
        d = dp.transpose_map(h, sy)
        if d.assign not in delta_set:
            w = {"map": list(h.assign)}
            break
        if dp.transpose_nat(d) != h:
            w = {"map": list(h.assign), "roundtrip": False}
            break
    checks.append(Check("transpose-back-lands-and-roundtrips", w is None, w))
    w = None
    for delta, h in zip(deltas, transposed):
        if dp.transpose_map(h, sy) != delta:
            w = {"delta": list(delta.assign)}
            break
        if _relation_bitset_from_delta(delta) != _relation_bitset_from_map(h, dp):
            w = {"delta": list(delta.assign), "relation": "differs"}
            break
    checks.append(Check("roundtrip-and-shared-relation", w is None, w))
    if len(deltas) <= pair_check_budget:
        w = None
        for (d1, h1), (d2, h2) in itertools.product(zip(deltas, transposed), repeat=2):
            if d1.pointwise_leq(d2) != h1.pointwise_leq(h2):
                w = {"pair": [list(d1.assign), list(d2.assign)]}
                break
        checks.append(Check("pairwise-order-isomorphism", w is None, w))
    else:
        checks.append(Check("pairwise-order-isomorphism-skipped-by-budget", True,
                            {"size": len(deltas)}))
    w = None
    for z in naturality:
        for k in enumerate_equivariant(z, b, caps):
            sz = upset_lattice(z.carrier, caps)
            sk = inverse_image(k.map, caps)
            for delta in deltas[: min(len(deltas), 50)]:
                lhs = dp.transpose_nat(sk.compose(delta))
                rhs = dp.transpose_nat(delta).compose(k.map)
                if lhs != rhs:
                    w = {"target": z.carrier.names, "delta": list(delta.assign)}
                    break
            if w:
                break
        if w:
            break
    checks.append(Check("naturality-squares", w is None, w))
    return Certificate(
        "stability", tuple(checks),
        {"equivariant-lattice-maps": len(deltas), "equivariant-maps-into-power": len(maps)},
    )


# ---------------------------------------------------------------------------
# The mate correspondence
# ---------------------------------------------------------------------------


def mate(delta: LatticeMap, acted: ActedPoset, caps: Caps = DEFAULT_CAPS) -> LatticeMap:
    """Mate of delta : S^X -> S^Y against an action on X:
    (g, y) in mate(delta)(V)  iff  y in delta(g^-1 . V).

    Lands in S^{G x Y} where G x Y carries the free action; the unit
    component recovers delta.  Needs inverses, hence a group.
    """
    if not isinstance(acted.acting, GroupObject):
        raise GroupRequired("the mate formula inverts group elements")
    if delta.dom.base != acted.carrier:
        raise ShapeMismatch("delta must start at S^X for the acted X")
    group = acted.acting
    y = delta.cod.base
    ny = y.size
    gy = product(group.carrier, y, caps).poset
    sgy = upset_lattice(gy, caps)
    inv_tables = acted.translate_inverse_tables
    assign = []
    for v in delta.dom.elements:
        out = 0
        for gi in range(group.size):
            translated = inv_tables[gi][delta.dom.index(v)]
            out |= delta(translated) << (gi * ny)
        assign.append(out)
    return LatticeMap(delta.dom, sgy, tuple(assign))


def comate(mu: LatticeMap, acted: ActedPoset, y: Poset, caps: Caps = DEFAULT_CAPS) -> LatticeMap:
    """Inverse of the mate: read off the component over the group unit."""
    if not isinstance(acted.acting, GroupObject):
        raise GroupRequired("the comate needs the group unit")
    group = acted.acting
    if mu.cod.base != product(group.carrier, y, caps).poset:
        raise ShapeMismatch("mate must land in S^(G x Y)")
    sy = upset_lattice(y, caps)
    ny = y.size
    emask = (1 << ny) - 1
    assign = tuple((mu.assign[i] >> (group.unit * ny)) & emask for i in range(mu.dom.size))
    return LatticeMap(mu.dom, sy, assign)


def mate_certificate(
    acted: ActedPoset, y: Poset, deltas: Sequence[LatticeMap] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> Certificate:
    """Roundtrip, unit component, equivariance into the free action, and
    order preservation both ways, over a full transformation space."""
    if deltas is None:
        deltas = nat_trans_space(acted.carrier, y, caps)
    group = acted.acting
    assert isinstance(group, GroupObject)
    free = free_action(group, y, caps)
    checks = []
    w = None
    mates = []
    for delta in deltas:
        mu = mate(delta, acted, caps)
        mates.append(mu)
        back = comate(mu, acted, y, caps)
        if back.assign != delta.assign:
            w = {"delta": list(delta.assign)}
            break
    checks.append(Check("comate.mate=id", w is None, w))
    w = None
    ny = y.size
    for delta, mu in zip(deltas, mates):
        unit_component = tuple((v >> (group.unit * ny)) & ((1 << ny) - 1) for v in mu.assign)
        if unit_component != delta.assign:
            w = {"delta": list(delta.assign)}
            break
    checks.append(Check("unit-component-recovers-delta", w is None, w))
    w = None
    for delta, mu in zip(deltas, mates):
        if not is_equivariant_lattice_map(acted, free, mu, caps):
            w = {"delta": list(delta.assign)}
            break
    checks.append(Check("mate-equivariant-into-free", w is None, w))
    w = None
    for i in range(len(deltas) - 1):
        for j in range(i + 1, min(len(deltas), i + 40)):
            if deltas[i].pointwise_leq(deltas[j]) != mates[i].pointwise_leq(mates[j]):
                w = {"pair": [i, j]}
                break
        if w:
            break
    checks.append(Check("order-preserved-both-ways", w is None, w))
    surj = None
    if acted.carrier.size <= 2 and y.size <= 2:
        seen = {m.assign for m in mates}
        for mu_assign in _equivariant_into_free(acted, y, caps):
            if mu_assign not in seen:
                surj = {"missing": list(mu_assign)}
                break
    checks.append(Check("mate-onto-equivariant-maps", surj is None, surj))
    return Certificate("mate", tuple(checks), {"deltas": len(deltas)})


def _equivariant_into_free(acted: ActedPoset, y: Poset, caps: Caps):
    group = acted.acting
    assert isinstance(group, GroupObject)
    free = free_action(group, y, caps)
    for mu in nat_trans_space(acted.carrier, free.carrier, caps):
        if is_equivariant_lattice_map(acted, free, mu, caps):
            yield mu.assign


# ---------------------------------------------------------------------------
# The U-split coequalizer of a free resolution
# ---------------------------------------------------------------------------


def verify_split_coequalizer(
    acted: ActedPoset, targets: Sequence[ActedPoset] = (), caps: Caps = DEFAULT_CAPS
) -> Certificate:
    """G x G x X => G x X -> X is a coequalizer of actions, split under U.

    The two maps are (multiply) and (act); the splitting in plain posets is
    insertion of the unit in front.  The coequalizer property is checked by
    enumerating action-preserving cocones into each target.
    """
    group = acted.acting
    g = group.carrier
    x = acted.carrier
    n = x.size
    gx = product(g, x, caps).poset
    ggx = product(g, gx, caps).poset
    mu = MonotoneMap(ggx, gx, tuple(
        group.op(gi, k // n) * n + (k % n)
        for gi in range(g.size) for k in range(gx.size)
    ))
    ta = MonotoneMap(ggx, gx, tuple(
        gi2 * n + acted.act(k2 // n, k2 % n)
        for gi2 in range(g.size) for k2 in range(gx.size)
    ))
    checks = []
    checks.append(Check("fork-commutes", acted.action.compose(mu) == acted.action.compose(ta)))
    s = MonotoneMap(x, gx, tuple(group.unit * n + xi for xi in range(n)))
    t = MonotoneMap(gx, ggx, tuple(group.unit * gx.size + k for k in range(gx.size)))
    checks.append(Check("splitting-a.s=id", acted.action.compose(s).is_identity()))
    checks.append(Check("splitting-mu.t=id", mu.compose(t).is_identity()))
    checks.append(Check("splitting-ta.t=s.a", ta.compose(t) == s.compose(acted.action)))
    free = free_action(group, x, caps)
    w = None
    factored = 0
    for target in targets:
        if target.acting != group:
            continue
        for h in enumerate_equivariant(free, target, caps):
            if h.map.compose(mu) != h.map.compose(ta):
                continue
            factored += 1
            hbar = MonotoneMap(x, target.carrier,
                               tuple(h.map.assign[group.unit * n + xi] for xi in range(n)))
            try:
                EquivariantMap(acted, target, hbar)
            except ConditionFailure:
                w = {"target": target.carrier.names, "h": list(h.map.assign)}
                break
            if hbar.compose(acted.action) != h.map:
                w = {"target": target.carrier.names, "h": list(h.map.assign), "factor": False}
                break
        if w:
            break
    checks.append(Check("coequalizer-of-actions", w is None, w))
    return Certificate("split-coequalizer", tuple(checks), {"cocones-factored": factored})
