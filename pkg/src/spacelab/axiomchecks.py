"""The seven axiom checkers, each quantified over a poset catalog.

Every checker returns a Certificate whose checks carry witnesses on
failure.  Enumeration scopes are deterministic: where a full sweep would
be astronomically large (e.g. every lattice map out of a 16-element
Boolean algebra), the checker switches to an exact structural argument
plus a bounded literal enumeration, and says so in the check name.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .certificates import Certificate, Check
from .config import DEFAULT_CAPS, Caps
from .errors import NotDLatHom, SizeCap
from .posets import (
    HomSet,
    MonotoneMap,
    Poset,
    case_map,
    coequalizer,
    coproduct,
    empty,
    enumerate_monotone,
    equalizer,
    pair_map,
    point,
    product,
    pullback,
    verify_distributivity,
)
from .power import (
    axiom7_check,
    double_power,
    enumerate_dlat_homs,
    enumerate_inflationary_join_idempotents,
    nat_trans_space,
    recover_map,
    split_inflationary,
    unit,
)
from .upsets import (
    inverse_image,
    upset_lattice,
    verify_order_internal_lattice,
    verify_sierpinski,
)


def _pair_order_iso(items, leq_a, leq_b, budget: int = 150) -> dict | None:
    """Check two order relations agree on a family; banded beyond budget."""
    n = len(items)
    if n <= budget:
        indices = range(n)
        for i in indices:
            for j in indices:
                if leq_a(items[i], items[j]) != leq_b(items[i], items[j]):
                    return {"pair": [i, j]}
        return None
    for i in range(n):
        for j in range(i + 1, min(n, i + 12)):
            if leq_a(items[i], items[j]) != leq_b(items[i], items[j]):
                return {"pair": [i, j]}
    return None


def axiom1_certificate(catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Order enriched finite limits and finite coproducts."""
    checks = []
    one = point()
    w = None
    for x in catalog:
        if len(enumerate_monotone(x, one, caps)) != 1:
            w = {"poset": x.names, "side": "terminal"}
            break
        if len(enumerate_monotone(empty(), x, caps)) != 1:
            w = {"poset": x.names, "side": "initial"}
            break
    checks.append(Check("terminal-and-initial", w is None, w))

    w = None
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        prod = product(x, y, caps)
        for z in catalog:
            hxy = enumerate_monotone(z, prod.poset, caps)
            hx = enumerate_monotone(z, x, caps)
            hy = enumerate_monotone(z, y, caps)
            if len(hxy) != len(hx) * len(hy):
                w = {"z": z.names, "x": x.names, "y": y.names,
                     "count": [len(hxy), len(hx), len(hy)]}
                break
            seen = set()
            for h in hxy:
                legs = (prod.p1.compose(h).assign, prod.p2.compose(h).assign)
                if legs in seen:
                    w = {"z": z.names, "x": x.names, "y": y.names, "collision": True}
                    break
                seen.add(legs)
            if w:
                break
            iso_w = _pair_order_iso(
                hxy.maps,
                lambda f, t: f.pointwise_leq(t),
                lambda f, t: prod.p1.compose(f).pointwise_leq(prod.p1.compose(t))
                and prod.p2.compose(f).pointwise_leq(prod.p2.compose(t)),
            )
            if iso_w:
                w = {"z": z.names, "x": x.names, "y": y.names, **iso_w}
                break
    checks.append(Check("product-order-universal", w is None, w))

    w = None
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        cop = coproduct(x, y, caps)
        for z in catalog:
            hz = enumerate_monotone(cop.poset, z, caps)
            hx = enumerate_monotone(x, z, caps)
            hy = enumerate_monotone(y, z, caps)
            if len(hz) != len(hx) * len(hy):
                w = {"z": z.names, "x": x.names, "y": y.names}
                break
            iso_w = _pair_order_iso(
                hz.maps,
                lambda f, t: f.pointwise_leq(t),
                lambda f, t: f.compose(cop.inl).pointwise_leq(t.compose(cop.inl))
                and f.compose(cop.inr).pointwise_leq(t.compose(cop.inr)),
            )
            if iso_w:
                w = {"z": z.names, "x": x.names, "y": y.names, **iso_w}
                break
    checks.append(Check("coproduct-order-couniversal", w is None, w))
    w = None
    for x, y in itertools.product(catalog, repeat=2):
        cop = coproduct(x, y, caps)
        image = cop.inl.image_mask() | cop.inr.image_mask()
        if image != cop.poset.full_mask:
            w = {"x": x.names, "y": y.names, "stage": "jointly-surjective"}
            break
        for i in range(x.size):
            for j in range(x.size):
                if cop.poset.leq(cop.inl.assign[i], cop.inl.assign[j]) != x.leq(i, j):
                    w = {"x": x.names, "stage": "order-reflecting"}
                    break
    checks.append(Check("coproduct-injections", w is None, w))

    w = None
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        homs = enumerate_monotone(x, y, caps)
        for f, g in itertools.product(homs, repeat=2):
            eq = equalizer(f, g)
            for i in range(eq.poset.size):
                for j in range(eq.poset.size):
                    if eq.poset.leq(i, j) != x.leq(eq.include.assign[i], eq.include.assign[j]):
                        w = {"x": x.names, "stage": "order-reflecting"}
                        break
            if not eq.include.is_injective:
                w = {"x": x.names, "stage": "monic"}
            if w:
                break
        if w:
            break
    checks.append(Check("equalizer-monic-order-reflecting", w is None, w))

    w = None
    small = [p for p in catalog if p.size <= 2]
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        homs = enumerate_monotone(x, y, caps)
        for f, g in itertools.product(homs.maps, homs.maps):
            eq = equalizer(f, g)
            for z in small:
                hzx = enumerate_monotone(z, x, caps)
                solutions = [h for h in hzx if f.compose(h) == g.compose(h)]
                through = enumerate_monotone(z, eq.poset, caps)
                if len(solutions) != len(through):
                    w = {"x": x.names, "y": y.names, "z": z.names,
                         "solutions": len(solutions), "through": len(through)}
                    break
            if w:
                break
        if w:
            break
    checks.append(Check("equalizer-universal-small-stages", w is None, w))

    w = None
    for x, y, z in itertools.product(catalog, repeat=3):
        if x.size * y.size > caps.max_elements:
            continue
        fs = enumerate_monotone(x, z, caps)
        gs = enumerate_monotone(y, z, caps)
        for f in fs.maps[:6]:
            for g in gs.maps[:6]:
                pb = pullback(f, g, caps)
                prod = product(x, y, caps)
                fp = f.compose(prod.p1)
                gp = g.compose(prod.p2)
                eq = equalizer(fp, gp)
                if eq.poset.names != pb.poset.names or eq.poset.up != pb.poset.up:
                    w = {"x": x.names, "y": y.names, "z": z.names}
                    break
            if w:
                break
        if w:
            break
    checks.append(Check("pullback-is-equalizer-of-product", w is None, w))

    w = None
    for x, y in itertools.product(catalog, repeat=2):
        homs = enumerate_monotone(x, y, caps)
        rows = homs.order_rows
        for i in range(len(rows)):
            if not (rows[i] >> i) & 1:
                w = {"x": x.names, "y": y.names, "stage": "reflexive"}
                break
        for i in range(len(rows)):
            rest = rows[i]
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if rows[j] & ~rows[i]:
                    w = {"x": x.names, "y": y.names, "stage": "transitive"}
                if i != j and (rows[j] >> i) & 1:
                    w = {"x": x.names, "y": y.names, "stage": "antisymmetric"}
            if w:
                break
        if w:
            break
    checks.append(Check("hom-sets-are-posets", w is None, w))
    return Certificate("axiom1", tuple(checks))


def axiom2_certificate(catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Pullback preserves finite coproducts (includes distributivity)."""
    checks = []
    w = None
    for x, y, z in itertools.product(catalog, repeat=3):
        cert = verify_distributivity(x, y, z, caps=caps)
        if not cert.ok:
            bad = cert.first_failure()
            assert bad is not None
            w = {"x": x.names, "y": y.names, "z": z.names, "check": bad.name}
            break
    checks.append(Check("distributivity", w is None, w))

    w = None
    small = [p for p in catalog if p.size <= 2]
    for v in catalog:
        if w:
            break
        for u_dom in small:
            if w:
                break
            for u in enumerate_monotone(u_dom, v, caps):
                if w:
                    break
                for a, b in itertools.product(small, repeat=2):
                    cop = coproduct(a, b, caps)
                    for p in enumerate_monotone(a, v, caps).maps[:4]:
                        for q in enumerate_monotone(b, v, caps).maps[:4]:
                            glued = case_map(p, q, cop)
                            whole = pullback(u, glued, caps)
                            left = pullback(u, p, caps)
                            right = pullback(u, q, caps)
                            if whole.poset.size != left.poset.size + right.poset.size:
                                w = {"v": v.names, "u": list(u.assign)}
                                break
                        if w:
                            break
                    if w:
                        break
    checks.append(Check("pullback-preserves-coproducts-bounded", w is None, w))
    return Certificate("axiom2", tuple(checks))


def axiom3_certificate(catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS) -> Certificate:
    checks = []
    internal = verify_order_internal_lattice(upset_lattice(point(), caps))
    checks.append(Check("sierpinski-order-internal-dlat", internal.ok, None))
    w = None
    for x in catalog:
        cert = verify_sierpinski(x, caps=caps)
        if not cert.ok:
            bad = cert.first_failure()
            assert bad is not None
            w = {"poset": x.names, "check": bad.name, **(bad.witness or {})}
            break
    checks.append(Check("maps-classify-upsets", w is None, w))
    w = None
    for x in catalog:
        cert = verify_order_internal_lattice(upset_lattice(x, caps))
        if not cert.ok:
            w = {"poset": x.names}
            break
    checks.append(Check("upset-lattices-order-internal", w is None, w))
    return Certificate("axiom3", tuple(checks))


def axiom4_certificate(catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Double exponentiability: the transpose is a natural order iso."""
    checks = []
    w = None
    counts = {}
    for xi, x in enumerate(catalog):
        if w:
            break
        dp = double_power(x, caps)
        ny_total = 0
        for y in catalog:
            nats = nat_trans_space(x, y, caps)
            homs = enumerate_monotone(y, dp.carrier, caps)
            ny_total += len(nats)
            if len(nats) != len(homs):
                w = {"x": x.names, "y": y.names, "nats": len(nats), "homs": len(homs)}
                break
            hom_set = {h.assign for h in homs}
            sy = upset_lattice(y, caps)
            seen = set()
            for delta in nats:
                h = dp.transpose_nat(delta)
                if h.assign not in hom_set or h.assign in seen:
                    w = {"x": x.names, "y": y.names, "delta": list(delta.assign)}
                    break
                seen.add(h.assign)
                if dp.transpose_map(h, sy) != delta:
                    w = {"x": x.names, "y": y.names, "delta": list(delta.assign),
                         "stage": "roundtrip"}
                    break
                rel_delta = 0
                nyp = y.size
                for i, v in enumerate(delta.assign):
                    rel_delta |= v << (i * nyp)
                rel_h = 0
                for yi in range(nyp):
                    phi = dp.points.elements[h.assign[yi]]
                    for i in range(dp.lattice.size):
                        if (phi >> i) & 1:
                            rel_h |= 1 << (i * nyp + yi)
                if rel_delta != rel_h:
                    w = {"x": x.names, "y": y.names, "stage": "order-relation"}
                    break
            if w:
                break
        counts[f"nats-from-{xi}"] = ny_total
    checks.append(Check("transpose-order-isomorphism", w is None, w))

    w = None
    for x in catalog:
        if w:
            break
        if x.size > 2:
            continue
        dp = double_power(x, caps)
        for y, y2 in itertools.product(catalog, repeat=2):
            if y.size > 2 or y2.size > 2:
                continue
            sy = upset_lattice(y, caps)
            nats = nat_trans_space(x, y, caps)
            for k in enumerate_monotone(y2, y, caps):
                sk = inverse_image(k, caps)
                for delta in nats[: min(len(nats), 30)]:
                    lhs = dp.transpose_nat(sk.compose(delta))
                    rhs = dp.transpose_nat(delta).compose(k)
                    if lhs != rhs:
                        w = {"x": x.names, "y": y.names, "stage": "naturality-Y"}
                        break
                if w:
                    break
            if w:
                break
    checks.append(Check("naturality-in-codomain-small-stages", w is None, w))

    w = None
    from .power import power_map
    from .upsets import lattice_identity

    for x, x2 in itertools.product(catalog, repeat=2):
        if w:
            break
        if x.size > 2 or x2.size > 2:
            continue
        dpx = double_power(x, caps)
        dpx2 = double_power(x2, caps)
        for k in enumerate_monotone(x2, x, caps):
            sk = inverse_image(k, caps)          # S^x -> S^x2
            pk = power_map(k, caps)              # P(x2) -> P(x)
            for y in catalog:
                if y.size > 2:
                    continue
                for delta2 in nat_trans_space(x2, y, caps)[:30]:
                    lhs = dpx.transpose_nat(delta2.compose(sk))
                    rhs = pk.compose(dpx2.transpose_nat(delta2))
                    if lhs != rhs:
                        w = {"x": x.names, "x2": x2.names, "stage": "naturality-X"}
                        break
                if w:
                    break
            if w:
                break
    checks.append(Check("naturality-in-base-small-stages", w is None, w))

    w = None
    for x in catalog:
        dp = double_power(x, caps)
        eta = unit(x, caps)
        if dp.transpose_nat(lattice_identity(upset_lattice(x, caps))) != eta:
            w = {"x": x.names}
            break
    checks.append(Check("unit-is-transpose-of-identity", w is None, w))
    return Certificate("axiom4", tuple(checks), counts)


def axiom5_certificate(
    catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS, reject_budget: int = 700
) -> Certificate:
    """Distributive lattice maps are inverse images, uniquely."""
    checks = []
    w = None
    recovered = 0
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        homs = enumerate_monotone(y, x, caps)
        dlats = enumerate_dlat_homs(x, y, caps)
        if len(homs) != len(dlats):
            w = {"x": x.names, "y": y.names, "homs": len(homs), "dlats": len(dlats)}
            break
        table = {inverse_image(f, caps).assign for f in homs}
        for alpha in dlats:
            if alpha.assign not in table:
                w = {"x": x.names, "y": y.names, "stage": "not-an-inverse-image"}
                break
            f = recover_map(alpha, caps)
            recovered += 1
            if inverse_image(f, caps) != alpha:
                w = {"x": x.names, "y": y.names, "stage": "roundtrip"}
                break
        if w:
            break
        for f in homs:
            if recover_map(inverse_image(f, caps), caps) != f:
                w = {"x": x.names, "y": y.names, "stage": "uniqueness"}
                break
    checks.append(Check("dlat-homs-are-inverse-images", w is None, w))

    w = None
    rejected = 0
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        try:
            nats = nat_trans_space(x, y, caps)
        except SizeCap:
            continue
        if len(nats) > reject_budget:
            continue
        dlat_set = {d.assign for d in enumerate_dlat_homs(x, y, caps)}
        for alpha in nats:
            if alpha.assign in dlat_set:
                continue
            try:
                recover_map(alpha, caps)
                w = {"x": x.names, "y": y.names, "stage": "accepted-non-dlat",
                     "alpha": list(alpha.assign)}
                break
            except NotDLatHom as ex:
                rejected += 1
                law, witness = ex.args[0], ex.args[1]
                if not _dlat_witness_real(alpha, law, witness):
                    w = {"x": x.names, "y": y.names, "stage": "bogus-witness", "law": law}
                    break
    checks.append(Check("non-dlat-homs-rejected-with-witness", w is None, w))
    return Certificate(
        "axiom5", tuple(checks), {"recovered": recovered, "rejected": rejected}
    )


def _dlat_witness_real(alpha, law: str, witness: dict) -> bool:
    lat = alpha.dom
    name_of = {lat.element_name(m): m for m in lat.elements}
    if law == "bottom":
        return alpha(0) != 0
    if law == "top":
        return alpha(lat.top) != alpha.cod.top
    u = name_of[witness["u"]]
    v = name_of[witness["v"]]
    if law == "meet":
        return alpha(u & v) != alpha(u) & alpha(v)
    if law == "join":
        return alpha(u | v) != alpha(u) | alpha(v)
    return False


def axiom6_certificate(catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Inflationary idempotents split; the meet-lemma facts come with."""
    checks = []
    w = None
    total = 0
    for x in catalog:
        if w:
            break
        for psi in enumerate_inflationary_join_idempotents(x, caps):
            total += 1
            result = split_inflationary(psi, caps)
            if not result.certificate.ok:
                bad = result.certificate.first_failure()
                assert bad is not None
                w = {"x": x.names, "psi": list(psi.assign), "check": bad.name}
                break
    checks.append(Check("all-inflationary-join-idempotents-split", w is None, w))
    w = None
    for x in catalog:
        if x.size > 2:
            continue
        if w:
            break
        from .power import split_deflationary

        for psi in enumerate_inflationary_join_idempotents(x.dual(), caps):
            full = x.full_mask
            lat = upset_lattice(x, caps)
            dlat = upset_lattice(x.dual(), caps)
            assign = tuple(full & ~psi(full & ~u) for u in lat.elements)
            from .upsets import LatticeMap

            dual_psi = LatticeMap(lat, lat, assign)
            result = split_deflationary(dual_psi, caps)
            if not result.certificate.ok:
                w = {"x": x.names, "psi": list(dual_psi.assign)}
                break
    checks.append(Check("deflationary-dual-splits", w is None, w))
    return Certificate("axiom6", tuple(checks), {"idempotents": total})


def axiom7_certificate(catalog: Sequence[Poset], caps: Caps = DEFAULT_CAPS) -> Certificate:
    """Inverse images of equalizers are couniversal among lattice maps."""
    checks = []
    w = None
    pairs = 0
    small = [p for p in catalog if p.size <= 2]
    for x, y in itertools.product(catalog, repeat=2):
        if w:
            break
        homs = enumerate_monotone(x, y, caps)
        for i, f in enumerate(homs.maps):
            for g in homs.maps[i:]:
                pairs += 1
                eq = equalizer(f, g)
                literal = small if (x.size <= 2 and y.size <= 2) else ()
                cert = axiom7_check(eq.include, f, g, targets=literal, caps=caps)
                if not cert.ok:
                    bad = cert.first_failure()
                    assert bad is not None
                    w = {"x": x.names, "y": y.names, "f": list(f.assign),
                         "g": list(g.assign), "check": bad.name, **(bad.witness or {})}
                    break
            if w:
                break
    checks.append(Check("all-parallel-pairs", w is None, w))
    return Certificate("axiom7", tuple(checks), {"parallel-pairs": pairs})
