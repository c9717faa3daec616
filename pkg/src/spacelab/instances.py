"""Instance documents: named posets, maps, monoids/groups and actions.

One JSON document defines everything by total tables (posets by elements
plus covering pairs, algebras by full multiplication/action tables), which
keeps validation trivial and error locations precise.  Counterexample
fragments emitted in reports use the same shape, so they re-parse and
replay directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .actions import ActedPoset, GroupObject, MonoidObject, make_acted, make_group, make_monoid
from .errors import (
    AxiomFailure,
    CycleDetected,
    DuplicateName,
    InstanceSyntaxError,
    LawViolation,
    NotMonotone,
    SpacelabError,
    UnresolvedReference,
)
from .posets import MonotoneMap, Poset, make_poset

SUITE_NAMES = ("axioms", "stability", "sigma", "open", "triq", "monad-laws", "all")


@dataclass(frozen=True)
class InstanceFile:
    posets: dict[str, Poset] = field(default_factory=dict)
    maps: dict[str, MonotoneMap] = field(default_factory=dict)
    groups: dict[str, GroupObject] = field(default_factory=dict)
    monoids: dict[str, MonoidObject] = field(default_factory=dict)
    actions: dict[str, ActedPoset] = field(default_factory=dict)
    suites: tuple[str, ...] = ()


def parse_instance(source: str | Path | Mapping[str, Any]) -> InstanceFile:
    """Load and validate an instance document.

    Raises InstanceSyntaxError for malformed documents, UnresolvedReference
    for dangling names, and LawViolation (with the location and the
    offending pair) when a defined object fails its laws.
    """
    if isinstance(source, Mapping):
        doc: Any = dict(source)
    else:
        text = Path(source).read_text() if _looks_like_path(source) else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as ex:
            raise InstanceSyntaxError(f"invalid JSON: {ex}") from ex
    if not isinstance(doc, dict):
        raise InstanceSyntaxError("top level must be an object")
    known = {"posets", "maps", "groups", "monoids", "actions", "suites", "witness", "note", "replay"}
    for key in doc:
        if key not in known:
            raise InstanceSyntaxError(f"unknown section {key!r}")

    posets: dict[str, Poset] = {}
    for name, spec in _section(doc, "posets").items():
        elements = spec.get("elements")
        covers = spec.get("covers", [])
        if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
            raise InstanceSyntaxError(f"posets.{name}: elements must be a list of strings")
        try:
            posets[name] = make_poset(elements, [tuple(c) for c in covers])
        except (CycleDetected, DuplicateName, KeyError) as ex:
            raise LawViolation(f"posets.{name}: {ex}") from ex

    maps: dict[str, MonotoneMap] = {}
    for name, spec in _section(doc, "maps").items():
        dom = _resolve(posets, spec.get("dom"), f"maps.{name}.dom")
        cod = _resolve(posets, spec.get("cod"), f"maps.{name}.cod")
        table = spec.get("assign")
        if not isinstance(table, dict):
            raise InstanceSyntaxError(f"maps.{name}: assign must be an object")
        try:
            assign = tuple(cod.index(table[e]) for e in dom.names)
        except KeyError as ex:
            raise UnresolvedReference(f"maps.{name}: {ex}") from ex
        try:
            maps[name] = MonotoneMap(dom, cod, assign)
        except NotMonotone as ex:
            raise LawViolation(
                f"maps.{name}: not monotone on pair {ex.args[1] if len(ex.args) > 1 else ''}"
            ) from ex

    groups: dict[str, GroupObject] = {}
    for name, spec in _section(doc, "groups").items():
        table = spec.get("table")
        if not isinstance(table, dict):
            raise InstanceSyntaxError(f"groups.{name}: table must be an object")
        try:
            groups[name] = make_group(table)
        except (AxiomFailure, NotMonotone, KeyError) as ex:
            raise LawViolation(f"groups.{name}: {ex}") from ex

    monoids: dict[str, MonoidObject] = {}
    for name, spec in _section(doc, "monoids").items():
        carrier_ref = spec.get("carrier")
        if isinstance(carrier_ref, str):
            carrier = _resolve(posets, carrier_ref, f"monoids.{name}.carrier")
        elif isinstance(carrier_ref, list):
            carrier = make_poset(carrier_ref)
        else:
            raise InstanceSyntaxError(f"monoids.{name}: carrier must be a name or element list")
        table = spec.get("table")
        unit = spec.get("unit")
        if not isinstance(table, dict) or not isinstance(unit, str):
            raise InstanceSyntaxError(f"monoids.{name}: need a table object and a unit name")
        try:
            monoids[name] = make_monoid(carrier, table, unit)
        except (AxiomFailure, NotMonotone, KeyError) as ex:
            raise LawViolation(f"monoids.{name}: {ex}") from ex

    actions: dict[str, ActedPoset] = {}
    for name, spec in _section(doc, "actions").items():
        if "group" in spec:
            acting: MonoidObject = _resolve(groups, spec["group"], f"actions.{name}.group")
        elif "monoid" in spec:
            acting = _resolve(monoids, spec["monoid"], f"actions.{name}.monoid")
        else:
            raise InstanceSyntaxError(f"actions.{name}: need a group or monoid reference")
        poset = _resolve(posets, spec.get("poset"), f"actions.{name}.poset")
        table = spec.get("table")
        if not isinstance(table, dict):
            raise InstanceSyntaxError(f"actions.{name}: table must be an object")
        try:
            actions[name] = make_acted(acting, poset, table)
        except (AxiomFailure, NotMonotone, KeyError) as ex:
            raise LawViolation(f"actions.{name}: {ex}") from ex

    suites_doc = doc.get("suites", [])
    if not isinstance(suites_doc, list) or not all(isinstance(s, str) for s in suites_doc):
        raise InstanceSyntaxError("suites must be a list of suite names")
    for s in suites_doc:
        if s not in SUITE_NAMES:
            raise UnresolvedReference(f"unknown suite {s!r}")
    return InstanceFile(posets, maps, groups, monoids, actions, tuple(suites_doc))


def _looks_like_path(source: str | Path) -> bool:
    if isinstance(source, Path):
        return True
    s = str(source).lstrip()
    return not s.startswith("{")


def _section(doc: dict, key: str) -> dict[str, dict]:
    sec = doc.get(key, {})
    if not isinstance(sec, dict):
        raise InstanceSyntaxError(f"section {key!r} must be an object")
    for name, spec in sec.items():
        if not isinstance(spec, dict):
            raise InstanceSyntaxError(f"{key}.{name} must be an object")
    return sec


def _resolve(table: Mapping[str, Any], name: Any, where: str):
    if not isinstance(name, str):
        raise InstanceSyntaxError(f"{where}: expected a name")
    if name not in table:
        raise UnresolvedReference(f"{where}: {name!r} is not defined")
    return table[name]


# ---------------------------------------------------------------------------
# Witness fragments (instance-shaped dictionaries)
# ---------------------------------------------------------------------------


def poset_fragment(p: Poset, name: str = "X") -> dict:
    covers = [[p.names[i], p.names[j]] for i, j in p.covers]
    return {name: {"elements": list(p.names), "covers": covers}}


def map_fragment(f: MonotoneMap, name: str = "f", dom: str = "X", cod: str = "Y") -> dict:
    return {
        name: {
            "dom": dom,
            "cod": cod,
            "assign": {f.dom.names[i]: f.cod.names[v] for i, v in enumerate(f.assign)},
        }
    }


def acted_fragment(acted: ActedPoset, name: str = "probe") -> dict:
    """A full instance document reproducing one action."""
    acting = acted.acting
    frag: dict[str, Any] = {"posets": poset_fragment(acted.carrier, "X")}
    if isinstance(acting, GroupObject):
        frag["groups"] = {"M": {"table": acting.table_json()}}
        act_ref = {"group": "M"}
    else:
        frag["posets"].update(poset_fragment(acting.carrier, "Mcarrier"))
        frag["monoids"] = {
            "M": {
                "carrier": "Mcarrier",
                "table": acting.table_json(),
                "unit": acting.carrier.names[acting.unit],
            }
        }
        act_ref = {"monoid": "M"}
    frag["actions"] = {name: {**act_ref, "poset": "X", "table": acted.table_json()}}
    return frag


def instance_dual(inst: InstanceFile) -> InstanceFile:
    """Order-reverse every poset (and carrier) in the document."""
    posets = {k: p.dual() for k, p in inst.posets.items()}
    maps = {
        k: MonotoneMap(f.dom.dual(), f.cod.dual(), f.assign) for k, f in inst.maps.items()
    }
    groups = inst.groups  # discrete carriers are self-dual
    monoids = {
        k: MonoidObject(
            m.carrier.dual(),
            MonotoneMap(m.mult.dom.dual(), m.carrier.dual(), m.mult.assign),
            m.unit,
        )
        for k, m in inst.monoids.items()
    }
    actions = {}
    for k, a in inst.actions.items():
        acting: MonoidObject
        if isinstance(a.acting, GroupObject):
            acting = a.acting
        else:
            acting = MonoidObject(
                a.acting.carrier.dual(),
                MonotoneMap(a.acting.mult.dom.dual(), a.acting.carrier.dual(), a.acting.mult.assign),
                a.acting.unit,
            )
        actions[k] = ActedPoset(
            acting,
            a.carrier.dual(),
            MonotoneMap(a.action.dom.dual(), a.carrier.dual(), a.action.assign),
        )
    return InstanceFile(posets, maps, groups, monoids, actions, inst.suites)
