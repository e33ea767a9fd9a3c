"""JSON documents for spaces, groupoids, actions, elements, and cocycles.

Document shapes (exact key names):

- space:    {"points": [...], "min_nbhd": {"x": ["x", "a"], ...}}
- groupoid: {"units": <space>, "arrows": [{"id","r","s"}, ...], "inv": {...},
             "comp": [["g","h","gh"], ...], "arrow_min_nbhd": {...},
             "haar": {"g": 1 or "p/q", ...}}          (haar optional: counting)
- action:   {"space": <space>, "generators": [{"name","dom":[...],
             "map": {"x":"y", ...}}, ...]}
- element:  {"groupoid": "<name>", "coeffs": {"arrow": [re_num, re_den,
             im_num, im_den], ...}}
- cocycle:  {"groupoid": "<name>", "values": [["g","h",[re_num, re_den,
             im_num, im_den]], ...]}                   (composable pairs only)

Loading validates structure first (SchemaError carrying the JSON path of the
offending node) and then delegates semantic validation to the constructors;
construction failures surface as SchemaError too, with the same path context.
Unit arrows are not stored: on load they are recovered as the idempotents of
the composition table (in a groupoid, g∘g = g forces g to be a unit).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import GpdError, SchemaError
from .finitetop import FiniteSpace, make_space
from .germs import PartialHomeo, make_partial_homeo
from .groupoid import Groupoid, HaarSystem, make_groupoid, make_haar
from .algebra import AlgebraElement, Cocycle, make_cocycle, make_element
from .qlin import QC

__all__ = [
    "space_doc",
    "load_space",
    "groupoid_doc",
    "load_groupoid",
    "load_action",
    "element_doc",
    "load_element",
    "cocycle_doc",
    "load_cocycle",
]


def _fail(path: str, message: str):
    raise SchemaError(message, path)


def _need(doc: Mapping, key: str, path: str):
    if not isinstance(doc, Mapping):
        _fail(path, f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        _fail(path, f"missing required key {key!r}")
    return doc[key]


def _str_list(val, path: str) -> list[str]:
    if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
        _fail(path, "expected a list of strings")
    return val


def _str_map(val, path: str) -> dict:
    if not isinstance(val, Mapping) or not all(isinstance(k, str) for k in val):
        _fail(path, "expected an object with string keys")
    return dict(val)


# -------------------------------------------------------------------- numbers


def _quad_to_qc(val, path: str) -> QC:
    if (
        not isinstance(val, list)
        or len(val) != 4
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in val)
    ):
        _fail(path, "expected [re_num, re_den, im_num, im_den] with integer entries")
    if val[1] == 0 or val[3] == 0:
        _fail(path, "zero denominator")
    return QC(Fraction(val[0], val[1]), Fraction(val[2], val[3]))


def _weight_to_fraction(val, path: str) -> Fraction:
    if isinstance(val, bool):
        _fail(path, "weight must be an integer or a 'p/q' string")
    if isinstance(val, int):
        return Fraction(val)
    if isinstance(val, str):
        try:
            return Fraction(val)
        except (ValueError, ZeroDivisionError):
            _fail(path, f"not a valid rational: {val!r}")
    _fail(path, "weight must be an integer or a 'p/q' string")


def _fraction_to_weight(val: Fraction):
    return int(val) if val.denominator == 1 else f"{val.numerator}/{val.denominator}"


# --------------------------------------------------------------------- spaces


def space_doc(space: FiniteSpace) -> dict:
    return {
        "points": sorted(space.points),
        "min_nbhd": {p: sorted(space.min_nbhd[p]) for p in sorted(space.points)},
    }


def load_space(doc, path: str = "$") -> FiniteSpace:
    points = _str_list(_need(doc, "points", path), f"{path}.points")
    nbhd_doc = _str_map(_need(doc, "min_nbhd", path), f"{path}.min_nbhd")
    nbhd = {
        k: _str_list(v, f"{path}.min_nbhd.{k}") for k, v in nbhd_doc.items()
    }
    try:
        return make_space(points, nbhd)
    except GpdError as exc:
        _fail(path, f"invalid space: {exc}")


# ------------------------------------------------------------------ groupoids


def groupoid_doc(g: Groupoid, haar: HaarSystem | None = None) -> dict:
    arrows = sorted(g.arrows)
    doc = {
        "name": g.name,
        "units": space_doc(g.units),
        "arrows": [{"id": a, "r": g.r[a], "s": g.s[a]} for a in arrows],
        "inv": {a: g.inv[a] for a in arrows},
        "comp": sorted([a, b, c] for (a, b), c in g.comp.items()),
        "arrow_min_nbhd": {a: sorted(g.topo.min_nbhd[a]) for a in arrows},
    }
    if haar is not None and any(haar.weight[a] != 1 for a in g.arrows):
        doc["haar"] = {a: _fraction_to_weight(Fraction(haar.weight[a])) for a in arrows}
    return doc


def load_groupoid(doc, path: str = "$") -> tuple[Groupoid, HaarSystem]:
    units = load_space(_need(doc, "units", path), f"{path}.units")
    arrows_doc = _need(doc, "arrows", path)
    if not isinstance(arrows_doc, list):
        _fail(f"{path}.arrows", "expected a list")
    arrows, r, s = [], {}, {}
    for i, entry in enumerate(arrows_doc):
        apath = f"{path}.arrows[{i}]"
        aid = _need(entry, "id", apath)
        if not isinstance(aid, str) or not aid:
            _fail(f"{apath}.id", "expected a non-empty string")
        if aid in r:
            _fail(f"{apath}.id", f"duplicate arrow id {aid!r}")
        arrows.append(aid)
        r[aid] = _need(entry, "r", apath)
        s[aid] = _need(entry, "s", apath)
    inv = _str_map(_need(doc, "inv", path), f"{path}.inv")
    comp_doc = _need(doc, "comp", path)
    if not isinstance(comp_doc, list):
        _fail(f"{path}.comp", "expected a list of [g, h, gh] triples")
    comp = {}
    for i, triple in enumerate(comp_doc):
        cpath = f"{path}.comp[{i}]"
        if (
            not isinstance(triple, list)
            or len(triple) != 3
            or not all(isinstance(v, str) for v in triple)
        ):
            _fail(cpath, "expected a [g, h, gh] triple of arrow ids")
        key = (triple[0], triple[1])
        if key in comp and comp[key] != triple[2]:
            _fail(cpath, f"conflicting composition for {key}")
        comp[key] = triple[2]
    nbhd_doc = _str_map(_need(doc, "arrow_min_nbhd", path), f"{path}.arrow_min_nbhd")
    nbhd = {
        k: _str_list(v, f"{path}.arrow_min_nbhd.{k}") for k, v in nbhd_doc.items()
    }

    # Units are the idempotents of the composition table.
    unit_arrow = {}
    for a in arrows:
        if comp.get((a, a)) == a:
            if r[a] != s[a]:
                _fail(f"{path}.comp", f"idempotent arrow {a!r} has r != s")
            if r[a] in unit_arrow:
                _fail(f"{path}.comp", f"two idempotent arrows at point {r[a]!r}")
            unit_arrow[r[a]] = a
    missing = sorted(set(units.points) - set(unit_arrow))
    if missing:
        _fail(f"{path}.comp", f"no idempotent (unit) arrow at points {missing}")

    name = doc.get("name", "") if isinstance(doc, Mapping) else ""
    if not isinstance(name, str):
        _fail(f"{path}.name", "expected a string")
    try:
        g = make_groupoid(
            units=units,
            arrows=arrows,
            r=r,
            s=s,
            inv=inv,
            comp=comp,
            arrow_min_nbhd=nbhd,
            unit_arrow=unit_arrow,
            name=name,
        )
    except GpdError as exc:
        _fail(path, f"invalid groupoid: {exc}")

    if "haar" in doc:
        haar_doc = _str_map(doc["haar"], f"{path}.haar")
        extra = sorted(set(haar_doc) - set(arrows))
        if extra:
            _fail(f"{path}.haar", f"weights for unknown arrows {extra}")
        weights = {
            a: _weight_to_fraction(haar_doc.get(a, 1), f"{path}.haar.{a}")
            for a in arrows
        }
        try:
            haar = make_haar(g, weights)
        except GpdError as exc:
            _fail(f"{path}.haar", f"invalid weights: {exc}")
    else:
        haar = HaarSystem.counting(g)
    return g, haar


# -------------------------------------------------------------------- actions


def load_action(doc, path: str = "$") -> tuple[FiniteSpace, list[PartialHomeo]]:
    space = load_space(_need(doc, "space", path), f"{path}.space")
    gens_doc = _need(doc, "generators", path)
    if not isinstance(gens_doc, list) or not gens_doc:
        _fail(f"{path}.generators", "expected a non-empty list")
    gens = []
    seen = set()
    for i, entry in enumerate(gens_doc):
        gpath = f"{path}.generators[{i}]"
        gname = _need(entry, "name", gpath)
        if not isinstance(gname, str) or not gname:
            _fail(f"{gpath}.name", "expected a non-empty string")
        if gname in seen:
            _fail(f"{gpath}.name", f"duplicate generator name {gname!r}")
        seen.add(gname)
        dom = _str_list(_need(entry, "dom", gpath), f"{gpath}.dom")
        mapping = _str_map(_need(entry, "map", gpath), f"{gpath}.map")
        try:
            gens.append(make_partial_homeo(space, dom, mapping, gname))
        except GpdError as exc:
            _fail(gpath, f"invalid generator: {exc}")
    return space, gens


# ------------------------------------------------------------------- elements


def element_doc(f: AlgebraElement) -> dict:
    return {
        "groupoid": f.groupoid.name,
        "coeffs": {a: f.coeffs[a].as_quad() for a in sorted(f.coeffs)},
    }


def load_element(doc, g: Groupoid, path: str = "$") -> AlgebraElement:
    label = _need(doc, "groupoid", path)
    if not isinstance(label, str):
        _fail(f"{path}.groupoid", "expected a string")
    if label and g.name and label != g.name:
        _fail(f"{path}.groupoid", f"element belongs to {label!r}, not {g.name!r}")
    coeffs_doc = _str_map(_need(doc, "coeffs", path), f"{path}.coeffs")
    coeffs = {
        a: _quad_to_qc(v, f"{path}.coeffs.{a}") for a, v in coeffs_doc.items()
    }
    try:
        return make_element(g, coeffs)
    except GpdError as exc:
        _fail(f"{path}.coeffs", f"invalid element: {exc}")


# ------------------------------------------------------------------- cocycles


def cocycle_doc(c: Cocycle) -> dict:
    return {
        "groupoid": c.groupoid.name,
        "values": sorted(
            [a, b, c.sigma[(a, b)].as_quad()] for (a, b) in c.sigma
        ),
    }


def load_cocycle(doc, g: Groupoid, path: str = "$") -> Cocycle:
    label = _need(doc, "groupoid", path)
    if isinstance(label, str) and label and g.name and label != g.name:
        _fail(f"{path}.groupoid", f"cocycle belongs to {label!r}, not {g.name!r}")
    values_doc = _need(doc, "values", path)
    if not isinstance(values_doc, list):
        _fail(f"{path}.values", "expected a list of [g, h, quad] triples")
    table = {}
    for i, triple in enumerate(values_doc):
        vpath = f"{path}.values[{i}]"
        if not isinstance(triple, list) or len(triple) != 3:
            _fail(vpath, "expected a [g, h, quad] triple")
        a, b, quad = triple
        if not isinstance(a, str) or not isinstance(b, str):
            _fail(vpath, "arrow ids must be strings")
        table[(a, b)] = _quad_to_qc(quad, f"{vpath}[2]")
    try:
        return make_cocycle(g, table)
    except GpdError as exc:
        _fail(f"{path}.values", f"invalid cocycle: {exc}")
