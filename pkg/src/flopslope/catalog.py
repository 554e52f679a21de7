"""Bundled surface catalog.

Minimal models (P2, the Hirzebruch surfaces F0..F3) are hardcoded lattice
data; blow-up configurations are built from JSON entry files that use the
same surface description schema as CLI job files.  The Mori generator lists
are catalog data: for blow-ups of P2 at up to five distinct points on a
named curve (no three collinear) the list is exceptional curves plus proper
transforms of lines through point subsets and of the conic through all
points, which contains every extremal ray of those surfaces.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .mpoly import parse_fraction
from .surface import (
    BlowupPoint,
    BlowupResult,
    DivisorClass,
    PicardLattice,
    SurfacePair,
    blow_up,
    proper_transform,
)


class CatalogError(KeyError):
    pass


def _fr(x) -> Fraction:
    if isinstance(x, str):
        return parse_fraction(x)
    return Fraction(x)


def p2() -> SurfacePair:
    lattice = PicardLattice(("H",), ((Fraction(1),),), (Fraction(-3),))
    h = lattice.generator("H")
    return SurfacePair(lattice, 3 * h, (h,), minimal_model="P2")


def hirzebruch(n: int) -> SurfacePair:
    """F_n with basis (E, F): E^2 = -n, E.F = 1, F^2 = 0, K = -2E-(n+2)F."""
    lattice = PicardLattice(
        ("E", "F"),
        ((Fraction(-n), Fraction(1)), (Fraction(1), Fraction(0))),
        (Fraction(-2), Fraction(-(n + 2))),
    )
    e = lattice.generator("E")
    f = lattice.generator("F")
    boundary = -lattice.canonical_class
    return SurfacePair(lattice, boundary, (e, f), minimal_model=f"F{n}",
                       generator_floor=min(-2, -n))


_MINIMAL_MODELS = {
    "P2": p2,
    "F0": lambda: hirzebruch(0),
    "F1": lambda: hirzebruch(1),
    "F2": lambda: hirzebruch(2),
    "F3": lambda: hirzebruch(3),
}

_NAMED_CURVES = {
    "P2": {
        "line": (1,),
        "conic": (2,),
        "cubic": (3,),
        "quartic": (4,),
        "anticanonical": (3,),
    },
    "F0": {
        "diagonal": (1, 1),
        "fiber": (0, 1),
        "section": (1, 0),
        "anticanonical": (2, 2),
    },
    "F1": {
        "e_plus_f": (1, 1),
        "fiber": (0, 1),
        "negative_section": (1, 0),
        "anticanonical": (2, 3),
    },
    "F2": {
        "fiber": (0, 1),
        "negative_section": (1, 0),
        "anticanonical": (2, 4),
    },
    "F3": {
        "fiber": (0, 1),
        "negative_section": (1, 0),
        "anticanonical": (2, 5),
    },
}


def named_curve(pair: SurfacePair, name: str) -> DivisorClass:
    table = _NAMED_CURVES.get(pair.minimal_model, {})
    if name not in table:
        raise CatalogError(f"no curve named {name!r} on {pair.minimal_model}")
    return pair.lattice.divisor(table[name])


def resolve_class(pair: SurfacePair, spec) -> DivisorClass:
    """A curve spec is {"name": ...} or {"class": [coeff strings]}."""
    if isinstance(spec, dict) and "name" in spec:
        return named_curve(pair, spec["name"])
    if isinstance(spec, dict) and "class" in spec:
        return pair.lattice.divisor([_fr(x) for x in spec["class"]])
    raise CatalogError(f"cannot resolve curve spec {spec!r}")


def _p2_blowup_extras(r: int) -> list[list[Fraction]]:
    """Effective classes completing the generator list for Bl_r P2 with the
    centers on a named curve, no three collinear (r <= 5)."""
    if r > 5:
        raise CatalogError("catalog blow-ups of P2 support at most 5 points")
    extras = []
    width = 1 + r

    def vec(h, es):
        v = [Fraction(0)] * width
        v[0] = Fraction(h)
        for i in es:
            v[1 + i] = Fraction(-1)
        return v

    for i in range(r):
        extras.append(vec(1, [i]))
    for i in range(r):
        for j in range(i + 1, r):
            extras.append(vec(1, [i, j]))
    if r >= 3:
        extras.append(vec(2, range(r)))
    return extras


@dataclass(frozen=True)
class BuiltSurface:
    pair: SurfacePair
    blowup: BlowupResult | None
    z: DivisorClass | None
    z_is_boundary: bool


def build_surface(spec: dict) -> BuiltSurface:
    """Construct a surface pair (and the tracked slope-test curve) from the
    JSON surface description shared by catalog entries and job files."""
    model = spec.get("minimal_model")
    if model not in _MINIMAL_MODELS:
        raise CatalogError(f"unknown minimal model {model!r}")
    base = _MINIMAL_MODELS[model]()
    if "boundary" in spec:
        base = base.with_boundary(resolve_class(base, spec["boundary"]))

    z_spec = spec.get("z")
    z_is_boundary = z_spec == "boundary"
    z0 = None
    if z_spec is not None:
        z0 = base.boundary if z_is_boundary else resolve_class(base, z_spec)

    points = []
    for p in spec.get("blowups", ()):
        on_boundary = bool(p.get("on_boundary", False))
        on_z = bool(p.get("on_Z", False))
        if z_is_boundary and on_boundary != on_z:
            raise CatalogError("Z is the boundary: on_boundary and on_Z flags must agree")
        points.append(BlowupPoint(on_boundary=on_boundary, on_z=on_z,
                                  tangent_dir_equals_z=bool(p.get("tangent_dir_equals_Z", False)),
                                  label=p.get("label", "")))
    if not points:
        pair = base
        if "mori_generators" in spec:
            gens = tuple(base.lattice.divisor([_fr(x) for x in v])
                         for v in spec["mori_generators"])
            pair = SurfacePair(base.lattice, base.boundary, gens,
                               minimal_model=base.minimal_model,
                               generator_floor=base.generator_floor)
        return BuiltSurface(pair, None, z0, z_is_boundary)

    r = len(points)
    if model == "P2":
        extras = _p2_blowup_extras(r)
    else:
        extras = []
    result = blow_up(base, points, extra_generators=extras)
    pair = result.pair
    if "mori_generators" in spec:
        gens = tuple(pair.lattice.divisor([_fr(x) for x in v])
                     for v in spec["mori_generators"])
        pair = SurfacePair(pair.lattice, pair.boundary, gens,
                           minimal_model=pair.minimal_model,
                           provenance=pair.provenance,
                           generator_floor=pair.generator_floor)
        result = BlowupResult(pair, result.pullback, result.exceptionals)
    z = None
    if z0 is not None:
        z = proper_transform(result, z0, [1 if p.on_z else 0 for p in points])
    return BuiltSurface(pair, result, z, z_is_boundary)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    surface_spec: dict

    def build(self) -> BuiltSurface:
        built = build_surface(self.surface_spec)
        pair = SurfacePair(built.pair.lattice, built.pair.boundary,
                           built.pair.mori_generators,
                           minimal_model=built.pair.minimal_model,
                           provenance=built.pair.provenance,
                           name=self.name,
                           generator_floor=built.pair.generator_floor)
        blowup = built.blowup
        if blowup is not None:
            blowup = BlowupResult(pair, blowup.pullback, blowup.exceptionals)
        return BuiltSurface(pair, blowup, built.z, built.z_is_boundary)


def catalog_dir() -> Path:
    override = os.environ.get("FLOPSLOPE_CATALOG")
    if override:
        return Path(override)
    return Path(resources.files("flopslope") / "data" / "catalog")


def load_entries() -> dict[str, CatalogEntry]:
    out = {}
    directory = catalog_dir()
    for path in sorted(directory.glob("*.json")):
        doc = json.loads(path.read_text())
        entry = CatalogEntry(doc["name"], doc.get("description", ""), doc["surface"])
        out[entry.name] = entry
    return out


def get_entry(name: str) -> CatalogEntry:
    entries = load_entries()
    if name not in entries:
        raise CatalogError(f"no catalog entry named {name!r}")
    return entries[name]
