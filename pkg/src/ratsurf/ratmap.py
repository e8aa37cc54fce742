"""Rational maps between products of projective spaces and chart maps on
Hirzebruch surfaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gfarith import FieldTower, embedding
from .polys import Poly, PolyRing, RatFunc, gcd_many
from .projgeom import GeometryError, ProjPoint, all_points

Dims = tuple[int, ...]


class MapError(GeometryError):
    """Invalid map data or a composition that is not defined."""


class NonDominantComposition(MapError):
    """Every coordinate of some target factor vanished after substitution."""


class ChartError(MapError):
    """A chart composition produced an identically zero denominator."""


def _blocks(dims: Dims) -> list[list[int]]:
    out, start = [], 0
    for d in dims:
        out.append(list(range(start, start + d + 1)))
        start += d + 1
    return out


def ambient_ring(field: FieldTower, dims: Sequence[int], names: Sequence[str] | None = None) -> PolyRing:
    """Polynomial ring in the concatenated coordinate blocks of a product ambient."""
    dims = tuple(dims)
    if names is None:
        if dims == (2,):
            names = ["x", "y", "z"]
        elif dims == (1, 1):
            names = ["u0", "u1", "v0", "v1"]
        else:
            names = [f"x{i}_{j}" for i, d in enumerate(dims) for j in range(d + 1)]
    if len(names) != sum(d + 1 for d in dims):
        raise MapError("wrong number of variable names")
    return PolyRing(field, names)


def multidegree(f: Poly, dims: Dims) -> tuple[int, ...]:
    """Degree of a nonzero multihomogeneous polynomial in each block."""
    out = []
    for block in _blocks(dims):
        degs = f.block_degree(block)
        if len(degs) != 1:
            raise MapError(f"{f!r} is not homogeneous in block {block}")
        out.append(degs.pop())
    return tuple(out)


def _clear_factor(coords: Sequence[Poly]) -> tuple[Poly, ...]:
    nonzero = [c for c in coords if not c.is_zero()]
    g = gcd_many(nonzero)
    if not g.is_constant():
        coords = [c.exact_div(g) if not c.is_zero() else c for c in coords]
    lead = next(c for c in coords if not c.is_zero()).leading()[1]
    field = coords[0].field
    inv = field.inv(lead)
    return tuple(c.scale(inv) for c in coords)


class RationalMapRep:
    """Rational map given by one coordinate tuple per target factor.

    Coordinates are cleared of their common factor and scaled so that the
    leading term of the first nonzero coordinate of each factor is 1.
    """

    __slots__ = ("field", "source", "target", "coords")

    def __init__(self, field: FieldTower, source: Sequence[int], target: Sequence[int],
                 coords: Sequence[Sequence[Poly]]):
        self.field = field
        self.source: Dims = tuple(source)
        self.target: Dims = tuple(target)
        nvars = sum(d + 1 for d in self.source)
        if len(coords) != len(self.target):
            raise MapError("one coordinate tuple per target factor expected")
        cleared = []
        for d, factor in zip(self.target, coords):
            factor = list(factor)
            if len(factor) != d + 1:
                raise MapError(f"target factor P^{d} needs {d + 1} coordinates")
            if any(c.field != field or c.nvars != nvars for c in factor):
                raise MapError("coordinate polynomial lives in the wrong ring")
            if all(c.is_zero() for c in factor):
                raise MapError("all coordinates of a target factor are zero")
            degs = {multidegree(c, self.source) for c in factor if not c.is_zero()}
            if len(degs) != 1:
                raise MapError(f"coordinates of a factor have different multidegrees {sorted(degs)}")
            factor = _clear_factor(factor)
            if all(c.is_constant() for c in factor):
                raise MapError("a target factor is constant, the map contracts the source")
            cleared.append(factor)
        self.coords: tuple[tuple[Poly, ...], ...] = tuple(cleared)

    @classmethod
    def identity(cls, field: FieldTower, dims: Sequence[int]) -> "RationalMapRep":
        dims = tuple(dims)
        nvars = sum(d + 1 for d in dims)
        coords = [[Poly.var(field, nvars, i) for i in block] for block in _blocks(dims)]
        return cls(field, dims, dims, coords)

    @property
    def nvars(self) -> int:
        return sum(d + 1 for d in self.source)

    def multidegrees(self) -> list[tuple[int, ...]]:
        return [multidegree(next(c for c in f if not c.is_zero()), self.source) for f in self.coords]

    def scale(self, c: int) -> "RationalMapRep":
        return RationalMapRep(self.field, self.source, self.target,
                              [[p.scale(c) for p in f] for f in self.coords])

    def frobenius(self, times: int = 1) -> "RationalMapRep":
        """Apply Frobenius to all coefficients."""
        return RationalMapRep(self.field, self.source, self.target,
                              [[p.frobenius(times) for p in f] for f in self.coords])

    def is_rational(self, base: int = 1) -> bool:
        """True when the map is defined over the subfield of degree ``base``."""
        return maps_equal(self.frobenius(base), self)

    def change_field(self, field: FieldTower) -> "RationalMapRep":
        """The same map with coefficients embedded in a larger field."""
        table = embedding(self.field, field)
        def move(p: Poly) -> Poly:
            return Poly(field, p.nvars, {e: table[c] for e, c in p.terms.items()})
        return RationalMapRep(field, self.source, self.target,
                              [[move(p) for p in f] for f in self.coords])

    def __call__(self, x: ProjPoint) -> ProjPoint | None:
        return evaluate(self, x)

    def __matmul__(self, other: "RationalMapRep") -> "RationalMapRep":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMapRep) and maps_equal(self, other)

    def __hash__(self) -> int:
        return hash((self.field, self.source, self.target, self.coords))

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = ambient_ring(self.field, self.source).names
        parts = ["[" + " : ".join(p.format(names) for p in f) + "]" for f in self.coords]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"

    def __repr__(self) -> str:
        return f"RationalMapRep({self.format()})"

    def to_json(self) -> dict:
        def poly(p: Poly) -> dict:
            return {
                "multidegree": list(multidegree(p, self.source)) if not p.is_zero() else None,
                "terms": [{"exp": list(e), "coeff": self.field._digits(c)}
                          for e, c in sorted(p.terms.items())],
            }
        return {
            "field": self.field.to_dict(),
            "source": list(self.source),
            "target": list(self.target),
            "coords": [[poly(p) for p in f] for f in self.coords],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalMapRep":
        field = FieldTower.from_dict(data["field"])
        source = tuple(data["source"])
        nvars = sum(d + 1 for d in source)
        coords = []
        for f in data["coords"]:
            coords.append([Poly(field, nvars, {tuple(t["exp"]): field._from_digits(t["coeff"])
                                               for t in p["terms"]}) for p in f])
        return cls(field, source, data["target"], coords)


def evaluate(f: RationalMapRep, x: ProjPoint) -> ProjPoint | None:
    """Image of ``x``, or None when every coordinate of some target factor vanishes."""
    if x.dims != f.source:
        raise MapError(f"point in ambient {x.dims}, map source {f.source}")
    if x.field != f.field:
        raise MapError("point and map over different fields")
    values = [c for block in x.coords for c in block]
    image = []
    for factor in f.coords:
        vals = tuple(p.evaluate(values) for p in factor)
        if not any(vals):
            return None
        image.append(vals)
    return ProjPoint.from_codes(f.field, image)


def compose(f: RationalMapRep, g: RationalMapRep) -> RationalMapRep:
    """The map f∘g with common factors removed from each target factor."""
    if g.target != f.source:
        raise MapError(f"cannot compose: target {g.target} vs source {f.source}")
    if f.field != g.field:
        raise MapError("maps over different fields")
    images = [p for factor in g.coords for p in factor]
    coords = [[p.substitute(images) for p in factor] for factor in f.coords]
    if any(all(p.is_zero() for p in factor) for factor in coords):
        raise NonDominantComposition("g maps into the base locus of f")
    return RationalMapRep(f.field, g.source, f.target, coords)


def compose_all(maps: Sequence[RationalMapRep]) -> RationalMapRep:
    """maps[0] ∘ maps[1] ∘ ... ∘ maps[-1]."""
    if not maps:
        raise MapError("empty composition needs an explicit identity")
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def maps_equal(f: RationalMapRep, g: RationalMapRep, modulo: Poly | None = None) -> bool:
    """Equality as rational maps: coordinates proportional in every factor.

    With ``modulo`` (an irreducible polynomial in the source coordinates) the
    maps are compared as maps on that hypersurface: every cross product must
    be divisible by it.
    """
    if f.source != g.source or f.target != g.target or f.field != g.field:
        return False

    def vanishes(h: Poly) -> bool:
        if h.is_zero():
            return True
        return modulo is not None and h.exact_div(modulo) is not None

    for a, b in zip(f.coords, g.coords):
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if not vanishes(a[i] * b[j] - a[j] * b[i]):
                    return False
        if modulo is not None:
            continue
        # a pair vanishing on both sides passes cross-multiplication; rule it
        # out so that [x:0] and [0:x] differ
        if any(a[i].is_zero() != b[i].is_zero() for i in range(len(a))):
            return False
    return True


def base_points(f: RationalMapRep, search: FieldTower, bound: int | None = 4096 ** 2) -> list[ProjPoint]:
    """Points of the source over ``search`` where the map is not defined."""
    g = f if search == f.field else f.change_field(search)
    return [x for x in all_points(search, g.source, bound) if evaluate(g, x) is None]


def is_involution(f: RationalMapRep) -> bool:
    return f.source == f.target and maps_equal(compose(f, f), RationalMapRep.identity(f.field, f.source))


@dataclass(frozen=True)
class ChartMap:
    """Map F_n ⇢ F_m in the affine chart with coordinates (y, z).

    ``first`` is a rational function in (y, z) and ``second`` one in z only.
    """

    first: RatFunc
    second: RatFunc

    def __post_init__(self):
        if self.second.variables() - {1}:
            raise MapError("second chart coordinate must depend on z only")
        if self.first.num.nvars != 2 or self.second.num.nvars != 2:
            raise MapError("chart maps live in two variables (y, z)")

    @classmethod
    def identity(cls, field: FieldTower) -> "ChartMap":
        return cls(RatFunc(Poly.var(field, 2, 0)), RatFunc(Poly.var(field, 2, 1)))

    @property
    def field(self) -> FieldTower:
        return self.first.num.field

    def compose(self, other: "ChartMap") -> "ChartMap":
        """self ∘ other."""
        images = [other.first, other.second]
        try:
            return ChartMap(self.first.substitute(images), self.second.substitute(images))
        except ZeroDivisionError as exc:
            raise ChartError("identically zero denominator in chart composition") from exc

    def __matmul__(self, other: "ChartMap") -> "ChartMap":
        return self.compose(other)

    def format(self) -> str:
        names = ["y", "z"]
        return f"({self.first.format(names)}, {self.second.format(names)})"

    def __repr__(self) -> str:
        return f"ChartMap{self.format()}"


def chart_compose(fs: Sequence[ChartMap], field: FieldTower | None = None) -> ChartMap:
    """fs[0] ∘ fs[1] ∘ ... ∘ fs[-1]; the empty chain is the identity."""
    if not fs:
        if field is None:
            raise MapError("the empty chain needs a field")
        return ChartMap.identity(field)
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = f.compose(out)
    return out
