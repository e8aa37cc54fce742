"""Surface models over finite fields and the hexagon of a degree 6 del Pezzo
surface.

A model knows its base field k, an ambient product of projective spaces, how
to list its geometric points over an extension, and the q-Frobenius of k
(possibly twisted) acting on those points. Rational points over the degree m
extension of k are the points fixed by the m-th power of that Frobenius.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm
from typing import Sequence

from .gfarith import FieldElement, FieldTower, QuadraticData, embedding, make_field, quadratic_generator
from .polys import Poly
from .projgeom import (
    ClosedPoint,
    DegenerateConfiguration,
    GeometryError,
    NotGaloisStable,
    NotTransitive,
    PglMatrix,
    ProjPoint,
    all_points,
    collinear,
    galois_orbit,
    in_general_position,
    pgl_transport,
)
from .ratmap import RationalMapRep, ambient_ring

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# field helpers


def extension(k: FieldTower, m: int) -> FieldTower:
    """The degree m extension of k as an absolute tower."""
    return make_field(k.p, k.n * m)


def lift_point(x: ProjPoint, E: FieldTower) -> ProjPoint:
    """The same point with coordinates embedded in E."""
    if x.field == E:
        return x
    table = embedding(x.field, E)
    return ProjPoint(tuple(tuple(table[c] for c in f) for f in x.coords), E)


def lift_code(k: FieldTower, E: FieldTower, c: int) -> int:
    return embedding(k, E)[c]


# ---------------------------------------------------------------------------
# the dihedral group of the hexagon
#
# Sides are numbered 0..5 around the cycle. The rotation r_k sends side i to
# i + k and the reflection s_k sends side i to k - i (mod 6). s_k fixes two
# sides when k is even and none when k is odd.


def rotation(k: int) -> Perm:
    return tuple((i + k) % 6 for i in range(6))


def reflection(k: int) -> Perm:
    return tuple((k - i) % 6 for i in range(6))


D6: tuple[Perm, ...] = tuple(rotation(k) for k in range(6)) + tuple(reflection(k) for k in range(6))
IDENTITY: Perm = rotation(0)


def perm_mul(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return tuple(a[b[i]] for i in range(len(b)))


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def d6_name(g: Perm) -> str:
    for k in range(6):
        if g == rotation(k):
            return "id" if k == 0 else f"r^{k}"
        if g == reflection(k):
            return f"s{k}"
    raise GeometryError(f"{g} is not a symmetry of the hexagon")


def d6_element(name: str) -> Perm:
    if name == "id":
        return IDENTITY
    if name.startswith("r^"):
        return rotation(int(name[2:]))
    if name.startswith("s"):
        return reflection(int(name[1:]))
    raise GeometryError(f"unknown hexagon symmetry {name!r}")


def preserves_hexagon(g: Sequence[int]) -> bool:
    """True when g maps adjacent sides of the 6-cycle to adjacent sides."""
    return sorted(g) == list(range(6)) and all((g[(i + 1) % 6] - g[i]) % 6 in (1, 5) for i in range(6))


def closure(gens: Sequence[Perm]) -> frozenset[Perm]:
    group = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                e = perm_mul(g, h)
                if e not in group:
                    group.add(e)
                    nxt.append(e)
        frontier = nxt
    return frozenset(group)


def _fixed_sides(g: Perm) -> int:
    return sum(1 for i in range(6) if g[i] == i)


def classify_subgroup(gens: Sequence[Perm]) -> int:
    """Type 1..9 of the subgroup of D6 generated by ``gens``.

    Subgroups are identified up to conjugacy: 1 trivial, 2 a reflection
    fixing no side, 3 a reflection fixing two sides, 4 the half turn, 5 a
    Klein four group, 6 rotations of order 3, 7 all rotations, 8 the S3 whose
    reflections fix sides, 9 the whole group.
    """
    for g in gens:
        if g not in D6:
            raise GeometryError(f"{g} is not a symmetry of the hexagon")
    group = closure(gens)
    order = len(group)
    if order == 1:
        return 1
    if order == 2:
        (g,) = group - {IDENTITY}
        if g == rotation(3):
            return 4
        return 3 if _fixed_sides(g) == 2 else 2
    if order == 3:
        return 6
    if order == 4:
        return 5
    if order == 6:
        if rotation(1) in group:
            return 7
        refl = [g for g in group if g in D6[6:]]
        if all(_fixed_sides(g) == 2 for g in refl):
            return 8
        raise GeometryError("this S3 is not the image of a Galois action on a del Pezzo hexagon")
    return 9


@dataclass(frozen=True)
class HexagonAction:
    """Images of Galois generators in D6 and the resulting hexagon type (1 to 9)."""

    perm_images: tuple[Perm, ...]
    figure_type: int
    labels: tuple[str, ...] = ()

    @classmethod
    def from_perms(cls, perms: Sequence[Perm], labels: Sequence[str] = ()) -> "HexagonAction":
        perms = tuple(tuple(p) for p in perms)
        return cls(perms, classify_subgroup(perms), tuple(labels))

    def relabel(self, h: Perm) -> "HexagonAction":
        """Conjugate by a symmetry h of the hexagon."""
        hi = perm_inv(h)
        return HexagonAction.from_perms([perm_mul(h, perm_mul(g, hi)) for g in self.perm_images])

    def to_json(self) -> dict:
        return {"generators": [d6_name(g) for g in self.perm_images], "figure_type": self.figure_type,
                "sides": list(self.labels)}


# ---------------------------------------------------------------------------
# surface models


class SurfaceModel:
    """Base class: a surface over ``field`` with twisted Frobenius ``galois``."""

    variant: str = "abstract"
    field: FieldTower
    #: the Frobenius twist and the model data are defined over this degree
    split_degree: int = 1

    def galois(self, x: ProjPoint) -> ProjPoint:
        return x.frobenius(self.field.n)

    def galois_power(self, x: ProjPoint, m: int) -> ProjPoint:
        for _ in range(m):
            x = self.galois(x)
        return x

    def point_field(self, m: int = 1) -> FieldTower:
        """Field carrying all points rational over the degree m extension."""
        return extension(self.field, lcm(m, self.split_degree))

    def geometric_points(self, E: FieldTower) -> list[ProjPoint]:
        raise NotImplementedError

    def points(self, m: int = 1) -> list[ProjPoint]:
        """Points rational over the degree m extension of the base field."""
        E = self.point_field(m)
        return [x for x in self.geometric_points(E) if self.galois_power(x, m) == x]

    def contains(self, x: ProjPoint) -> bool:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"variant": self.variant, "field": self.field.to_dict()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.variant} over F{self.field.order})"


class P2Model(SurfaceModel):
    variant = "P2"
    ambient = (2,)

    def __init__(self, field: FieldTower):
        self.field = field

    def geometric_points(self, E):
        return all_points(E, (2,))

    def contains(self, x):
        return x.dims == (2,)


class F0Model(SurfaceModel):
    variant = "F0"
    ambient = (1, 1)

    def __init__(self, field: FieldTower):
        self.field = field

    def geometric_points(self, E):
        return all_points(E, (1, 1))

    def contains(self, x):
        return x.dims == (1, 1)


class FnModel(SurfaceModel):
    """Hirzebruch surface F_n with points [y0:y1; z0:z1].

    A point is stored as ([y0:y1], [z0:z1]) after scaling z so that its first
    nonzero coordinate is 1; with z fixed, the remaining scaling acts on
    (y0, y1) linearly, so the stored pair is a canonical representative.
    """

    variant = "Fn"
    ambient = (1, 1)

    def __init__(self, field: FieldTower, n: int):
        if n < 0:
            raise GeometryError("F_n needs n >= 0")
        self.field = field
        self.n = n

    def geometric_points(self, E):
        return all_points(E, (1, 1))

    def contains(self, x):
        return x.dims == (1, 1)

    def point(self, E: FieldTower, y: Sequence[int], z: Sequence[int]) -> ProjPoint:
        """Canonical representative of [y0:y1; z0:z1] given by raw codes."""
        z = list(z)
        lead = next(c for c in z if c)
        inv = E.inv(lead)
        z = [E.mul(c, inv) for c in z]
        # (y0, y1, z) ~ (rho^{-n} y0, y1, rho z) with rho = 1/lead
        y0 = E.mul(y[0], E.pow(lead, self.n))
        return ProjPoint.from_codes(E, [(y0, y[1]), z])

    def to_json(self):
        return {**super().to_json(), "n": self.n}


def _quad_codes(quad: QuadraticData) -> tuple[int, int, int, int]:
    return quad.a1.value, quad.a2.value, quad.a.value, quad.at.value


class QLModel(SurfaceModel):
    """P^1_L x P^1_L with Frobenius (u, v) -> (v^q, u^q)."""

    variant = "QL"
    ambient = (1, 1)
    split_degree = 2

    def __init__(self, field: FieldTower, quad: QuadraticData | None = None):
        self.field = field
        self.L = extension(field, 2)
        self.quad = quad or quadratic_generator(self.L, field.n)
        if self.quad.a1.tower != self.L:
            raise GeometryError("quadratic data must live in the quadratic extension")

    def galois(self, x):
        return x.frobenius(self.field.n).swap()

    def geometric_points(self, E):
        return all_points(E, (1, 1))

    def contains(self, x):
        return x.dims == (1, 1)

    def to_json(self):
        q = self.quad
        return {**super().to_json(), "a1": self.L._digits(q.a1.value), "a": self.L._digits(q.a.value),
                "at": self.L._digits(q.at.value)}


class RLModel(SurfaceModel):
    """The quadric WZ = X^2 + aXY + at Y^2 in P^3."""

    variant = "RL"
    ambient = (3,)

    def __init__(self, field: FieldTower, quad: QuadraticData | None = None):
        self.field = field
        self.L = extension(field, 2)
        self.quad = quad or quadratic_generator(self.L, field.n)

    def _coeffs(self, E: FieldTower) -> tuple[int, int]:
        t = embedding(self.L, E) if E.n % self.L.n == 0 else None
        a, at = self.quad.a.value, self.quad.at.value
        if t is not None:
            return t[a], t[at]
        # a and at lie in k, so k-embedding suffices
        tk = embedding(self.field, E)
        back = {lift_code(self.field, self.L, c): c for c in range(self.field.order)}
        return tk[back[a]], tk[back[at]]

    def equation(self, E: FieldTower, x: Sequence[int]) -> int:
        a, at = self._coeffs(E)
        W, X, Y, Z = x
        rhs = E.add(E.add(E.mul(X, X), E.mul(a, E.mul(X, Y))), E.mul(at, E.mul(Y, Y)))
        return E.sub(E.mul(W, Z), rhs)

    def geometric_points(self, E):
        a, at = self._coeffs(E)
        out = []
        for X, Y in itertools.product(range(E.order), repeat=2):
            W = E.add(E.add(E.mul(X, X), E.mul(a, E.mul(X, Y))), E.mul(at, E.mul(Y, Y)))
            out.append(ProjPoint.from_codes(E, [(W, X, Y, 1)]))
        for w in all_points(E, (2,)):
            W, X, Y = w.coords[0]
            if self.equation(E, (W, X, Y, 0)) == 0:
                out.append(ProjPoint.from_codes(E, [(W, X, Y, 0)]))
        return sorted(out)

    def contains(self, x):
        return x.dims == (3,) and self.equation(x.field, x.coords[0]) == 0

    def to_json(self):
        q = self.quad
        return {**super().to_json(), "a1": self.L._digits(q.a1.value), "a": self.L._digits(q.a.value),
                "at": self.L._digits(q.at.value)}


# ---------------------------------------------------------------------------
# blow-ups


def _normalize_center_list(base: SurfaceModel, points: Sequence) -> tuple[FieldTower, list[list[ProjPoint]]]:
    """Lift all closed points to one field and validate each as a Galois orbit."""
    groups = [list(p.points) if isinstance(p, ClosedPoint) else list(p) for p in points]
    if not groups or any(not g for g in groups):
        raise GeometryError("no points to blow up")
    degs = [g[0].field.n for g in groups for _ in g]
    N = lcm(base.field.n * base.split_degree, *degs)
    E = make_field(base.field.p, N)
    lifted = []
    for g in groups:
        g = [lift_point(x, E) for x in g]
        for x in g:
            if x.dims != base.ambient:
                raise GeometryError(f"{x} does not lie in the ambient of {base!r}")
        pts = sorted(set(g))
        orbit = galois_orbit(pts[0], action=base.galois)
        if any(x not in orbit for x in pts):
            raise NotTransitive(f"{pts} is not a single Galois orbit")
        if len(orbit) != len(pts):
            raise NotGaloisStable(f"{pts} misses Galois conjugates")
        lifted.append(orbit)
    return E, lifted


def _same_ruling(x: ProjPoint, y: ProjPoint) -> bool:
    return x.coords[0] == y.coords[0] or x.coords[1] == y.coords[1]


class DP6Model(SurfaceModel):
    """Blow-up of P^2 in points of total degree 3, or of F0 or Q^L in points of
    total degree 2.

    Over P^2 the points are those of the model
    {x0 y0 = x1 y1 = x2 y2} in P^2 x P^2 with the Frobenius
    (x, y) -> (N x^q, N y^q), N the permutation matrix recording how Frobenius
    permutes the blown points. The map to P^2 is x -> M x where M sends the
    coordinate points to the blown points and [1:1:1] to a rational point.

    Over F0 and Q^L the points are the base points other than the centers
    and, for each center (u, v), the tangent directions [du:dv] stored as
    points (u, v, [du:dv]) of (P^1)^3.
    """

    variant = "DP6"

    def __init__(self, base: SurfaceModel, centers: Sequence):
        if not isinstance(base, (P2Model, F0Model, QLModel)):
            raise GeometryError(f"cannot build a degree 6 del Pezzo surface on {base!r}")
        self.base = base
        self.field = base.field
        K, orbits = _normalize_center_list(base, centers)
        self.K = K
        self.orbits = orbits
        comps = [x for o in orbits for x in o]
        self.components = comps
        self.split_degree = K.n // self.field.n
        if isinstance(base, P2Model):
            if len(comps) != 3:
                raise GeometryError(f"P^2 must be blown up in total degree 3, got {len(comps)}")
            if len(set(comps)) != 3:
                raise DegenerateConfiguration("blown points are not distinct")
            if collinear(*comps):
                raise DegenerateConfiguration("blown points are collinear")
            self._setup_plane()
            self.ambient = (2, 2)
            self.labels = ("E1", "L12", "E2", "L23", "E3", "L31")
        else:
            if len(comps) != 2:
                raise GeometryError(f"{base.variant} must be blown up in total degree 2, got {len(comps)}")
            if comps[0] == comps[1]:
                raise DegenerateConfiguration("blown points are not distinct")
            if _same_ruling(*comps):
                raise DegenerateConfiguration("blown points lie on a common ruling")
            self.ambient = None
            self.labels = ("E1", "A1", "B2", "E2", "A2", "B1")
        self.sigma = tuple(comps.index(self._center_galois(c)) for c in comps)

    # -- P^2 based ---------------------------------------------------------

    def _setup_plane(self) -> None:
        K, k = self.K, self.field
        comps = self.components
        r = None
        for cand in all_points(k, (2,)):
            c = lift_point(cand, K)
            if in_general_position(comps + [c]):
                r = c
                break
        if r is None:
            raise DegenerateConfiguration("no rational point in general position with the blown points")
        frame = [ProjPoint.make(K, v) for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1])]
        self.M = pgl_transport(frame, comps + [r], base=K.n)
        self.r = r
        Nmat = self.M.inverse() @ self.M.frobenius(k.n)
        perm = []
        for i in range(3):
            col = [Nmat.rows[j][i] for j in range(3)]
            nz = [j for j in range(3) if col[j]]
            if len(nz) != 1:
                raise GeometryError("twist matrix is not a permutation")  # pragma: no cover
            perm.append(nz[0])
        self.N = tuple(perm)  # N e_i = e_{N[i]}

    def _center_galois(self, c: ProjPoint) -> ProjPoint:
        return self.base.galois(c)

    def _permute(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0, 0, 0]
        for i in range(3):
            out[self.N[i]] = v[i]
        return tuple(out)

    # -- points ------------------------------------------------------------

    def galois(self, x: ProjPoint) -> ProjPoint:
        q = self.field.n
        if isinstance(self.base, P2Model):
            x = x.frobenius(q)
            return ProjPoint.from_codes(x.field, [self._permute(x.coords[0]), self._permute(x.coords[1])])
        if len(x.coords) == 2:
            return self.base.galois(x)
        x = x.frobenius(q)
        if isinstance(self.base, QLModel):
            u, v, d = x.coords
            return ProjPoint.from_codes(x.field, [v, u, (d[1], d[0])])
        return x

    def _centers_in(self, E: FieldTower) -> list[ProjPoint]:
        if E.n % self.K.n:
            raise GeometryError(f"{E!r} does not contain the splitting field of the blown points")
        return [lift_point(c, E) for c in self.components]

    def geometric_points(self, E):
        if isinstance(self.base, P2Model):
            return split_dp6_points(E)
        if E.n % self.K.n:
            raise GeometryError(f"{E!r} does not contain the splitting field of the blown points")
        centers = set(self._centers_in(E))
        out = [x for x in self.base.geometric_points(E) if x not in centers]
        for c in sorted(centers):
            for d in all_points(E, (1,)):
                out.append(ProjPoint(c.coords + d.coords, E))
        return out

    def point_field(self, m: int = 1) -> FieldTower:
        return extension(self.field, lcm(m, self.split_degree))

    def contains(self, x):
        if isinstance(self.base, P2Model):
            return on_split_dp6(x)
        return len(x.coords) in (2, 3)

    def to_plane(self, x: ProjPoint) -> ProjPoint:
        """Image in P^2 of a point of the P^2 based model."""
        E = x.field
        M = PglMatrix.from_codes(E, [[lift_code(self.K, E, c) for c in row] for row in self.M.rows])
        return M(ProjPoint(x.coords[:1], E))

    # -- hexagon -----------------------------------------------------------

    def hexagon_permutation(self) -> Perm:
        """The symmetry of the hexagon induced by the Frobenius of k."""
        s = self.sigma
        if isinstance(self.base, P2Model):
            side = {("E", i): 2 * i for i in range(3)}
            for i, j in ((0, 1), (1, 2), (2, 0)):
                side[("L", frozenset((i, j)))] = {(0, 1): 1, (1, 2): 3, (2, 0): 5}[(i, j)]
            perm = [0] * 6
            for i in range(3):
                perm[side[("E", i)]] = side[("E", s[i])]
            for (i, j) in ((0, 1), (1, 2), (2, 0)):
                perm[side[("L", frozenset((i, j)))]] = side[("L", frozenset((s[i], s[j])))]
            return tuple(perm)
        # cycle E1 - A1 - B2 - E2 - A2 - B1
        pos = {("E", 0): 0, ("A", 0): 1, ("B", 1): 2, ("E", 1): 3, ("A", 1): 4, ("B", 0): 5}
        swap = isinstance(self.base, QLModel)
        perm = [0] * 6
        for (kind, i), where in pos.items():
            new = kind if kind == "E" or not swap else {"A": "B", "B": "A"}[kind]
            perm[where] = pos[(new, s[i])]
        return tuple(perm)

    def to_json(self):
        return {
            "variant": "DP6",
            "field": self.field.to_dict(),
            "base": self.base.to_json(),
            "points": [[x.to_json() for x in o] for o in self.orbits],
            "points_field": self.K.to_dict(),
        }


def build_dp6(base: SurfaceModel, points: Sequence) -> DP6Model:
    """Blow up ``base`` (P^2, F0 or Q^L) in the given closed points."""
    return DP6Model(base, points)


def cremona(v: Sequence[int], E: FieldTower) -> tuple[int, int, int]:
    x0, x1, x2 = v
    return (E.mul(x1, x2), E.mul(x0, x2), E.mul(x0, x1))


def split_dp6_points(E: FieldTower) -> list[ProjPoint]:
    """Points of {x0 y0 = x1 y1 = x2 y2} in P^2 x P^2 over E."""
    out = []
    for x in all_points(E, (2,)):
        v = x.coords[0]
        if sum(1 for c in v if c) >= 2:
            out.append(ProjPoint.from_codes(E, [v, cremona(v, E)]))
        else:
            i = next(j for j in range(3) if v[j])
            for y in all_points(E, (1,)):
                w = list(y.coords[0])
                w.insert(i, 0)
                out.append(ProjPoint.from_codes(E, [v, w]))
    return sorted(out)


def on_split_dp6(x: ProjPoint) -> bool:
    E = x.field
    a, b = x.coords
    prods = [E.mul(a[i], b[i]) for i in range(3)]
    return x.dims == (2, 2) and prods[0] == prods[1] == prods[2]


def hexagon_action(dp6: DP6Model) -> HexagonAction:
    """Galois action on the hexagon, generated by the Frobenius of k."""
    return HexagonAction.from_perms([dp6.hexagon_permutation()], dp6.labels)


# ---------------------------------------------------------------------------
# the type 4 surface as a graph in (P^1)^3


class PencilGraphModel(SurfaceModel):
    """Blow-up of F0 in {([b1:1],[b1:1]), ([b2:1],[b2:1])}, embedded in (P^1)^3
    as the closure of the graph of (y, z) -> [G0 : G1] where
    G0 = bt (y0 z1 - y1 z0) and G1 = y0 z0 + b y1 z0 + bt y1 z1 span the
    (1,1)-forms through the blown point; t^2 + b t + bt is the minimal
    polynomial of b1.

    The third factor is the second factor of the involution
    (y, z) -> (y, [G0(y, z) : G1(y, z)]).
    """

    variant = "DP6-graph"
    ambient = (1, 1, 1)

    def __init__(self, field: FieldTower, b: int, bt: int):
        self.field = field
        self.b, self.bt = b, bt
        self.ring = ambient_ring(field, (1, 1, 1), ["y0", "y1", "z0", "z1", "w0", "w1"])
        y0, y1, z0, z1, w0, w1 = self.ring.gens
        cb, cbt = (Poly.from_code(field, 6, c) for c in (b, bt))
        self.G = (cbt * (y0 * z1 - y1 * z0), y0 * z0 + cb * (y1 * z0) + cbt * (y1 * z1))
        self.equation = w0 * self.G[1] - w1 * self.G[0]

    @classmethod
    def from_quadratic(cls, field: FieldTower, quad: QuadraticData | None = None) -> "PencilGraphModel":
        L = extension(field, 2)
        quad = quad or quadratic_generator(L, field.n)
        back = {lift_code(field, L, c): c for c in range(field.order)}
        return cls(field, back[quad.a.value], back[quad.at.value])

    def _eq_in(self, E: FieldTower) -> Poly:
        if E == self.field:
            return self.equation
        t = embedding(self.field, E)
        return Poly(E, 6, {e: t[c] for e, c in self.equation.terms.items()})

    def geometric_points(self, E):
        eq = self._eq_in(E)
        out = []
        for yz in all_points(E, (1, 1)):
            for w in all_points(E, (1,)):
                vals = list(yz.coords[0]) + list(yz.coords[1]) + list(w.coords[0])
                if eq.evaluate(vals) == 0:
                    out.append(ProjPoint(yz.coords + w.coords, E))
        return out

    def contains(self, x):
        return x.dims == (1, 1, 1) and self._eq_in(x.field).evaluate([c for f in x.coords for c in f]) == 0

    def blown_point(self, E: FieldTower) -> list[ProjPoint]:
        t = embedding(self.field, E)
        roots = [r for r in range(E.order)
                 if E.add(E.add(E.mul(r, r), E.mul(t[self.b], r)), t[self.bt]) == 0]
        return [ProjPoint.from_codes(E, [(r, 1), (r, 1)]) for r in roots]

    def to_json(self):
        return {**super().to_json(), "b": self.field._digits(self.b), "bt": self.field._digits(self.bt)}


# ---------------------------------------------------------------------------
# Q^L and R^L


def ql_rl_iso(direction: str, quad: QuadraticData, k: FieldTower | None = None) -> RationalMapRep:
    """The isomorphism Q^L -> R^L ("forward") or its inverse ("inverse", via
    [X - a1 Y : Z], [X - a2 Y : Z]; "inverse-alt" via [W : X - a2 Y],
    [W : X - a1 Y]). Maps are defined over L."""
    L = quad.a1.tower
    if k is None:
        k = make_field(L.p, L.n // 2)
    if quad.a1 == quad.a2 or quad.a1.tower.frob(quad.a1.value, k.n) != quad.a2.value:
        raise GeometryError("t^2 + a t + at is not irreducible over the base field")
    a1, a2 = quad.a1.value, quad.a2.value
    d = L.sub(a1, a2)
    if direction == "forward":
        R = ambient_ring(L, (1, 1))
        u0, u1, v0, v1 = R.gens
        coords = [[(u0 * v0).scale(d), u1 * v0 * quad.a1 - u0 * v1 * quad.a2, u1 * v0 - u0 * v1,
                   (u1 * v1).scale(d)]]
        return RationalMapRep(L, (1, 1), (3,), coords)
    R = ambient_ring(L, (3,), ["W", "X", "Y", "Z"])
    W, X, Y, Z = R.gens
    if direction == "inverse":
        coords = [[X - Y * quad.a1, Z], [X - Y * quad.a2, Z]]
    elif direction == "inverse-alt":
        coords = [[W, X - Y * quad.a2], [W, X - Y * quad.a1]]
    else:
        raise GeometryError(f"unknown direction {direction!r}")
    return RationalMapRep(L, (3,), (1, 1), coords)


def rl_equation(quad: QuadraticData) -> Poly:
    L = quad.a1.tower
    W, X, Y, Z = ambient_ring(L, (3,), ["W", "X", "Y", "Z"]).gens
    return W * Z - (X * X + (X * Y) * quad.a + (Y * Y) * quad.at)


@dataclass(frozen=True)
class QLAutomorphism:
    """The automorphism (A, A^g) of Q^L, A in PGL_2(L)."""

    A: PglMatrix
    k_degree: int

    @property
    def B(self) -> PglMatrix:
        return self.A.frobenius(self.k_degree)

    def __call__(self, x: ProjPoint) -> ProjPoint:
        E = x.field
        A = _lift_matrix(self.A, E)
        B = _lift_matrix(self.B, E)
        u = A(ProjPoint(x.coords[:1], E))
        v = B(ProjPoint(x.coords[1:], E))
        return ProjPoint(u.coords + v.coords, E)


def _lift_matrix(A: PglMatrix, E: FieldTower) -> PglMatrix:
    if A.field == E:
        return A
    t = embedding(A.field, E)
    return PglMatrix.from_codes(E, [[t[c] for c in row] for row in A.rows])


def normalize_deg2_on_ql(model: QLModel, p: Sequence[ProjPoint] | ClosedPoint) -> QLAutomorphism:
    """An automorphism (A, A^g) of Q^L sending the degree 2 point p to
    {([1:0],[0:1]), ([0:1],[1:0])}; A is [u:v] -> [d^g u - c^g v : -b u + a v]
    for p = {([a:b],[c:d]), ([c^g:d^g],[a^g:b^g])}."""
    L = model.L
    # descending order puts ([1:0],[0:1]) first, so a standard point gives the identity
    pts = sorted((lift_point(x, L) for x in (p.points if isinstance(p, ClosedPoint) else p)), reverse=True)
    if len(pts) != 2 or pts[0] == pts[1]:
        raise GeometryError("a degree 2 point has two components")
    first, second = pts
    (a, b), (c, d) = first.coords
    C, D = second.coords[0]  # = (c^g, d^g) for a Galois stable pair
    det = L.sub(L.mul(a, D), L.mul(b, C))
    if det == 0:
        raise DegenerateConfiguration("components lie on one ruling")
    if model.galois(first) != second or model.galois(second) != first:
        raise NotGaloisStable("the two components are not exchanged by Galois")
    A = PglMatrix.from_codes(L, [[D, L.neg(C)], [L.neg(b), a]])
    alpha = QLAutomorphism(A, model.field.n)
    std = {ProjPoint.make(L, [1, 0], [0, 1]), ProjPoint.make(L, [0, 1], [1, 0])}
    assert {alpha(first), alpha(second)} == std
    return alpha


def normalize_rational_pair_on_ql(model: QLModel, r: ProjPoint, s: ProjPoint) -> QLAutomorphism:
    """An automorphism (A, A^g) of Q^L sending the rational points r, s to
    ([1:0],[1:0]) and ([0:1],[0:1]); A is [u:v] -> [d u - c v : -b u + a v]
    for r = ([a:b], ...), s = ([c:d], ...)."""
    L = model.L
    r, s = lift_point(r, L), lift_point(s, L)
    for x in (r, s):
        if model.galois(x) != x:
            raise GeometryError(f"{x} is not a rational point of Q^L")
    if _same_ruling(r, s):
        raise DegenerateConfiguration("the points lie on one ruling")
    (a, b), (c, d) = r.coords[0], s.coords[0]
    A = PglMatrix.from_codes(L, [[d, L.neg(c)], [L.neg(b), a]])
    alpha = QLAutomorphism(A, model.field.n)
    assert alpha(r) == ProjPoint.make(L, [1, 0], [1, 0]) and alpha(s) == ProjPoint.make(L, [0, 1], [0, 1])
    return alpha


# ---------------------------------------------------------------------------
# counting


def count_rational_points(model: SurfaceModel, field: FieldTower | None = None) -> int:
    """Number of points rational over ``field`` (an extension of the base)."""
    m = 1
    if field is not None:
        if field.p != model.field.p or field.n % model.field.n:
            raise GeometryError(f"{field!r} is not an extension of {model.field!r}")
        m = field.n // model.field.n
    return len(model.points(m))


def model_from_json(data: dict) -> SurfaceModel:
    k = FieldTower.from_dict(data["field"])
    v = data["variant"]
    if v == "P2":
        return P2Model(k)
    if v == "F0":
        return F0Model(k)
    if v == "Fn":
        return FnModel(k, data["n"])
    if v in ("QL", "RL"):
        L = extension(k, 2)
        a1 = FieldElement(L, L._from_digits(data["a1"])) if "a1" in data else None
        quad = None
        if a1 is not None:
            a2 = FieldElement(L, L.frob(a1.value, k.n))
            quad = QuadraticData(a1, a2, -(a1 + a2), a1 * a2)
        return QLModel(k, quad) if v == "QL" else RLModel(k, quad)
    if v == "DP6":
        base = model_from_json(data["base"])
        K = FieldTower.from_dict(data["points_field"])
        return DP6Model(base, [[ProjPoint.from_json(K, x) for x in o] for o in data["points"]])
    if v == "DP6-graph":
        return PencilGraphModel(k, k._from_digits(data["b"]), k._from_digits(data["bt"]))
    raise GeometryError(f"unknown surface variant {v!r}")
