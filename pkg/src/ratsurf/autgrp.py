"""Automorphism group generators, permutation closure and small-orbit searches."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .gfarith import FieldTower, embedding, make_field
from .polys import Poly
from .projgeom import GeometryError, PglMatrix, ProjPoint, all_points, enumerate_pgl, mat_mul, row_reduce
from .ratmap import RationalMapRep, ambient_ring, compose, maps_equal
from .surfaces import (
    DP6Model,
    F0Model,
    FnModel,
    P2Model,
    PencilGraphModel,
    QLModel,
    SurfaceModel,
    extension,
    hexagon_action,
    lift_code,
)

Matrix = tuple[tuple[int, ...], ...]


class AutError(GeometryError):
    """Unsupported model, non-bijective generator or unfaithful action."""


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class LinearMap:
    """Map of products of projective spaces, linear in each factor.

    Target factor i is ``mats[i]`` applied to source factor ``sources[i]``.
    """

    field: FieldTower
    mats: tuple[Matrix, ...]
    sources: tuple[int, ...]

    @classmethod
    def make(cls, field: FieldTower, mats: Sequence[Sequence[Sequence[int]]],
             sources: Sequence[int] | None = None) -> "LinearMap":
        mats = tuple(tuple(tuple(r) for r in m) for m in mats)
        return cls(field, mats, tuple(sources) if sources is not None else tuple(range(len(mats))))

    @functools.lru_cache(maxsize=None)
    def _lifted(self, E: FieldTower) -> tuple[Matrix, ...]:
        if E == self.field:
            return self.mats
        t = embedding(self.field, E)
        return tuple(tuple(tuple(t[c] for c in r) for r in m) for m in self.mats)

    def __call__(self, x: ProjPoint) -> ProjPoint:
        E = x.field
        out = []
        for m, s in zip(self._lifted(E), self.sources):
            v = x.coords[s]
            row = []
            for r in m:
                acc = 0
                for a, c in zip(r, v):
                    if a and c:
                        acc = E.add(acc, E.mul(a, c))
                row.append(acc)
            out.append(row)
        return ProjPoint.from_codes(E, out)

    def rep(self) -> RationalMapRep:
        dims = tuple(len(m) - 1 for m in self.mats)
        R = ambient_ring(self.field, dims)
        blocks, start = [], 0
        for d in dims:
            blocks.append(R.gens[start:start + d + 1])
            start += d + 1
        coords = []
        for m, s in zip(self.mats, self.sources):
            coords.append([sum((Poly.from_code(self.field, R.nvars, a) * blocks[s][j]
                                for j, a in enumerate(r)), R.zero()) for r in m])
        return RationalMapRep(self.field, dims, dims, coords)


@dataclass(frozen=True)
class Generator:
    """One automorphism: a point action plus, when available, its formula."""

    name: str
    act: Callable[[ProjPoint], ProjPoint]
    rep: RationalMapRep | None = None
    provenance: str = ""

    def __call__(self, x: ProjPoint) -> ProjPoint:
        return self.act(x)


@dataclass
class AutGenerators:
    surface: SurfaceModel
    gens: list[Generator]
    expected_order: int | None = None

    def names(self) -> list[str]:
        return [g.name for g in self.gens]


def _linear(name: str, lm: LinearMap, provenance: str) -> Generator:
    return Generator(name, lm, lm.rep(), provenance)


def _ident(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _small_generating_set(elements: Sequence, act_on: Sequence[ProjPoint], apply) -> list:
    """Greedy generating set of the group formed by ``elements`` judged by
    the permutations they induce on ``act_on``."""
    index = {x: i for i, x in enumerate(act_on)}
    perms = {}
    for e in elements:
        perms[e] = tuple(index[apply(e, x)] for x in act_on)
    chosen: list = []
    group = {tuple(range(len(act_on)))}
    for e in elements:
        if perms[e] in group:
            continue
        chosen.append(e)
        group = _closure([perms[c] for c in chosen], len(act_on))
        if len(group) == len(set(perms.values())):
            break
    return chosen


def _pgl2_generators(k: FieldTower) -> list[PglMatrix]:
    elems = enumerate_pgl(1, k)
    pts = all_points(k, (1,))
    return _small_generating_set(elems, pts, lambda A, x: A(x))


def _mat(A: PglMatrix) -> Matrix:
    return A.rows


def aut_generators(model: SurfaceModel) -> AutGenerators:
    """Generators of the group of automorphisms defined over the base field."""
    k = model.field
    q = k.order
    if isinstance(model, P2Model):
        elems = enumerate_pgl(2, k)
        pts = all_points(k, (2,))
        gens = _small_generating_set(elems, pts, lambda A, x: A(x))
        out = [_linear(f"g{i}", LinearMap.make(k, [_mat(A)]), "PGL_3(k)") for i, A in enumerate(gens)]
        return AutGenerators(model, out, q**3 * (q**3 - 1) * (q**2 - 1))
    if isinstance(model, F0Model):
        one = _ident(2)
        out = []
        for i, A in enumerate(_pgl2_generators(k)):
            out.append(_linear(f"A{i}x1", LinearMap.make(k, [_mat(A), one]), "PGL_2(k) on the first factor"))
            out.append(_linear(f"1xA{i}", LinearMap.make(k, [one, _mat(A)]), "PGL_2(k) on the second factor"))
        out.append(_linear("swap", LinearMap.make(k, [one, one], [1, 0]), "factor exchange"))
        return AutGenerators(model, out, 2 * q**2 * (q**2 - 1) ** 2)
    if isinstance(model, QLModel):
        L = model.L
        out = []
        for i, A in enumerate(_pgl2_generators(L)):
            Ag = A.frobenius(k.n)
            out.append(_linear(f"(A{i},A{i}^g)", LinearMap.make(L, [_mat(A), _mat(Ag)]), "{(A, A^g)}"))
        out.append(_linear("tau", LinearMap.make(L, [_ident(2), _ident(2)], [1, 0]), "factor exchange"))
        return AutGenerators(model, out, 2 * q**2 * (q**4 - 1))
    if isinstance(model, FnModel):
        return _fn_generators(model)
    if isinstance(model, PencilGraphModel):
        return _graph_generators(model)
    if isinstance(model, DP6Model):
        t = hexagon_action(model).figure_type
        if isinstance(model.base, P2Model) and t in (1, 6, 8):
            return _plane_dp6_generators(model)
        if isinstance(model.base, F0Model) and t == 4:
            graph = dp6_graph_model(model)
            return _graph_generators(graph)
        raise AutError(f"no generator set for degree 6 del Pezzo surfaces of type {t}")
    raise AutError(f"no generator set for {model!r}")


def _fn_generators(model: FnModel) -> AutGenerators:
    k, n = model.field, model.n
    q = k.order
    if n == 0:
        return aut_generators(F0Model(k))

    def shear(coeffs: tuple[int, ...]):
        # [y0 : P(z) y0 + y1 ; z]
        def act(x: ProjPoint) -> ProjPoint:
            E = x.field
            t = embedding(k, E)
            (y0, y1), (z0, z1) = x.coords
            val = 0
            for i, c in enumerate(coeffs):
                if c:
                    val = E.add(val, E.mul(t[c], E.mul(E.pow(z0, n - i), E.pow(z1, i))))
            return model.point(E, (y0, E.add(E.mul(val, y0), y1)), (z0, z1))
        return act

    def linear(A: Sequence[Sequence[int]]):
        def act(x: ProjPoint) -> ProjPoint:
            E = x.field
            t = embedding(k, E)
            (y0, y1), z = x.coords
            z2 = [E.add(E.mul(t[A[r][0]], z[0]), E.mul(t[A[r][1]], z[1])) for r in range(2)]
            return model.point(E, (y0, y1), z2)
        return act

    out = []
    # the additive group k[z0, z1]_n is generated by c z0^(n-i) z1^i, c in a basis of k over F_p
    basis = [k.pow(k.gen.value, j) for j in range(k.n)] if k.n > 1 else [1]
    for i in range(n + 1):
        for c in basis:
            coeffs = tuple(c if j == i else 0 for j in range(n + 1))
            out.append(Generator(f"shear[{c}z0^{n - i}z1^{i}]", shear(coeffs), None, "k[z0,z1]_n"))
    gl = [((a, b), (c, d)) for a, b, c, d in itertools.product(range(q), repeat=4)
          if k.sub(k.mul(a, d), k.mul(b, c)) != 0]
    pts = model.points(1)
    chosen = _small_generating_set(gl, pts, lambda A, x: linear(A)(x))
    for A in chosen:
        out.append(Generator(f"GL{A}", linear(A), None, "GL_2(k)/mu_n(k)"))
    mu = sum(1 for x in range(1, q) if k.pow(x, n) == 1)
    order = q ** (n + 1) * (q**2 - 1) * (q**2 - q) // mu
    return AutGenerators(model, out, order)


# -- the split and cyclic plane models ---------------------------------------


def _twisted_torus(model: DP6Model) -> list[tuple[int, int, int]]:
    """Diagonal matrices diag(1, t1, t2) over the splitting field commuting
    with the twisted Frobenius (x, y) -> (N x^q, N y^q)."""
    K = model.K
    qn = model.field.n
    out = []
    for t1, t2 in itertools.product(range(1, K.order), repeat=2):
        t = (1, t1, t2)
        tf = tuple(K.frob(c, qn) for c in t)
        moved = [0, 0, 0]
        for i in range(3):
            moved[model.N[i]] = tf[i]
        inv = K.inv(moved[0])
        if tuple(K.mul(c, inv) for c in moved) == t:
            out.append(t)
    return out


def _torus_generators(elements: list[tuple[int, int, int]], K: FieldTower) -> list[tuple[int, int, int]]:
    def mul(a, b):
        return tuple(K.mul(x, y) for x, y in zip(a, b))
    group = {(1, 1, 1)}
    chosen = []
    for e in elements:
        if e in group:
            continue
        chosen.append(e)
        frontier = list(group)
        while frontier:
            nxt = []
            for g in frontier:
                for c in chosen:
                    h = mul(g, c)
                    if h not in group:
                        group.add(h)
                        nxt.append(h)
            frontier = nxt
        if len(group) == len(elements):
            break
    return chosen


def _perm_matrix(perm: Sequence[int]) -> list[list[int]]:
    """Matrix sending e_i to e_perm[i]."""
    m = [[0] * 3 for _ in range(3)]
    for i, j in enumerate(perm):
        m[j][i] = 1
    return m


def _plane_dp6_generators(model: DP6Model) -> AutGenerators:
    K, k = model.K, model.field
    q = k.order
    out = []
    torus = _twisted_torus(model)
    for t in _torus_generators(torus, K):
        tinv = [K.inv(c) for c in t]
        D = [[t[i] if i == j else 0 for j in range(3)] for i in range(3)]
        Dinv = [[tinv[i] if i == j else 0 for j in range(3)] for i in range(3)]
        out.append(_linear(f"diag{t}", LinearMap.make(K, [D, Dinv]), "torus"))
    Nm = _perm_matrix(model.N)
    for perm in itertools.permutations(range(3)):
        if perm == (0, 1, 2):
            continue
        P = _perm_matrix(perm)
        if mat_mul(K, P, Nm) == mat_mul(K, Nm, P):
            out.append(_linear(f"perm{perm}", LinearMap.make(K, [P, P]), "permutation of the blown points"))
    out.append(_linear("swap", LinearMap.make(K, [_ident(3), _ident(3)], [1, 0]),
                       "lift of the quadratic involution"))
    t = hexagon_action(model).figure_type
    expected = {1: 12 * (q - 1) ** 2, 6: 6 * (q**2 + q + 1), 8: 2 * len(torus)}[t]
    return AutGenerators(model, out, expected)


def plane_maps(model: DP6Model) -> dict[str, RationalMapRep]:
    """The quadratic involution phi_p = M o [yz:xz:xy] o M^-1 with base
    point the blown point, and the lift M o C o M^-1 of each permutation C
    of the blown points commuting with the Frobenius, as plane maps over the
    splitting field."""
    if not isinstance(model.base, P2Model):
        raise AutError("plane maps need a model blown up from P^2")
    K = model.K
    M = [list(r) for r in model.M.rows]
    Minv = [list(r) for r in model.M.inverse().rows]
    R = ambient_ring(K, (2,))
    x = R.gens

    def linear_rep(A):
        return [sum((Poly.from_code(K, 3, a) * x[j] for j, a in enumerate(r)), R.zero()) for r in A]

    minv = RationalMapRep(K, (2,), (2,), [linear_rep(Minv)])
    m = RationalMapRep(K, (2,), (2,), [linear_rep(M)])
    crem = RationalMapRep(K, (2,), (2,), [[x[1] * x[2], x[0] * x[2], x[0] * x[1]]])
    out = {"phi_p": compose(m, compose(crem, minv))}
    Nm = _perm_matrix(model.N)
    for perm in itertools.permutations(range(3)):
        if perm == (0, 1, 2):
            continue
        P = _perm_matrix(perm)
        if mat_mul(K, P, Nm) == mat_mul(K, Nm, P):
            C = RationalMapRep(K, (2,), (2,), [linear_rep(P)])
            out[f"perm{perm}"] = compose(m, compose(C, minv))
    return out


# -- the type 4 graph model ---------------------------------------------------


def dp6_graph_model(model: DP6Model) -> PencilGraphModel:
    """Graph model of F0 blown up in a diagonal degree 2 point."""
    c1, c2 = model.components
    if c1.coords[0] != c1.coords[1] or c2.coords[0] != c2.coords[1]:
        raise AutError("the blown point must be of the form {(p1, p1), (p2, p2)}")
    K, k = model.K, model.field
    b1, b2 = (c.coords[0] for c in (c1, c2))
    if b1[1] == 0 or b2[1] == 0:
        raise AutError("the blown point must avoid [1:0]")
    r1 = K.div(b1[0], b1[1])
    r2 = K.div(b2[0], b2[1])
    b, bt = K.neg(K.add(r1, r2)), K.mul(r1, r2)
    back = {lift_code(k, K, c): c for c in range(k.order)}
    return PencilGraphModel(k, back[b], back[bt])


def _pencil_matrix(model: PencilGraphModel, hy, hz, swap_yz: bool) -> list[list[int]]:
    """C with (G0, G1) o h = C (G0, G1) for h = (hy, hz) (optionally with the
    factors exchanged first)."""
    k = model.field
    R = ambient_ring(k, (1, 1), ["y0", "y1", "z0", "z1"])
    y0, y1, z0, z1 = R.gens
    cb, cbt = (Poly.from_code(k, 4, c) for c in (model.b, model.bt))
    G0 = cbt * (y0 * z1 - y1 * z0)
    G1 = y0 * z0 + cb * (y1 * z0) + cbt * (y1 * z1)
    if swap_yz:
        ys, zs = (z0, z1), (y0, y1)
    else:
        ys, zs = (y0, y1), (z0, z1)

    def lin(A, v):
        return [Poly.from_code(k, 4, A[r][0]) * v[0] + Poly.from_code(k, 4, A[r][1]) * v[1] for r in range(2)]
    images = lin(hy, ys) + lin(hz, zs)
    mons = [(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)]
    basis = [[G.terms.get(m, 0) for m in mons] for G in (G0, G1)]
    C = []
    for G in (G0, G1):
        img = G.substitute(images)
        target = [img.terms.get(m, 0) for m in mons]
        aug = [[basis[0][i], basis[1][i], target[i]] for i in range(4)]
        Rr, piv = row_reduce(k, aug)
        if 2 in piv:
            raise AutError("the map does not preserve the pencil through the blown point")
        C.append([Rr[0][2], Rr[1][2]])
    return C


def _graph_generators(model: PencilGraphModel) -> AutGenerators:
    k = model.field
    q = k.order
    b, bt = model.b, model.bt
    one = _ident(2)
    alpha = [[1, b], [0, k.neg(1)]]
    out = []

    def lift(name, hy, hz, swap_yz, provenance):
        C = _pencil_matrix(model, hy, hz, swap_yz)
        src = [1, 0, 2] if swap_yz else [0, 1, 2]
        out.append(_linear(name, LinearMap.make(k, [hy, hz, C], src), provenance))

    lift("alpha", alpha, alpha, False, "lift of alpha")
    lift("beta", one, one, True, "lift of beta")
    # phi exchanges the second and third factors; psi = phi o alpha
    phi = LinearMap.make(k, [one, one, one], [0, 2, 1])
    out.append(_linear("phi", phi, "lift of the pencil involution"))
    # stabiliser of {b1, b2} in PGL_2(k): x + y M with M = [[-b, -bt], [1, 0]],
    # cyclic of order q + 1
    stab = []
    for x, y in [(x, 1) for x in range(q)]:
        A = [[k.sub(x, k.mul(y, b)), k.neg(k.mul(y, bt))], [y, x]]
        if k.sub(k.mul(A[0][0], A[1][1]), k.mul(A[0][1], A[1][0])) != 0:
            stab.append(A)
    gen = _cyclic_generator(k, stab)
    lift("stab x 1", gen, one, False, "Aut_k(P^1, p1, p2) on the first factor")
    lift("1 x stab", one, gen, False, "Aut_k(P^1, p1, p2) on the second factor")
    return AutGenerators(model, out, 12 * (q + 1) ** 2)


def _cyclic_generator(k: FieldTower, stab: list) -> list[list[int]]:
    target = len(stab) + 1
    for A in stab:
        seen, P = 1, A
        while not _is_scalar(k, P):
            P = mat_mul(k, P, A)
            seen += 1
        if seen == target:
            return A
    raise AutError("stabiliser is not cyclic")  # pragma: no cover


def _is_scalar(k: FieldTower, A) -> bool:
    return A[0][1] == 0 and A[1][0] == 0 and A[0][0] == A[1][1]


def graph_involutions(model: PencilGraphModel) -> dict[str, RationalMapRep]:
    """alpha, beta, the pencil involution phi and psi = phi o alpha as
    self-maps of the model's ambient (P^1)^3, plus the corresponding maps of
    F0 (suffix _F0)."""
    gens = {g.name: g.rep for g in _graph_generators(model).gens}
    out = {"alpha": gens["alpha"], "beta": gens["beta"], "phi": gens["phi"]}
    out["psi"] = compose(out["phi"], out["alpha"])
    k = model.field
    R = ambient_ring(k, (1, 1), ["y0", "y1", "z0", "z1"])
    y0, y1, z0, z1 = R.gens
    b, bt = (Poly.from_code(k, 4, c) for c in (model.b, model.bt))
    out["alpha_F0"] = RationalMapRep(k, (1, 1), (1, 1), [[y0 + b * y1, -y1], [z0 + b * z1, -z1]])
    out["beta_F0"] = RationalMapRep(k, (1, 1), (1, 1), [[z0, z1], [y0, y1]])
    out["phi_F0"] = RationalMapRep(k, (1, 1), (1, 1), [
        [y0, y1], [bt * (y0 * z1 - y1 * z0), y0 * z0 + b * (y1 * z0) + bt * (y1 * z1)]])
    out["psi_F0"] = RationalMapRep(k, (1, 1), (1, 1), [
        [y0 + b * y1, -y1], [bt * (y1 * z0 - y0 * z1), y0 * z0 + b * (y0 * z1) + bt * (y1 * z1)]])
    return out


# ---------------------------------------------------------------------------
# permutation closure


def _closure(perms: Sequence[tuple[int, ...]], n: int, limit: int | None = None) -> set[tuple[int, ...]]:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in perms:
                e = tuple(g[i] for i in h)
                if e not in group:
                    group.add(e)
                    nxt.append(e)
                    if limit is not None and len(group) > limit:
                        raise AutError(f"group exceeds {limit} elements")
        frontier = nxt
    return group


@dataclass
class PermutationAction:
    points: list[ProjPoint]
    perms: list[tuple[int, ...]]
    galois: tuple[int, ...]


def permutation_action(gens: AutGenerators, m: int = 1) -> PermutationAction:
    """Permutations induced by the generators and by Frobenius on the points
    rational over the degree m extension; checks bijectivity, commutation
    with the Frobenius, and that distinct generators act distinctly."""
    model = gens.surface
    pts = model.points(m)
    index = {x: i for i, x in enumerate(pts)}
    perms = []
    for g in gens.gens:
        img = []
        for x in pts:
            y = g(x)
            if y is None or y not in index:
                raise AutError(f"{g.name} does not map {x} into the point set")
            img.append(index[y])
        if len(set(img)) != len(img):
            raise AutError(f"{g.name} is not a bijection of the point set")
        for x in pts:
            if g(model.galois(x)) != model.galois(g(x)):
                raise AutError(f"{g.name} does not commute with the Frobenius")
        perms.append(tuple(img))
    for (g, p), (h, r) in itertools.combinations(zip(gens.gens, perms), 2):
        if p == r and g.rep is not None and h.rep is not None and not maps_equal(g.rep, h.rep):
            raise AutError(f"{g.name} and {h.name} act identically: the action is not faithful")
    ident = tuple(range(len(pts)))
    for g, p in zip(gens.gens, perms):
        if p == ident and g.rep is not None and not maps_equal(g.rep, RationalMapRep.identity(g.rep.field, g.rep.source)):
            raise AutError(f"{g.name} acts trivially: the action is not faithful")
    gal = tuple(index[model.galois(x)] for x in pts)
    return PermutationAction(pts, perms, gal)


def group_order(gens: AutGenerators, m: int = 1, limit: int | None = 10**6) -> int:
    """Order of the permutation group generated on the points over the
    degree m extension."""
    if not gens.gens:
        return 1
    act = permutation_action(gens, m)
    return len(_closure(act.perms, len(act.points), limit))


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitInfo:
    representative: ProjPoint
    components: int
    galois_degree: int
    points: tuple[ProjPoint, ...]

    def to_json(self) -> dict:
        return {"representative": self.representative.to_json(), "components": self.components,
                "galois_degree": self.galois_degree}


@dataclass
class OrbitReport:
    orbits: list[OrbitInfo]
    threshold: int
    total_points: int
    all_sizes: list[int] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"threshold": self.threshold, "total_points": self.total_points,
                "orbits": [o.to_json() for o in self.orbits]}


def _orbits(n: int, perms: Sequence[Sequence[int]]) -> list[list[int]]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in perms:
        for i, j in enumerate(p):
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def enumerate_orbits(gens: AutGenerators, m: int, threshold: int) -> OrbitReport:
    """Orbits of the group and the Frobenius on the points over the degree m
    extension, keeping those with at most ``threshold`` geometric points."""
    act = permutation_action(gens, m)
    model = gens.surface
    orbs = _orbits(len(act.points), act.perms + [act.galois])
    infos, sizes = [], []
    for o in orbs:
        sizes.append(len(o))
        if len(o) <= threshold:
            pts = tuple(sorted(act.points[i] for i in o))
            rep = pts[0]
            deg = 1
            y = model.galois(rep)
            while y != rep:
                y = model.galois(y)
                deg += 1
            infos.append(OrbitInfo(rep, len(o), deg, pts))
    infos.sort(key=lambda o: (o.components, o.representative))
    assert sum(sizes) == len(act.points)
    return OrbitReport(infos, threshold, len(act.points), sorted(sizes))


def small_orbits(gens: AutGenerators, max_degree: int, threshold: int) -> list[OrbitInfo]:
    """Distinct small orbits found over the extensions of degree 1..max_degree.

    An orbit with at most ``threshold`` geometric points consists of points
    of degree at most ``threshold``, so max_degree = threshold finds all of
    them.
    """
    # an orbit first appears over the degree of its points
    found = []
    for m in range(1, max_degree + 1):
        found.extend(o for o in enumerate_orbits(gens, m, threshold).orbits if o.galois_degree == m)
    return sorted(found, key=lambda o: (o.components, o.galois_degree, o.representative))


# ---------------------------------------------------------------------------
# permutation matrices on {xyz != 0}


def _shape(orbit: Sequence[ProjPoint], k: FieldTower) -> str | None:
    E = orbit[0].field
    pts = set(orbit)
    kcodes = set(embedding(k, E))

    def P(*v):
        return ProjPoint.from_codes(E, [v])

    if pts == {P(1, 1, 1)}:
        return "fixed"
    for a in range(2, E.order):
        if E.pow(a, 3) == 1 and pts == {P(1, a, E.mul(a, a)), P(1, E.mul(a, a), a)}:
            return "cube-root pair"
    for a in kcodes - {0, 1}:
        if pts == {P(1, a, a), P(a, a, 1), P(a, 1, a)}:
            return "triple"
    return None


def verify_permutation_orbits(field: FieldTower, max_degree: int = 3) -> dict:
    """Orbits of permutation matrices and Frobenius on {xyz != 0} over the
    extensions of degree 1..max_degree; every orbit with at most 5 points
    must be {[1:1:1]}, {[1:a:a^2], [1:a^2:a]} with a^3 = 1, or
    {[1:a:a], [a:a:1], [a:1:a]} with a in the base field."""
    k = field
    realized: dict[str, list[str]] = {}
    counterexamples = []
    checked = 0
    for m in range(1, max_degree + 1):
        E = extension(k, m)
        pts = [x for x in all_points(E, (2,)) if all(x.coords[0])]
        index = {x: i for i, x in enumerate(pts)}
        perms = []
        for perm in itertools.permutations(range(3)):
            perms.append(tuple(index[ProjPoint.from_codes(E, [tuple(x.coords[0][perm[i]] for i in range(3))])]
                               for x in pts))
        perms.append(tuple(index[x.frobenius(k.n)] for x in pts))
        for o in _orbits(len(pts), perms):
            checked += 1
            if len(o) > 5:
                continue
            orbit = [pts[i] for i in o]
            shape = _shape(orbit, k)
            text = "{" + ", ".join(str(x) for x in sorted(orbit)) + "}"
            if shape is None:
                counterexamples.append(text)
            else:
                realized.setdefault(shape, [])
                if text not in realized[shape]:
                    realized[shape].append(text)
    return {"field": k.order, "max_degree": max_degree, "orbits_checked": checked,
            "realized": realized, "counterexamples": counterexamples, "holds": not counterexamples}


# ---------------------------------------------------------------------------
# the point count of the twisted surfaces over small fields


def dp6_point_count_identity(q: int) -> dict:
    """|P^1(L)| = |Q^L(k)| = |X(k)| - 1 + |P^1(k)| gives |X(k)| = q^2 - q + 1.
    For q = 2 also checks the five rational points of Q^L: no two on a
    ruling, and how many of them a (1,1)-curve can contain."""
    count = q * q - q + 1
    report = {"q": q, "X_k": count, "identity_holds": q * q + 1 == count - 1 + (q + 1)}
    if q != 2:
        return report
    k = make_field(2)
    model = QLModel(k)
    L = model.L
    pts = model.points()
    report["QL_points"] = [str(x) for x in pts]
    report["no_two_on_a_ruling"] = not any(
        x.coords[0] == y.coords[0] or x.coords[1] == y.coords[1] for x, y in itertools.combinations(pts, 2))
    best = 0
    for form in all_points(L, (3,)):
        c = form.coords[0]
        on = 0
        for x in pts:
            (u0, u1), (v0, v1) = x.coords
            val = 0
            for coef, a, b in ((c[0], u0, v0), (c[1], u0, v1), (c[2], u1, v0), (c[3], u1, v1)):
                val = L.add(val, L.mul(coef, L.mul(a, b)))
            on += val == 0
        best = max(best, on)
    report["max_on_a_11_curve"] = best
    report["no_four_on_a_11_curve"] = best <= 3
    return report


def map_order(f: RationalMapRep, limit: int = 24) -> int | None:
    """Order of a birational self-map, or None beyond ``limit``."""
    ident = RationalMapRep.identity(f.field, f.source)
    g = f
    for n in range(1, limit + 1):
        if maps_equal(g, ident):
            return n
        g = compose(f, g)
    return None


def dp4_identities(field: FieldTower) -> dict:
    """Relations between alpha, beta, the pencil involution phi and
    psi = phi o alpha on F0 and on the graph model in (P^1)^3."""
    model = PencilGraphModel.from_quadratic(field)
    d = graph_involutions(model)
    a, b, f, p = d["alpha_F0"], d["beta_F0"], d["phi_F0"], d["psi_F0"]
    return {
        "characteristic": field.p,
        "a": field.format(model.b),
        "alpha_order": map_order(a),
        "beta_order": map_order(b),
        "phi_order": map_order(f),
        "psi_is_phi_alpha": maps_equal(p, compose(f, a)),
        "psi_order": map_order(p),
        "alpha_beta_commute": maps_equal(compose(a, b), compose(b, a)),
        "alpha_phi_commute": maps_equal(compose(a, f), compose(f, a)),
        "alpha_psi_commute": maps_equal(compose(a, p), compose(p, a)),
        "beta_psi_order": map_order(compose(b, p)),
        "lifted_psi_order": map_order(d["psi"]),
    }
