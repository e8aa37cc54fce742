"""Projective points over finite fields, Galois orbits and PGL elements.

Ambients are tuples of dimensions: (2,) is P^2, (1, 1) is P^1 x P^1.
Coordinates are field codes; every factor is normalized so that its
first nonzero coordinate equals 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .gfarith import FieldElement, FieldTower, DEFAULT_BOUND

Dims = tuple[int, ...]
Coords = tuple[tuple[int, ...], ...]


class GeometryError(ValueError):
    pass


class NotGaloisStable(GeometryError):
    pass


class NotTransitive(GeometryError):
    pass


class DegenerateConfiguration(GeometryError):
    pass


class UndefinedImage(GeometryError):
    def __init__(self, point: "ProjPoint", message: str = "map undefined at point"):
        super().__init__(f"{message}: {point}")
        self.point = point


def _normalize_factor(field: FieldTower, vec: Sequence[int]) -> tuple[int, ...]:
    for c in vec:
        if c:
            if c == 1:
                return tuple(vec)
            inv = field.inv(c)
            return tuple(field.mul(x, inv) for x in vec)
    raise GeometryError("all coordinates of a factor vanish")


def _to_code(field: FieldTower, c) -> int:
    if isinstance(c, FieldElement):
        if c.tower != field:
            raise GeometryError("coordinate from another field")
        return c.value
    return int(c) % field.p


@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: Coords
    field: FieldTower

    @classmethod
    def make(cls, field: FieldTower, *factors: Sequence) -> "ProjPoint":
        """ProjPoint.make(F, [x, y, z]) or ProjPoint.make(F, [u0, u1], [v0, v1])."""
        coords = tuple(_normalize_factor(field, [_to_code(field, c) for c in f]) for f in factors)
        return cls(coords, field)

    @classmethod
    def from_codes(cls, field: FieldTower, coords: Iterable[Sequence[int]]) -> "ProjPoint":
        return cls(tuple(_normalize_factor(field, tuple(f)) for f in coords), field)

    @property
    def dims(self) -> Dims:
        return tuple(len(f) - 1 for f in self.coords)

    def frobenius(self, times: int = 1) -> "ProjPoint":
        F = self.field
        return ProjPoint(tuple(tuple(F.frob(c, times) for c in f) for f in self.coords), F)

    def swap(self) -> "ProjPoint":
        """Exchange the two factors of a point on a product of two spaces."""
        if len(self.coords) != 2:
            raise GeometryError("factor swap needs exactly two factors")
        return ProjPoint((self.coords[1], self.coords[0]), self.field)

    def elements(self) -> tuple[tuple[FieldElement, ...], ...]:
        return tuple(tuple(FieldElement(self.field, c) for c in f) for f in self.coords)

    def __str__(self) -> str:
        fmt = self.field.format
        return "(" + ", ".join("[" + ":".join(fmt(c) for c in f) + "]" for f in self.coords) + ")" \
            if len(self.coords) > 1 else "[" + ":".join(fmt(c) for c in self.coords[0]) + "]"

    def to_json(self) -> list:
        return [[list(self.field._digits(c)) for c in f] for f in self.coords]

    @classmethod
    def from_json(cls, field: FieldTower, data: list) -> "ProjPoint":
        return cls.from_codes(field, [[field._from_digits(list(c) + [0] * (field.n - len(c))) for c in f] for f in data])


def all_points(field: FieldTower, dims: Dims, bound: int | None = DEFAULT_BOUND ** 2) -> list[ProjPoint]:
    """Every point of the product of projective spaces over the field, sorted."""
    per_factor = [_points_of_pn(field, d) for d in dims]
    total = 1
    for f in per_factor:
        total *= len(f)
    if bound is not None and total > bound:
        raise GeometryError(f"{total} points exceed the enumeration bound {bound}")
    return [ProjPoint(coords, field) for coords in itertools.product(*per_factor)]


def _points_of_pn(field: FieldTower, n: int) -> list[tuple[int, ...]]:
    q = field.order
    out = []
    for lead in range(n + 1):
        for rest in itertools.product(range(q), repeat=n - lead):
            out.append((0,) * lead + (1,) + rest)
    return sorted(out)


def count_pn(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


# ---------------------------------------------------------------------------
# closed points


@dataclass(frozen=True)
class ClosedPoint:
    points: tuple[ProjPoint, ...]
    base: int

    @property
    def degree(self) -> int:
        return len(self.points)

    @property
    def field(self) -> FieldTower:
        return self.points[0].field

    def to_json(self) -> dict:
        return {"degree": self.degree, "points": [p.to_json() for p in self.points]}


def galois_orbit(p: ProjPoint, base: int = 1, action: Callable[[ProjPoint], ProjPoint] | None = None) -> list[ProjPoint]:
    act = action or (lambda x: x.frobenius(base))
    out = [p]
    q = act(p)
    while q != p:
        out.append(q)
        q = act(q)
    return out


def closed_point(points: Iterable[ProjPoint], base: int = 1,
                 action: Callable[[ProjPoint], ProjPoint] | None = None) -> ClosedPoint:
    """Validate that the points form one orbit of Frobenius^base (or of a
    supplied twisted Galois generator)."""
    pts = sorted(set(points))
    if not pts:
        raise GeometryError("empty point set")
    F = pts[0].field
    if any(p.field != F or p.dims != pts[0].dims for p in pts):
        raise GeometryError("points live in different ambients")
    if F.n % base:
        raise GeometryError(f"F_{F.p}^{base} is not a subfield of {F!r}")
    act = action or (lambda x: x.frobenius(base))
    orb = set(galois_orbit(pts[0], base, act))
    stray = [p for p in pts if p not in orb]
    if stray:
        raise NotTransitive(f"{stray[0]} is not a Galois conjugate of {pts[0]}")
    if len(orb) != len(pts):
        raise NotGaloisStable(f"the set misses {len(orb) - len(pts)} Galois conjugates of {pts[0]}")
    return ClosedPoint(tuple(pts), base)


# ---------------------------------------------------------------------------
# linear algebra over field codes


def mat_mul(F: FieldTower, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    n, m, k = len(A), len(B), len(B[0])
    out = [[0] * k for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for j in range(k):
            acc = 0
            for t in range(m):
                if Ai[t] and B[t][j]:
                    acc = F.add(acc, F.mul(Ai[t], B[t][j]))
            out[i][j] = acc
    return out


def mat_vec(F: FieldTower, A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def row_reduce(F: FieldTower, M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(F: FieldTower, M: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(F, M)[1])


def determinant(F: FieldTower, M: Sequence[Sequence[int]]) -> int:
    A = [list(r) for r in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = F.neg(det)
        det = F.mul(det, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return det


def nullspace(F: FieldTower, M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x : M x = 0}, one vector per free column, from the RREF."""
    if not M:
        return []
    R, piv = row_reduce(F, M)
    cols = len(M[0])
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r, pc in enumerate(piv):
            v[pc] = F.neg(R[r][f])
        basis.append(v)
    return basis


def mat_inverse(F: FieldTower, M: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(M)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M)]
    R, piv = row_reduce(F, aug)
    if piv[:n] != list(range(n)):
        raise GeometryError("singular matrix")
    return [r[n:] for r in R]


def solve(F: FieldTower, M: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Unique solution of M x = b, or None if M is singular."""
    n = len(M)
    aug = [list(r) + [b[i]] for i, r in enumerate(M)]
    R, piv = row_reduce(F, aug)
    if piv != list(range(n)):
        return None
    return [R[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# PGL


@dataclass(frozen=True, order=True)
class PglMatrix:
    rows: tuple[tuple[int, ...], ...]
    field: FieldTower

    @classmethod
    def make(cls, field: FieldTower, rows: Sequence[Sequence]) -> "PglMatrix":
        """From integers (read in F_p) or FieldElements."""
        return cls.from_codes(field, [[_to_code(field, c) for c in r] for r in rows])

    @classmethod
    def from_codes(cls, field: FieldTower, codes: Sequence[Sequence[int]]) -> "PglMatrix":
        if determinant(field, codes) == 0:
            raise GeometryError("matrix is not invertible")
        flat = [c for r in codes for c in r]
        lead = next(c for c in flat if c)
        inv = field.inv(lead)
        return cls(tuple(tuple(field.mul(c, inv) for c in r) for r in codes), field)

    @classmethod
    def identity(cls, field: FieldTower, n: int) -> "PglMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n + 1)) for i in range(n + 1)), field)

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    def __call__(self, p: ProjPoint) -> ProjPoint:
        if p.dims != (self.n,):
            raise GeometryError("ambient mismatch")
        return ProjPoint.from_codes(self.field, [mat_vec(self.field, self.rows, p.coords[0])])

    def __matmul__(self, other: "PglMatrix") -> "PglMatrix":
        return PglMatrix.from_codes(self.field, mat_mul(self.field, self.rows, other.rows))

    def inverse(self) -> "PglMatrix":
        return PglMatrix.from_codes(self.field, mat_inverse(self.field, self.rows))

    def frobenius(self, times: int = 1) -> "PglMatrix":
        F = self.field
        return PglMatrix(tuple(tuple(F.frob(c, times) for c in r) for r in self.rows), F)

    def is_rational(self, base: int) -> bool:
        return self.frobenius(base) == self

    def __str__(self) -> str:
        fmt = self.field.format
        return "[" + "; ".join(" ".join(fmt(c) for c in r) for r in self.rows) + "]"

    def to_json(self) -> list:
        return [[list(self.field._digits(c)) for c in r] for r in self.rows]


def collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    if not (p.dims == q.dims == r.dims == (2,)):
        raise GeometryError("collinearity needs three points of P^2")
    return determinant(p.field, [p.coords[0], q.coords[0], r.coords[0]]) == 0


def in_general_position(points: Sequence[ProjPoint]) -> bool:
    """Distinct, and for P^2: no three collinear."""
    if len(set(points)) != len(points):
        return False
    if points and points[0].dims == (2,):
        return not any(collinear(a, b, c) for a, b, c in itertools.combinations(points, 3))
    return True


def _frame_matrix(F: FieldTower, pts: Sequence[ProjPoint]) -> list[list[int]]:
    """Matrix sending the standard frame (coordinate points and [1:...:1])
    to the given n+2 points of P^n."""
    n = pts[0].dims[0]
    cols = [list(p.coords[0]) for p in pts[: n + 1]]
    M = [[cols[j][i] for j in range(n + 1)] for i in range(n + 1)]
    lam = solve(F, M, list(pts[n + 1].coords[0]))
    if lam is None or not all(lam):
        raise DegenerateConfiguration("points are not in general position")
    return [[F.mul(M[i][j], lam[j]) for j in range(n + 1)] for i in range(n + 1)]


def pgl_transport(sources: Sequence[ProjPoint], targets: Sequence[ProjPoint], base: int = 1) -> PglMatrix | None:
    """The unique projective transformation with sources[i] -> targets[i]
    (n+2 points of P^n in general position), or None if it is not defined
    over the subfield F_{p^base}."""
    if not sources or len(sources) != len(targets):
        raise DegenerateConfiguration("source and target lists must have equal nonzero length")
    dims = sources[0].dims
    if len(dims) != 1 or any(p.dims != dims for p in list(sources) + list(targets)):
        raise DegenerateConfiguration("transport needs points of a single P^n")
    n = dims[0]
    if len(sources) != n + 2:
        raise DegenerateConfiguration(f"need exactly {n + 2} points in P^{n}")
    if not in_general_position(list(sources)) or not in_general_position(list(targets)):
        raise DegenerateConfiguration("points are not in general position")
    F = sources[0].field
    S = _frame_matrix(F, sources)
    T = _frame_matrix(F, targets)
    alpha = PglMatrix.from_codes(F, mat_mul(F, T, mat_inverse(F, S)))
    for s, t in zip(sources, targets):
        assert alpha(s) == t
    return alpha if alpha.is_rational(base) else None


def enumerate_pgl(n: int, field: FieldTower, bound: int | None = 10**6) -> list[PglMatrix]:
    """All elements of PGL_{n+1}(field), sorted."""
    if n not in (1, 2):
        raise GeometryError("only PGL_2 and PGL_3 are enumerated")
    q = field.order
    order = q ** (n * (n + 1) // 2)
    for k in range(2, n + 2):
        order *= q**k - 1
    if bound is not None and order > bound:
        raise GeometryError(f"|PGL_{n + 1}(F_{q})| = {order} exceeds the bound {bound}")
    first_rows = _points_of_pn(field, n)
    vectors = list(itertools.product(range(q), repeat=n + 1))
    out: list[PglMatrix] = []

    def extend(rows: list[tuple[int, ...]]):
        if len(rows) == n + 1:
            out.append(PglMatrix(tuple(rows), field))
            return
        for v in vectors:
            if rank(field, rows + [v]) == len(rows) + 1:
                extend(rows + [v])

    for r in first_rows:
        extend([r])
    out.sort()
    return out


def pgl_order(n: int, q: int) -> int:
    """|PGL_{n+1}(F_q)| by the closed formula."""
    order = q ** (n * (n + 1) // 2)
    for k in range(2, n + 2):
        order *= q**k - 1
    return order


# ---------------------------------------------------------------------------
# orbits


def orbit(start: ProjPoint, generators: Sequence[Callable[[ProjPoint], ProjPoint | None]]) -> set[ProjPoint]:
    """Closure of {start} under the generators (worklist)."""
    seen = {start}
    todo = [start]
    while todo:
        p = todo.pop()
        for g in generators:
            img = g(p)
            if img is None:
                raise UndefinedImage(p, "generator undefined at point")
            if img not in seen:
                seen.add(img)
                todo.append(img)
    return seen
