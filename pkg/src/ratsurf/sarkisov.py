"""Sarkisov link records, verified factorizations of fibration-preserving
involutions into links, and the parity image of a word of links."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .gfarith import FieldTower, make_field, upoly_is_irreducible
from .polys import Poly, RatFunc, gcd
from .projgeom import GeometryError
from .ratmap import ChartMap, RationalMapRep, ambient_ring, chart_compose, compose, compose_all, maps_equal

LINK_TYPES = ("I", "II", "III", "IV", "iso")
PSI_THRESHOLD = 16


class LinkError(GeometryError):
    """Invalid link data or witness polynomials."""


class FactorizationError(GeometryError):
    """A factorization failed its own verification (an internal error)."""


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class SarkisovLink:
    """One link (or an isomorphism, type "iso") between Mori fibre spaces.

    ``conic`` marks type II links between conic fibrations; only those can
    have a nonzero parity image.
    """

    link_type: str
    source: str
    target: str
    base_degree: int = 0
    witness: Union[ChartMap, RationalMapRep, "FibreMap", None] = None
    conic: bool = True

    def __post_init__(self):
        if self.link_type not in LINK_TYPES:
            raise LinkError(f"unknown link type {self.link_type!r}")
        if self.link_type == "II" and self.conic and self.base_degree < 1:
            raise LinkError("a type II link between conic fibrations has a base point")
        if self.link_type in ("I", "III", "IV") and self.witness is not None:
            raise LinkError(f"type {self.link_type} links carry no witness")
        if self.base_degree < 0:
            raise LinkError("negative base point degree")

    def counts_for_psi(self) -> bool:
        return self.link_type == "II" and self.conic and self.base_degree >= PSI_THRESHOLD

    def to_json(self) -> dict:
        out = {"type": self.link_type, "source": self.source, "target": self.target,
               "base_degree": self.base_degree, "conic": self.conic}
        if isinstance(self.witness, ChartMap):
            out["witness"] = self.witness.format()
        elif isinstance(self.witness, (RationalMapRep, FibreMap)):
            out["witness"] = self.witness.format()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "SarkisovLink":
        return cls(data["type"], data["source"], data["target"], int(data.get("base_degree", 0)),
                   None, bool(data.get("conic", True)))


@dataclass(frozen=True)
class SarkisovWord:
    """Links in the order they are applied (first link first)."""

    links: tuple[SarkisovLink, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        for a, b in zip(self.links, self.links[1:]):
            if a.target != b.source:
                raise LinkError(f"link to {a.target} cannot be followed by a link from {b.source}")

    def __add__(self, other: "SarkisovWord") -> "SarkisovWord":
        """Apply self, then other."""
        return SarkisovWord(self.links + other.links)

    def __len__(self) -> int:
        return len(self.links)

    def base_degrees(self) -> list[int]:
        return [l.base_degree for l in self.links if l.link_type == "II" and l.conic]

    def to_json(self) -> list:
        return [l.to_json() for l in self.links]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "SarkisovWord":
        return cls(tuple(SarkisovLink.from_json(d) for d in data))


@dataclass(frozen=True)
class PsiVector:
    """Parity vector in the abelian block of one conic fibration class,
    indexed by base point degree; only degrees at least 16 occur."""

    entries: frozenset[int] = frozenset()
    label: str = "default"

    def __post_init__(self):
        object.__setattr__(self, "entries", frozenset(self.entries))
        if any(d < PSI_THRESHOLD for d in self.entries):
            raise LinkError(f"parity entries below degree {PSI_THRESHOLD}")

    def __add__(self, other: "PsiVector") -> "PsiVector":
        if other.label != self.label:
            raise LinkError("parity vectors from different classes")
        return PsiVector(self.entries ^ other.entries, self.label)

    def is_zero(self) -> bool:
        return not self.entries

    def to_json(self) -> dict[str, int]:
        return {str(d): 1 for d in sorted(self.entries)}


def psi_image(word_or_degrees: SarkisovWord | Iterable[int], label: str = "default") -> PsiVector:
    """Parity of the number of type II conic-fibration links of each base
    point degree at least 16."""
    if isinstance(word_or_degrees, SarkisovWord):
        degrees = [l.base_degree for l in word_or_degrees.links if l.counts_for_psi()]
    else:
        degrees = [int(d) for d in word_or_degrees]
        if any(d < 0 for d in degrees):
            raise LinkError("negative base point degree")
    counts = Counter(d for d in degrees if d >= PSI_THRESHOLD)
    return PsiVector(frozenset(d for d, c in counts.items() if c % 2), label)


def degree_word(degrees: Iterable[int], label: str = "C") -> SarkisovWord:
    """A word of type II links from a class to itself with the given base
    point degrees (bookkeeping only, no witnesses)."""
    return SarkisovWord(tuple(SarkisovLink("II", label, label, d) for d in degrees))


# ---------------------------------------------------------------------------
# Hirzebruch surfaces


def _univariate(field: FieldTower, coeffs: Sequence[int], var: int = 1) -> Poly:
    """sum coeffs[j] * z^j as a polynomial in the chart variables (y, z)."""
    terms = {}
    for j, c in enumerate(coeffs):
        if c:
            e = [0, 0]
            e[var] = j
            terms[tuple(e)] = c
    return Poly(field, 2, terms)


def _check_witnesses(field: FieldTower, degrees: Sequence[int], polys: Sequence[Sequence[int]]) -> None:
    if len(degrees) != len(polys):
        raise LinkError("one witness polynomial per base point expected")
    for d, f in zip(degrees, polys):
        f = list(f)
        while f and f[-1] == 0:
            f.pop()
        if len(f) - 1 != d:
            raise LinkError(f"witness {f} does not have degree {d}")
        if f[0] == 0:
            raise LinkError(f"witness {f} vanishes at [0:1]")
        if not upoly_is_irreducible(field, f):
            raise LinkError(f"witness {f} is not irreducible")
    for (i, f), (j, g) in itertools.combinations(enumerate(polys), 2):
        if not gcd(_univariate(field, f), _univariate(field, g)).is_constant():
            raise LinkError(f"witnesses {i} and {j} have a common factor")


def hirzebruch_indices(n: int, degrees: Sequence[int]) -> list[int]:
    """Indices of the Hirzebruch surfaces visited by the links: |n - d_i|
    for the partial sums d_i, starting at n."""
    out, d = [n], 0
    for di in degrees:
        d += di
        out.append(abs(n - d))
    return out


def factor_hirzebruch_involution(n: int, degrees: Sequence[int], witnesses: Sequence[Sequence[int]],
                                 field: FieldTower) -> SarkisovWord:
    """Factor the involution (y, z) -> (P(z)/y, z) of F_n, P the product of
    the witnesses, into type II links between Hirzebruch surfaces.

    Witnesses are univariate coefficient lists (constant term first) in the
    chart coordinate z, irreducible, pairwise coprime and nonzero at z = 0.
    The composition of the links is checked to equal the involution.
    """
    degrees = [int(d) for d in degrees]
    if n < 2:
        raise LinkError("n must be at least 2")
    if any(d < 1 for d in degrees) or sum(degrees) != 2 * n:
        raise LinkError(f"degrees {degrees} do not sum to 2n = {2 * n}")
    _check_witnesses(field, degrees, witnesses)
    y = RatFunc(Poly.var(field, 2, 0))
    z = RatFunc(Poly.var(field, 2, 1))
    index = hirzebruch_indices(n, degrees)
    links, maps = [], []
    d_prev = 0
    P = RatFunc(Poly.from_code(field, 2, 1))
    for i, (di, f) in enumerate(zip(degrees, witnesses)):
        Pi = RatFunc(_univariate(field, f))
        P = P * Pi
        d = d_prev + di
        if d <= n:
            m = ChartMap(y / Pi, z)
        elif d_prev <= n:
            m = ChartMap(Pi / y, z)
        else:
            m = ChartMap(Pi * y, z)
        maps.append(m)
        links.append(SarkisovLink("II", f"F{index[i]}", f"F{index[i + 1]}", di, m))
        d_prev = d
    phi = ChartMap(P / y, z)
    composed = chart_compose(list(reversed(maps)))
    if composed != phi:
        raise FactorizationError(f"links compose to {composed!r}, expected {phi!r}")
    if phi.compose(phi) != ChartMap.identity(field):
        raise FactorizationError("the involution does not square to the identity")
    return SarkisovWord(tuple(links))


def hirzebruch_involution(n: int, witnesses: Sequence[Sequence[int]], field: FieldTower) -> ChartMap:
    y = RatFunc(Poly.var(field, 2, 0))
    P = RatFunc(Poly.from_code(field, 2, 1))
    for f in witnesses:
        P = P * RatFunc(_univariate(field, f))
    return ChartMap(P / y, RatFunc(Poly.var(field, 2, 1)))


# ---------------------------------------------------------------------------
# fibration-preserving maps of P^1 x P^1


def _form(field: FieldTower, coeffs: Sequence[int]) -> Poly:
    """Binary form sum coeffs[j] s^j t^(d-j) in variables (s, t)."""
    d = len(coeffs) - 1
    return Poly(field, 2, {(j, d - j): c for j, c in enumerate(coeffs) if c})


def _proportional(a: Poly, b: Poly) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return a.monic() == b.monic()


@dataclass(frozen=True)
class FibreMap:
    """The map (u, v) -> ([u0 A0 : u1 A1], [v0 B0 : v1 B1]), followed by the
    factor exchange when ``swap`` is set, where A0, A1, B0, B1 are binary
    forms evaluated at (s, t) = (u0 v0, u1 v1) with A0 B0 = A1 B1 up to a
    constant. Such maps preserve every fibre of [u0 v0 : u1 v1]."""

    A0: Poly
    A1: Poly
    B0: Poly
    B1: Poly
    swap: bool = False

    def __post_init__(self):
        if not _proportional(self.A0 * self.B0, self.A1 * self.B1):
            raise LinkError("the map does not preserve the fibres of [u0 v0 : u1 v1]")

    @property
    def field(self) -> FieldTower:
        return self.A0.field

    @classmethod
    def identity(cls, field: FieldTower) -> "FibreMap":
        one = Poly.from_code(field, 2, 1)
        return cls(one, one, one, one)

    @classmethod
    def exchange(cls, field: FieldTower) -> "FibreMap":
        one = Poly.from_code(field, 2, 1)
        return cls(one, one, one, one, True)

    def compose(self, other: "FibreMap") -> "FibreMap":
        """self o other."""
        A0, A1, B0, B1 = self.A0, self.A1, self.B0, self.B1
        if other.swap:
            A0, A1, B0, B1 = B0, B1, A0, A1
        # the common factor other.A0 * other.B0 of the new (s, t) cancels
        return FibreMap(other.A0 * A0, other.A1 * A1, other.B0 * B0, other.B1 * B1,
                        self.swap != other.swap)

    def __matmul__(self, other: "FibreMap") -> "FibreMap":
        return self.compose(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FibreMap) or self.swap != other.swap:
            return False
        return ((self.A0 * other.A1 - self.A1 * other.A0).is_zero()
                and (self.B0 * other.B1 - self.B1 * other.B0).is_zero())

    def __hash__(self) -> int:
        return hash(self.swap)

    def to_rep(self) -> RationalMapRep:
        F = self.field
        R = ambient_ring(F, (1, 1))
        u0, u1, v0, v1 = R.gens
        st = [u0 * v0, u1 * v1]

        def ev(f: Poly) -> Poly:
            return f.substitute(st)
        first = [u0 * ev(self.A0), u1 * ev(self.A1)]
        second = [v0 * ev(self.B0), v1 * ev(self.B1)]
        if self.swap:
            first, second = second, first
        return RationalMapRep(F, (1, 1), (1, 1), [first, second])

    def format(self) -> str:
        return self.to_rep().format()


def ql_involution(field: FieldTower, P1: Poly, P2: Poly) -> FibreMap:
    """([v0 P1 : v1 P2], [u0 P2 : u1 P1]) with P evaluated at (u0 v0, u1 v1)."""
    return FibreMap(P2, P1, P1, P2, True)


def ql_link(field: FieldTower, T1: Poly, T2: Poly) -> FibreMap:
    """([u0 T2 : u1 T1], [v0 T1 : v1 T2])."""
    return FibreMap(T2, T1, T1, T2)


def _check_forms(field: FieldTower, witnesses: Sequence[tuple[Sequence[int], Sequence[int]]]) -> list[tuple[Poly, Poly]]:
    if not witnesses:
        raise LinkError("the involution needs at least one base point")
    out = []
    for T1, T2 in witnesses:
        if len(T1) != len(T2):
            raise LinkError("T_i1 and T_i2 must have the same degree")
        if len(T1) < 2:
            raise LinkError("constant witnesses give no base point")
        for T in (T1, T2):
            if T[0] == 0 or T[-1] == 0:
                raise LinkError(f"witness {list(T)} vanishes on a singular fibre s t = 0")
        out.append((_form(field, T1), _form(field, T2)))
    flat = [f for pair in out for f in pair]
    for (i, f), (j, g) in itertools.combinations(enumerate(flat), 2):
        if not gcd(f, g).is_constant():
            raise LinkError(f"witness forms {i} and {j} have a common factor")
    return out


def factor_ql_involution(field: FieldTower, witnesses: Sequence[tuple[Sequence[int], Sequence[int]]],
                         full_check: bool | None = None) -> SarkisovWord:
    """Factor the involution ([v0 P1 : v1 P2], [u0 P2 : u1 P1]) of Q^L, with
    P_j the product of the T_ij, as alpha o psi_r o ... o psi_1 where
    psi_i = ([u0 T_i2 : u1 T_i1], [v0 T_i1 : v1 T_i2]) and alpha exchanges
    the factors.

    Witness pairs (T_i1, T_i2) are binary forms over ``field`` given by
    coefficient lists (coefficient of s^j t^(d-j) at position j). The
    identity is verified in the fibre-preserving normal form and, when
    ``full_check`` (default: total degree at most 4), also by composing the
    maps of P^1 x P^1.
    """
    forms = _check_forms(field, witnesses)
    one = Poly.from_code(field, 2, 1)
    P1, P2 = one, one
    for T1, T2 in forms:
        P1, P2 = P1 * T1, P2 * T2
    psi = ql_involution(field, P1, P2)
    links_maps = [ql_link(field, T1, T2) for T1, T2 in forms]
    alpha = FibreMap.exchange(field)
    total = alpha
    for m in reversed(links_maps):
        total = total @ m
    if total != psi:
        raise FactorizationError("alpha o psi_r o ... o psi_1 differs from the involution")
    if not psi @ psi == FibreMap.identity(field):
        raise FactorizationError("the involution does not square to the identity")
    deg = sum(len(w[0]) - 1 for w in witnesses)
    if full_check is None:
        full_check = deg <= 4
    if full_check:
        reps = [alpha.to_rep()] + [m.to_rep() for m in reversed(links_maps)]
        rep_psi = psi.to_rep()
        if not maps_equal(compose_all(reps), rep_psi):
            raise FactorizationError("composition of the link maps differs from the involution")
        ident = RationalMapRep.identity(field, (1, 1))
        if not maps_equal(compose(rep_psi, rep_psi), ident):
            raise FactorizationError("the involution does not square to the identity")
    links = [SarkisovLink("II", "S", "S", 2 * (len(w[0]) - 1), m) for w, m in zip(witnesses, links_maps)]
    links.append(SarkisovLink("iso", "S", "S", 0, alpha, conic=False))
    return SarkisovWord(tuple(links))


def galois_compatible(k: FieldTower, L: FieldTower, witnesses: Sequence[tuple[Sequence[int], Sequence[int]]]) -> bool:
    """True when each T_i2 is the conjugate of T_i1 over k, so that the
    involution commutes with the twisted Frobenius of Q^L."""
    return all(list(T2) == [L.frob(c, k.n) for c in T1] for T1, T2 in witnesses)


def twisted_involution(b1: int, b2: int, P1: Poly, P2: Poly, corrected: bool = True) -> RationalMapRep:
    """The involution ([v0 U + v1 V : v0 W - v1 U], [u0 U + u1 V : u0 W - u1 U])
    with U = b2 P1 - b1 P2, V = b1^2 P2 - b2^2 P1, W = P1 - P2 evaluated at
    t = (u0 - b1 u1)(v0 - b2 v1) and s = (u0 - b2 u1)(v0 - b1 v1).

    With ``corrected`` false, s = (u0 - b2 v1)(v0 - b1 v1) instead; that
    product is not bihomogeneous, so the construction raises MapError.
    P1, P2 are binary forms in (t, s) over the field of b1, b2.
    """
    F = P1.field
    R = ambient_ring(F, (1, 1))
    u0, u1, v0, v1 = R.gens

    def c(x: int) -> Poly:
        return Poly.from_code(F, 4, x)
    t = (u0 - c(b1) * u1) * (v0 - c(b2) * v1)
    s = ((u0 - c(b2) * u1) if corrected else (u0 - c(b2) * v1)) * (v0 - c(b1) * v1)
    p1, p2 = P1.substitute([t, s]), P2.substitute([t, s])
    U = c(b2) * p1 - c(b1) * p2
    V = c(F.mul(b1, b1)) * p2 - c(F.mul(b2, b2)) * p1
    W = p1 - p2
    return RationalMapRep(F, (1, 1), (1, 1), [[v0 * U + v1 * V, v0 * W - v1 * U],
                                              [u0 * U + u1 * V, u0 * W - u1 * U]])


def conjugated_involution(b1: int, b2: int, P1: Poly, P2: Poly) -> RationalMapRep:
    """gamma o phi o gamma^-1 with gamma = ([[b2, b1], [1, 1]], [[b1, b2], [1, 1]])
    and phi = ([v0 P1 : v1 P2], [u0 P2 : u1 P1])."""
    F = P1.field
    R = ambient_ring(F, (1, 1))
    u0, u1, v0, v1 = R.gens

    def c(x: int) -> Poly:
        return Poly.from_code(F, 4, x)

    def lin(M, a, b):
        return [c(M[0][0]) * a + c(M[0][1]) * b, c(M[1][0]) * a + c(M[1][1]) * b]
    one = 1
    g1 = [[b2, b1], [one, one]]
    g2 = [[b1, b2], [one, one]]
    gamma = RationalMapRep(F, (1, 1), (1, 1), [lin(g1, u0, u1), lin(g2, v0, v1)])
    inv1 = [[1, F.neg(b1)], [F.neg(1), b2]]
    inv2 = [[1, F.neg(b2)], [F.neg(1), b1]]
    gamma_inv = RationalMapRep(F, (1, 1), (1, 1), [lin(inv1, u0, u1), lin(inv2, v0, v1)])
    phi = ql_involution(F, P1, P2).to_rep()
    return compose(gamma, compose(phi, gamma_inv))


# ---------------------------------------------------------------------------
# witness choice and the parity image of the automorphism groups


def _irreducibles(field: FieldTower, degree: int, sub: int | None = None):
    """Monic irreducibles of the given degree with nonzero constant term; with
    ``sub`` only those not defined over the subfield of that degree."""
    codes = list(range(field.order))
    subcodes = set(field.subfield_codes(sub)) if sub else None
    for low in itertools.product(codes, repeat=degree):
        if low[0] == 0:
            continue
        f = list(low) + [1]
        if subcodes is not None and all(c in subcodes for c in f):
            continue
        if upoly_is_irreducible(field, f):
            yield f


_SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1)]


def hirzebruch_witnesses(degrees: Sequence[int]) -> tuple[FieldTower, list[list[int]]]:
    """Smallest listed field with distinct irreducible witnesses of the given
    degrees, and the witnesses (least in lexicographic order)."""
    need = Counter(degrees)
    for p, n in _SMALL_FIELDS:
        F = make_field(p, n)
        pools = {}
        for d, c in need.items():
            pools[d] = list(itertools.islice(_irreducibles(F, d), c))
        if all(len(pools[d]) == c for d, c in need.items()):
            used = Counter()
            out = []
            for d in degrees:
                out.append(pools[d][used[d]])
                used[d] += 1
            return F, out
    raise LinkError(f"no small field has witnesses of degrees {list(degrees)}")


def ql_witnesses(degrees: Sequence[int]) -> tuple[FieldTower, FieldTower, list[tuple[list[int], list[int]]]]:
    """Base field k, quadratic extension L and conjugate witness pairs
    (T, T^g) of degree d/2 for each even base point degree d."""
    if any(d % 2 or d < 2 for d in degrees):
        raise LinkError("base points on the exceptional pair have even degree")
    need = Counter(d // 2 for d in degrees)
    for p, n in _SMALL_FIELDS:
        k = make_field(p, n)
        if p ** (2 * n) > 4096:
            continue
        L = make_field(p, 2 * n)
        pools = {}
        for m, c in need.items():
            found: list[list[int]] = []
            for f in _irreducibles(L, m, sub=n):
                g = [L.frob(x, n) for x in f]
                if any(f == h or g == h for h in found):
                    continue
                found.append(f)
                if len(found) == c:
                    break
            pools[m] = found
        if all(len(pools[m]) == c for m, c in need.items()):
            used = Counter()
            out = []
            for d in degrees:
                m = d // 2
                f = pools[m][used[m]]
                used[m] += 1
                out.append((f, [L.frob(x, n) for x in f]))
            return k, L, out
    raise LinkError(f"no small field has witnesses of degrees {list(degrees)}")


def aut_psi_image(kind: str, degrees: Sequence[int], label: str = "default") -> tuple[PsiVector, SarkisovWord]:
    """Parity image of the automorphism group of a conic fibration obtained
    by blowing up F_n (kind "F", sum of degrees 2n, n >= 2) or the
    Q^L-type surface (kind "S", even degrees) in points of the given
    degrees: factor the fibration's involution into links and take the
    image of the word. Raises if it differs from the image of the degrees."""
    degrees = [int(d) for d in degrees]
    if not degrees or any(d < 1 for d in degrees):
        raise LinkError("positive base point degrees expected")
    if kind == "F":
        if sum(degrees) % 2 or sum(degrees) < 4:
            raise LinkError("degrees must sum to 2n with n >= 2")
        F, polys = hirzebruch_witnesses(degrees)
        word = factor_hirzebruch_involution(sum(degrees) // 2, degrees, polys, F)
    elif kind == "S":
        k, L, pairs = ql_witnesses(degrees)
        word = factor_ql_involution(L, pairs)
        if not galois_compatible(k, L, pairs):
            raise FactorizationError("witnesses are not Galois conjugate")  # pragma: no cover
    else:
        raise LinkError(f"unknown fibration kind {kind!r}")
    image = psi_image(word, label)
    if image != psi_image(degrees, label):
        raise FactorizationError("word image differs from the degree image")  # pragma: no cover
    return image, word
