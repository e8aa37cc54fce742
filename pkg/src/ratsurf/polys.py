"""Sparse multivariate polynomials over a finite field.

Coefficients are integer codes of a FieldTower. The gcd is the classical
recursive one: content/primitive-part splitting in a main variable and a
primitive pseudo-remainder sequence, which stays exact over any field.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .gfarith import FieldElement, FieldTower

Exp = tuple[int, ...]


def _add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldTower, nvars: int, terms: Mapping[Exp, int] | None = None):
        self.field = field
        self.nvars = nvars
        self.terms: dict[Exp, int] = {e: c for e, c in (terms or {}).items() if c}
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def const(cls, field: FieldTower, nvars: int, c: int | FieldElement) -> "Poly":
        code = _code(field, c)
        return cls(field, nvars, {(0,) * nvars: code} if code else {})

    @classmethod
    def from_code(cls, field: FieldTower, nvars: int, code: int) -> "Poly":
        """Constant polynomial from a raw field code."""
        return cls(field, nvars, {(0,) * nvars: code} if code else {})

    @classmethod
    def var(cls, field: FieldTower, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    def _like(self, terms: Mapping[Exp, int]) -> "Poly":
        return Poly(self.field, self.nvars, terms)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field or other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.const(self.field, self.nvars, other)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = self._coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.field
        return self._like({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, FieldElement)):
            return self.scale(_code(self.field, other))
        other = self._coerce(other)
        F = self.field
        out: dict[Exp, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return self._like(out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        F = self.field
        if c == 0:
            return self._like({})
        return self._like({e: F.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure -----------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def block_degree(self, block: Sequence[int]) -> set[int]:
        return {sum(e[i] for i in block) for e in self.terms}

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def leading(self) -> tuple[Exp, int]:
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading()[1]))

    def coefficients_in(self, i: int) -> dict[int, "Poly"]:
        """Coefficients of self as a polynomial in variable i."""
        out: dict[int, dict[Exp, int]] = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(k, {})[e2] = c
        return {k: self._like(t) for k, t in out.items()}

    def evaluate(self, values: Sequence[int]) -> int:
        """Evaluate at a tuple of field codes."""
        F = self.field
        acc = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    if v == 0:
                        term = 0
                        break
                    term = F.mul(term, F.pow(v, k))
            if term:
                acc = F.add(acc, term)
        return acc

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i by images[i]; images share one ring."""
        if len(images) != self.nvars:
            raise ValueError("wrong number of substitution images")
        target = images[0]
        result = Poly(target.field, target.nvars)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        for e, c in self.terms.items():
            term = Poly.from_code(target.field, target.nvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def frobenius(self, times: int = 1) -> "Poly":
        F = self.field
        return self._like({e: F.frob(c, times) for e, c in self.terms.items()})

    def derivative(self, i: int) -> "Poly":
        F = self.field
        out: dict[Exp, int] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k % F.p == 0:
                continue
            e2 = e[:i] + (k - 1,) + e[i + 1 :]
            out[e2] = F.add(out.get(e2, 0), F.mul(c, F.from_int(k)))
        return self._like(out)

    # -- division and gcd ----------------------------------------------------

    def exact_div(self, other: "Poly") -> "Poly | None":
        """Quotient if other divides self exactly, else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.field
        le, lc = other.leading()
        inv = F.inv(lc)
        rem = dict(self.terms)
        quot: dict[Exp, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            d = tuple(x - y for x, y in zip(e, le))
            if min(d) < 0:
                return None
            qc = F.mul(c, inv)
            quot[d] = qc
            for e2, c2 in other.terms.items():
                k = _add_exp(d, e2)
                v = F.sub(rem.get(k, 0), F.mul(qc, c2))
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return self._like(quot)

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, FieldElement)):
            return self.scale(self.field.inv(_code(self.field, other)))
        q = self.exact_div(self._coerce(other))
        if q is None:
            raise ValueError("inexact polynomial division")
        return q

    def __repr__(self) -> str:
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = self.field.format(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        return " + ".join(parts)

    def to_dict(self) -> list[dict]:
        return [
            {"exp": list(e), "coeff": list(self.field._digits(self.terms[e]))}
            for e in sorted(self.terms)
        ]


def _code(field: FieldTower, c) -> int:
    if isinstance(c, FieldElement):
        if c.tower != field:
            raise ValueError("constant from another field")
        return c.value
    if isinstance(c, int):
        return c % field.p
    raise TypeError(f"cannot use {c!r} as a coefficient")


def content(f: Poly, i: int) -> Poly:
    """gcd of the coefficients of f as a polynomial in variable i."""
    g = Poly(f.field, f.nvars)
    for c in f.coefficients_in(i).values():
        g = gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return g
    return g


def _prem(a: Poly, b: Poly, i: int) -> Poly:
    """Pseudo-remainder of a by b in variable i."""
    db = b.degree_in(i)
    lb = b.coefficients_in(i)[db]
    xi = Poly.var(a.field, a.nvars, i)
    r = a
    while not r.is_zero() and r.degree_in(i) >= db:
        dr = r.degree_in(i)
        lr = r.coefficients_in(i)[dr]
        r = r * lb - lr * (xi ** (dr - db)) * b
    return r


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic (lex leading coefficient 1) greatest common divisor."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return Poly.const(f.field, f.nvars, 1)
    vs = f.variables() | g.variables()
    i = max(vs)
    if i not in f.variables():
        return gcd(f, content(g, i))
    if i not in g.variables():
        return gcd(content(f, i), g)
    cf, cg = content(f, i), content(g, i)
    c = gcd(cf, cg)
    a, b = f / cf, g / cg
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    while True:
        r = _prem(a, b, i)
        if r.is_zero():
            break
        if r.degree_in(i) == 0:
            return c.monic()
        a, b = b, r / content(r, i)
    return (c * (b / content(b, i))).monic()


def gcd_many(polys: Iterable[Poly]) -> Poly:
    polys = list(polys)
    g = Poly(polys[0].field, polys[0].nvars)
    for p in polys:
        g = gcd(g, p)
        if g.is_constant() and not g.is_zero():
            break
    return g


class PolyRing:
    """Convenience holder of a field and named generators."""

    def __init__(self, field: FieldTower, names: Sequence[str]):
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.gens = tuple(Poly.var(field, self.nvars, i) for i in range(self.nvars))

    def __call__(self, c) -> Poly:
        return Poly.const(self.field, self.nvars, c)

    def zero(self) -> Poly:
        return Poly(self.field, self.nvars)

    def one(self) -> Poly:
        return self(1)


class RatFunc:
    """A reduced fraction num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly.const(num.field, num.nvars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            g = gcd(num, den)
            if not (g.is_constant()):
                num, den = num / g, den / g
            lc = den.leading()[1]
            if lc != 1:
                inv = num.field.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc(Poly.const(self.num.field, self.num.nvars, other))

    def __add__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num**k, self.den**k, reduce=False)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def substitute(self, images: Sequence["RatFunc"]) -> "RatFunc":
        return _subst_rf(self.num, images) / _subst_rf(self.den, images)

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    def __repr__(self) -> str:
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        if self.den.is_constant():
            return self.num.format(names)
        return f"({self.num.format(names)})/({self.den.format(names)})"


def _subst_rf(p: Poly, images: Sequence[RatFunc]) -> RatFunc:
    # Common-denominator substitution: homogenize each variable's power.
    result: RatFunc | None = None
    cache: dict[tuple[int, int], RatFunc] = {}
    for e, c in p.terms.items():
        term = RatFunc(Poly.from_code(images[0].num.field, images[0].num.nvars, c))
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = images[i] ** k
                term = term * cache[key]
        result = term if result is None else result + term
    if result is None:
        return RatFunc(Poly(images[0].num.field, images[0].num.nvars))
    return result
