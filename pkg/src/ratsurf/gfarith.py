"""Finite fields F_{p^n} with explicit Frobenius and subfield structure.

Elements are stored as integer codes: the code of sum c_i t^i is
sum c_i p^i, so code order is the order of coefficient tuples read
from the top coefficient down. All arithmetic goes through log/exp
tables of a primitive element, built once per field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_BOUND = 4096


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# dense univariate polynomials over F_p, used only to pick moduli


def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _fp_trim(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(out, m, p)


def _fp_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _fp_trim([x % p for x in a])
    b = _fp_trim([x % p for x in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin-style test: f has no factor of degree <= deg(f)/2."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(n // 2):
        # power <- power^p mod f
        acc = [1]
        base = power
        e = p
        while e:
            if e & 1:
                acc = _fp_mulmod(acc, base, f, p)
            base = _fp_mulmod(base, base, f, p)
            e >>= 1
        power = acc
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        g = _fp_gcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


def lex_least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n over F_p, stored constant term first.

    Candidates are compared coefficient by coefficient starting from degree
    n-1 down to the constant term (equivalently: least value of f(p) - p^n).
    Over F_2 this picks t^3+t+1 rather than t^3+t^2+1.
    """
    if n == 1:
        return (0, 1)
    for high in itertools.product(range(p), repeat=n):
        f = list(reversed(high)) + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")


# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FieldTower:
    """The field F_{p^n} = F_p[t]/(modulus)."""

    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.n

    def __repr__(self) -> str:
        return f"F{self.order}"

    # -- tables ------------------------------------------------------------

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        q = self.order
        p, n, m = self.p, self.n, self.modulus
        if n == 1:
            gen = next(g for g in range(1, p) if _prime_order(g, p) == p - 1) if p > 2 else 1
            exp = [1] * (q - 1)
            for i in range(1, q - 1):
                exp[i] = exp[i - 1] * gen % p
        else:
            exp = []
            for cand in range(p, q):
                exp = _power_table(self._digits(cand), m, p, q)
                if exp is not None:
                    break
            else:  # pragma: no cover - every finite field has a primitive element
                raise FieldError("no primitive element")
            exp = [self._from_digits(d) for d in exp]
        log = [0] * q
        for i, c in enumerate(exp):
            log[c] = i
        return exp, log

    @property
    def exp(self) -> list[int]:
        return self._tables[0]

    @property
    def log(self) -> list[int]:
        return self._tables[1]

    def _digits(self, c: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(c % self.p)
            c //= self.p
        return out

    def _from_digits(self, d: Sequence[int]) -> int:
        c = 0
        for x in reversed(d):
            c = c * self.p + x
        return c

    @cached_property
    def _neg_table(self) -> list[int]:
        return [self._from_digits([(-x) % self.p for x in self._digits(c)]) for c in range(self.order)]

    @cached_property
    def _add_table(self) -> list[list[int]] | None:
        if self.p == 2 or self.order > 729:
            return None
        digs = [self._digits(c) for c in range(self.order)]
        p = self.p
        return [[self._from_digits([(x + y) % p for x, y in zip(da, db)]) for db in digs] for da in digs]

    # -- code arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        t = self._add_table
        if t is not None:
            return t[a][b]
        p = self.p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        log = self.log
        return self.exp[(log[a] + log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.exp[(-self.log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % (self.order - 1)]

    def frob(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** (times % self.n))

    def from_int(self, k: int) -> int:
        return k % self.p

    # -- element-level helpers ---------------------------------------------

    def __call__(self, value: int | Sequence[int] | "FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.tower != self:
                raise FieldError("element belongs to another field")
            return value
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        coeffs = list(value)
        if len(coeffs) > self.n:
            raise FieldError("too many coefficients")
        coeffs += [0] * (self.n - len(coeffs))
        return FieldElement(self, self._from_digits([c % self.p for c in coeffs]))

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The class of t (for n = 1 this is t = 0 mod the modulus x)."""
        return FieldElement(self, self.p if self.n > 1 else 0)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.order)]

    def subfield_codes(self, m: int) -> list[int]:
        """Codes of the subfield F_{p^m}, the fixed field of Frobenius^m."""
        if self.n % m:
            raise FieldError(f"F_{self.p}^{m} is not a subfield of {self!r}")
        return [c for c in range(self.order) if self.frob(c, m) == c]

    def primitive_of_subfield(self, m: int) -> int:
        """Generator of the cyclic group F_{p^m}^*, as a code of this field."""
        if self.n % m:
            raise FieldError(f"F_{self.p}^{m} is not a subfield of {self!r}")
        return self.exp[((self.order - 1) // (self.p**m - 1)) % (self.order - 1)]

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldTower":
        tower = make_field(int(d["p"]), int(d["n"]))
        if "modulus" in d and tuple(d["modulus"]) != tower.modulus:
            raise FieldError("modulus does not match the canonical choice")
        return tower

    def format(self, code: int) -> str:
        if self.n == 1:
            return str(code)
        terms = []
        for i, c in enumerate(self._digits(code)):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


def _prime_order(g: int, p: int) -> int:
    k, x = 1, g % p
    while x != 1:
        x = x * g % p
        k += 1
    return k


def _power_table(g: list[int], m: Sequence[int], p: int, q: int) -> list[list[int]] | None:
    """Successive powers of g mod m, or None if g is not primitive."""
    out = []
    cur = [1]
    n = len(m) - 1
    for i in range(q - 1):
        padded = cur + [0] * (n - len(cur))
        if i > 0 and padded == [1] + [0] * (n - 1):
            return None
        out.append(padded)
        cur = _fp_mulmod(cur, g, m, p) or [0]
    if cur + [0] * (n - len(cur)) != [1] + [0] * (n - 1):
        return None
    return out


_FIELD_CACHE: dict[tuple[int, int], FieldTower] = {}


def make_field(p: int, n: int = 1, bound: int | None = DEFAULT_BOUND) -> FieldTower:
    """Build F_{p^n} with the lexicographically least monic irreducible modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if n < 1:
        raise FieldError("extension degree must be positive")
    if bound is not None and p**n > bound:
        raise FieldError(f"field size {p}^{n} exceeds the enumeration bound {bound}")
    key = (p, n)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldTower(p, n, lex_least_irreducible(p, n))
    return _FIELD_CACHE[key]


def parse_field(text: str, bound: int | None = DEFAULT_BOUND) -> FieldTower:
    """Parse "4", "2^2" or "p^n" style descriptors."""
    text = text.strip()
    if "^" in text:
        p, n = (int(x) for x in text.split("^"))
        return make_field(p, n, bound)
    q = int(text)
    for p in range(2, q + 1):
        if q % p == 0:
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return make_field(p, n, bound)
    raise FieldError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    tower: FieldTower
    value: int = field(default=0)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.tower._digits(self.value))

    def _code(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.tower != self.tower:
                raise FieldError("mixing elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.tower.p
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        b = self._code(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.tower, self.tower.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._code(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.tower, self.tower.sub(self.value, b))

    def __rsub__(self, other):
        b = self._code(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.tower, self.tower.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.tower, self.tower.neg(self.value))

    def __mul__(self, other):
        b = self._code(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.tower, self.tower.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._code(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.tower, self.tower.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._code(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.tower, self.tower.div(b, self.value))

    def __pow__(self, e: int):
        return FieldElement(self.tower, self.tower.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.tower, self.tower.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.tower!r}({self.tower.format(self.value)})"


# ---------------------------------------------------------------------------
# Galois structure


def frobenius(x: FieldElement, times: int = 1) -> FieldElement:
    """x -> x^(p^times)."""
    return FieldElement(x.tower, x.tower.frob(x.value, times))


def in_subfield(x: FieldElement, m: int) -> bool:
    return x.tower.frob(x.value, m) == x.value


def galois_orbit(x: FieldElement, m: int = 1) -> list[FieldElement]:
    """Orbit of x under Frobenius^m, starting at x."""
    out = [x]
    y = frobenius(x, m)
    while y != x:
        out.append(y)
        y = frobenius(y, m)
    return out


def minimal_polynomial(x: FieldElement, over: int = 1) -> tuple[FieldElement, ...]:
    """Minimal polynomial of x over F_{p^over}, coefficients constant term first."""
    tower = x.tower
    if tower.n % over:
        raise FieldError(f"degree {over} does not divide {tower.n}")
    poly = [1]
    for root in galois_orbit(x, over):
        nr = tower.neg(root.value)
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = tower.add(nxt[i + 1], c)
            nxt[i] = tower.add(nxt[i], tower.mul(c, nr))
        poly = nxt
    return tuple(FieldElement(tower, c) for c in poly)


def prime_coefficients(poly: Sequence[FieldElement]) -> list[int]:
    """Integer coefficients of a polynomial whose coefficients lie in F_p."""
    out = []
    for c in poly:
        if not in_subfield(c, 1):
            raise FieldError(f"coefficient {c!r} is not in the prime field")
        out.append(c.coeffs[0])
    return out


def norm_one_subgroup(tower: FieldTower, subfield: int) -> set[FieldElement]:
    """{a in L : a * a^g = 1} for L = tower over k = F_{p^subfield}, [L:k] = 2."""
    if tower.n != 2 * subfield:
        raise FieldError(f"{tower!r} is not a quadratic extension of F_{tower.p}^{subfield}")
    return {
        FieldElement(tower, c)
        for c in range(1, tower.order)
        if tower.mul(c, tower.frob(c, subfield)) == 1
    }


@dataclass(frozen=True)
class QuadraticData:
    """L = k(a1) with minimal polynomial t^2 + a t + at = (t - a1)(t - a2)."""

    a1: FieldElement
    a2: FieldElement
    a: FieldElement
    at: FieldElement


def quadratic_generator(tower: FieldTower, subfield: int) -> QuadraticData:
    """Deterministic generator of a quadratic extension with a normalized to
    1 in characteristic 2 and to 0 otherwise."""
    if tower.n % (2 * subfield):
        raise FieldError(f"{tower!r} contains no quadratic extension of F_{tower.p}^{subfield}")
    target = 1 if tower.p == 2 else 0
    for c in range(tower.order):
        if tower.frob(c, subfield) == c:
            continue
        conj = tower.frob(c, subfield)
        if tower.frob(conj, subfield) != c:
            continue
        if tower.add(c, conj) == target:
            a1 = FieldElement(tower, c)
            a2 = FieldElement(tower, conj)
            return QuadraticData(a1, a2, -(a1 + a2), a1 * a2)
    raise FieldError("no normalized quadratic generator")  # pragma: no cover


# ---------------------------------------------------------------------------
# univariate polynomials over a field, as lists of codes (constant first)


def upoly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_divmod(tower: FieldTower, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    a = upoly_trim(list(a))
    b = upoly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = tower.inv(b[-1])
    q = [0] * max(0, len(a) - len(b) + 1)
    while a and len(a) >= len(b):
        c = tower.mul(a[-1], inv)
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = tower.sub(a[shift + i], tower.mul(c, bi))
        upoly_trim(a)
    return q, a


def upoly_mul(tower: FieldTower, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = tower.add(out[i + j], tower.mul(x, y))
    return upoly_trim(out)


def upoly_gcd(tower: FieldTower, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = upoly_trim(list(a))
    b = upoly_trim(list(b))
    while b:
        a, b = b, upoly_divmod(tower, a, b)[1]
    if a:
        inv = tower.inv(a[-1])
        a = [tower.mul(c, inv) for c in a]
    return a


def upoly_eval(tower: FieldTower, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = tower.add(tower.mul(acc, x), c)
    return acc


def upoly_is_irreducible(tower: FieldTower, f: Sequence[int], subfield: int | None = None) -> bool:
    """Irreducibility over F_{p^subfield} (default: the whole tower) of a
    polynomial with coefficients in that subfield."""
    s = tower.n if subfield is None else subfield
    f = upoly_trim(list(f))
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    qs = tower.p**s
    power = [0, 1]
    for _ in range(d // 2):
        power = _upoly_powmod(tower, power, qs, f)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = tower.sub(diff[1], 1)
        if len(upoly_gcd(tower, f, diff)) > 1:
            return False
    return True


def _upoly_powmod(tower: FieldTower, a: list[int], e: int, m: Sequence[int]) -> list[int]:
    acc = [1]
    base = upoly_divmod(tower, a, m)[1]
    while e:
        if e & 1:
            acc = upoly_divmod(tower, upoly_mul(tower, acc, base), m)[1]
        base = upoly_divmod(tower, upoly_mul(tower, base, base), m)[1]
        e >>= 1
    return acc


def monic_irreducibles(tower: FieldTower, degree: int, subfield: int | None = None) -> Iterable[list[int]]:
    """Monic irreducible polynomials of a given degree over F_{p^subfield},
    in lexicographic order of their coefficient tuples (constant first)."""
    s = tower.n if subfield is None else subfield
    codes = sorted(tower.subfield_codes(s))
    for low in itertools.product(codes, repeat=degree):
        f = list(low) + [1]
        if upoly_is_irreducible(tower, f, s):
            yield f


_EMBED_CACHE: dict[tuple[FieldTower, FieldTower], list[int]] = {}


def embedding(src: FieldTower, dst: FieldTower) -> list[int]:
    """Code table of a field embedding src -> dst (src.n | dst.n), sending t
    to the root of src's modulus in dst with the least code."""
    if src.p != dst.p or dst.n % src.n:
        raise FieldError(f"{src!r} does not embed in {dst!r}")
    key = (src, dst)
    if key not in _EMBED_CACHE:
        if src == dst:
            table = list(range(src.order))
        elif src.n == 1:
            table = list(range(src.p))
        else:
            mod = [dst.from_int(c) for c in src.modulus]
            root = next(r for r in range(dst.order) if upoly_eval(dst, mod, r) == 0)
            table = []
            for c in range(src.order):
                acc = 0
                for d in reversed(src._digits(c)):
                    acc = dst.add(dst.mul(acc, root), d)
                table.append(acc)
        _EMBED_CACHE[key] = table
    return _EMBED_CACHE[key]


def embed(x: FieldElement, dst: FieldTower) -> FieldElement:
    return FieldElement(dst, embedding(x.tower, dst)[x.value])
