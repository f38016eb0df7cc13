"""Finite fields F_p[y]/f(y) and the Frenkel root-multiplicity check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ContextMismatch, HypothesisError, PreconditionError
from .numtheory import is_prime, multiplicative_order

# polynomials over F_p: lists of ints in [0, p), low to high, no trailing zeros


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim([c % p for c in out])


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _ptrim([c % p for c in a])
    b = _ptrim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    if len(a) < len(b):
        return [], a
    q = [0] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = a[shift + len(b) - 1] * inv_lead % p
        q[shift] = c
        if c:
            for k, d in enumerate(b):
                a[shift + k] = (a[shift + k] - c * d) % p
    return _ptrim(q), _ptrim(a[: len(b) - 1])


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _ptrim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin-style test: gcd(f, y^(p^d) - y) = 1 for every d <= deg(f)/2."""
    f = _ptrim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if f[0] == 0:
        return False
    y = [0, 1]
    power = y
    for _ in range(1, k // 2 + 1):
        power = _ppowmod(power, p, f, p)
        if len(_pgcd(f, _psub(power, y, p), p)) > 1:
            return False
    return True


class FiniteField:
    """F_p[y]/(modulus), modulus monic irreducible of degree k >= 1."""

    tag = "finite_field"

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise PreconditionError(f"characteristic {p} is not prime")
        mod = _ptrim([int(c) % p for c in modulus])
        if len(mod) < 2 or mod[-1] != 1:
            raise PreconditionError("modulus must be monic of degree >= 1")
        if not is_irreducible(mod, p):
            raise PreconditionError(f"modulus {mod} is reducible over F_{p}")
        self.p = p
        self.modulus = tuple(mod)
        self.degree = len(mod) - 1
        self.order = p ** self.degree
        self.zero = FFElem(self, (0,) * self.degree)
        self.one = self.from_int(1)

    @classmethod
    def prime_field(cls, p: int) -> "FiniteField":
        return cls(p, (0, 1))

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash(("ff", self.p, self.modulus))

    def __repr__(self):
        return f"FiniteField(p={self.p}, modulus={list(self.modulus)})"

    def from_int(self, c: int) -> "FFElem":
        return FFElem(self, (c % self.p,) + (0,) * (self.degree - 1))

    def element(self, coeffs: Sequence[int]) -> "FFElem":
        rem = _pdivmod(list(coeffs), self.modulus, self.p)[1]
        return FFElem(self, tuple(rem) + (0,) * (self.degree - len(rem)))

    @property
    def gen(self) -> "FFElem":
        """The class of y."""
        return self.element([0, 1])

    def elements(self):
        from itertools import product

        for cs in product(range(self.p), repeat=self.degree):
            yield FFElem(self, tuple(cs))

    def to_json(self) -> dict:
        return {"p": self.p, "modulus": list(self.modulus)}


class FFElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise ContextMismatch("elements of different finite fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FFElem(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return FFElem(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.field.p
            return FFElem(self.field, tuple(a * other % p for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.element(_pmul(self.coeffs, other.coeffs, self.field.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        p = self.field.p
        r0, r1 = list(self.field.modulus), _ptrim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        inv_c = pow(r1[0], -1, p)
        return self.field.element([c * inv_c for c in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        from .numtheory import divisors

        group = self.field.order - 1
        for d in divisors(group):
            if self ** d == self.field.one:
                return d
        raise ArithmeticError("element order does not divide the group order")

    def __str__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "y" if k == 1 else f"y^{k}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"FFElem({self}, p={self.field.p})"

    def to_json(self) -> dict:
        return {"p": self.field.p, "modulus": list(self.field.modulus), "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "FFElem":
        field = FiniteField(int(data["p"]), data["modulus"])
        return field.element([int(c) for c in data["coeffs"]])


def build_quotient_field(p: int, r: int) -> FiniteField:
    """F_p[y]/Phi_r(y); a field exactly when p generates Z_r^* (r prime, or r = 2)."""
    if not is_prime(p) or p == 2:
        raise PreconditionError(f"p={p} must be an odd prime")
    if not is_prime(r) or r == p:
        raise PreconditionError(f"r={r} must be a prime different from p")
    order = multiplicative_order(p, r)
    if order != r - 1:
        raise HypothesisError(
            f"{p} is not primitive mod {r}: the order of {p} in Z_{r}^* is {order}, not {r - 1}, "
            f"so Phi_{r} is reducible over F_{p}"
        )
    return FiniteField(p, (1,) * r)


def ff_primitive_rth_root(field: FiniteField) -> FFElem:
    """The class of y in F_p[y]/Phi_r(y); it has multiplicative order exactly r."""
    r = field.degree + 1
    if field.modulus != (1,) * r:
        raise PreconditionError("field is not of the form F_p[y]/Phi_r(y)")
    y = field.gen
    assert y ** r == field.one
    return y


@dataclass(frozen=True)
class FrenkelResult:
    multiplicity: int
    support: int
    ok: bool


def _as_field_poly(field: FiniteField, g: Sequence) -> list[FFElem]:
    out = [c if isinstance(c, FFElem) else field.from_int(int(c)) for c in g]
    while out and out[-1].is_zero():
        out.pop()
    return out


def root_multiplicity(field: FiniteField, g: Sequence, a: FFElem) -> int:
    """Number of exact synthetic divisions of g by (x - a)."""
    poly = _as_field_poly(field, g)
    if not poly:
        raise PreconditionError("multiplicity is undefined for the zero polynomial")
    t = 0
    while len(poly) > 1:
        # Horner: quotient coefficients and remainder
        acc = field.zero
        quot = [field.zero] * (len(poly) - 1)
        for k in range(len(poly) - 1, 0, -1):
            acc = acc * a + poly[k]
            quot[k - 1] = acc
        rem = acc * a + poly[0]
        if not rem.is_zero():
            break
        poly, t = quot, t + 1
    return t


def frenkel_check(field: FiniteField, g: Sequence, a: FFElem) -> FrenkelResult:
    poly = _as_field_poly(field, g)
    if not poly:
        raise PreconditionError("g must be nonzero")
    if len(poly) - 1 >= field.p:
        raise PreconditionError(f"deg(g) = {len(poly) - 1} must be below the characteristic {field.p}")
    if not isinstance(a, FFElem):
        a = field.from_int(int(a))
    if a.is_zero():
        raise PreconditionError("the root must be nonzero")
    t = root_multiplicity(field, poly, a)
    s = sum(1 for c in poly if not c.is_zero())
    return FrenkelResult(t, s, t < s)
