"""Exact arithmetic in Z[zeta_n] and Q(zeta_n).

Elements are dense coefficient vectors in the power basis
1, z, ..., z^(phi(n)-1), always reduced modulo the cyclotomic polynomial.
Coefficients are Python ints, or ``Fraction`` when the element is not
integral.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Sequence, Union

from .errors import ContextMismatch, PreconditionError
from .numtheory import divisors, euler_phi, is_prime, multiplicative_order

if TYPE_CHECKING:
    from .finite_field import FFElem, FiniteField

Scalar = Union[int, Fraction]


def _norm_scalar(c: Scalar) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _trim(poly: list) -> list:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_divmod(num: Sequence[Scalar], den: Sequence[Scalar]) -> tuple[list, list]:
    """Division over Q; coefficient lists are low-to-high."""
    num = _trim([Fraction(c) for c in num])
    den = _trim([Fraction(c) for c in den])
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [], num
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1] / lead
        quot[shift] = c
        if c:
            for k, d in enumerate(den):
                num[shift + k] -= c * d
    return _trim(quot), _trim(num[: len(den) - 1])


def _poly_mul(a: Sequence[Scalar], b: Sequence[Scalar]) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Scalar], b: Sequence[Scalar]) -> list:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_n, by dividing x^n - 1 by Phi_d for d | n, d < n."""
    if n < 1:
        raise PreconditionError("cyclotomic polynomial needs n >= 1")
    num: list = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d == n:
            continue
        q, rem = _poly_divmod(num, cyclotomic_polynomial(d))
        if rem:
            raise ArithmeticError(f"Phi_{d} does not divide x^{n}-1 exactly")
        num = q
    coeffs = tuple(int(c) for c in num)
    if any(Fraction(c) != c2 for c, c2 in zip(coeffs, num)):
        raise ArithmeticError("non-integral cyclotomic coefficient")
    return coeffs


class CyclotomicContext:
    """The ring Z[zeta_n] (and its fraction field) with zeta_n = z mod Phi_n."""

    tag = "cyclotomic"

    def __init__(self, n: int):
        if n < 2:
            raise PreconditionError("cyclotomic context needs n >= 2")
        self.n = n
        self.phi_n = euler_phi(n)
        self.cyclo_poly = cyclotomic_polynomial(n)
        assert len(self.cyclo_poly) == self.phi_n + 1 and self.cyclo_poly[-1] == 1
        q, rem = _poly_divmod([-1] + [0] * (n - 1) + [1], self.cyclo_poly)
        if rem:
            raise ArithmeticError(f"Phi_{n} does not divide x^{n}-1")
        # rows z^k mod Phi_n for k in [phi, 2*phi - 2]
        phi = self.phi_n
        self._fold: list[tuple[int, ...]] = []
        cur = [-c for c in self.cyclo_poly[:phi]]  # z^phi
        for _ in range(max(phi - 1, 0)):
            self._fold.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for k in range(phi):
                    cur[k] -= top * self.cyclo_poly[k]
        self._powers = [self._reduce_monomial(k) for k in range(n)]
        self.zero = CycElem(self, (0,) * phi)
        self.one = self.from_int(1)

    def __repr__(self):
        return f"CyclotomicContext(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicContext) and other.n == self.n

    def __hash__(self):
        return hash(("cyc", self.n))

    def __reduce__(self):
        return (cyclotomic_context, (self.n,))

    def _reduce_monomial(self, k: int) -> tuple[int, ...]:
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        return self._reduce(coeffs)

    def _reduce(self, coeffs: Sequence[Scalar]) -> tuple:
        phi = self.phi_n
        if len(coeffs) <= phi:
            return tuple(_norm_scalar(c) for c in coeffs) + (0,) * (phi - len(coeffs))
        out = list(coeffs[:phi])
        extra = list(coeffs[phi:])
        if len(extra) > len(self._fold):
            # long input: reduce by polynomial division instead of the fold table
            _, rem = _poly_divmod(coeffs, self.cyclo_poly)
            return self._reduce(rem)
        for c, row in zip(extra, self._fold):
            if c:
                for k, v in enumerate(row):
                    if v:
                        out[k] += c * v
        return tuple(_norm_scalar(c) for c in out)

    def element(self, coeffs: Iterable[Scalar]) -> "CycElem":
        """Element from any-length low-to-high coefficients, reduced mod Phi_n."""
        return CycElem(self, self._reduce([_norm_scalar(Fraction(c) if isinstance(c, str) else c)
                                           for c in coeffs]))

    def from_int(self, c: Scalar) -> "CycElem":
        return CycElem(self, (_norm_scalar(c),) + (0,) * (self.phi_n - 1))

    def root_power(self, k: int) -> "CycElem":
        return CycElem(self, self._powers[k % self.n])

    @property
    def zeta(self) -> "CycElem":
        return self.root_power(1)

    def parse(self, text: str) -> "CycElem":
        return parse_element(self, text)


@lru_cache(maxsize=64)
def cyclotomic_context(n: int) -> CyclotomicContext:
    return CyclotomicContext(n)


class CycElem:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CyclotomicContext, coeffs: tuple):
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other) -> "CycElem":
        if isinstance(other, CycElem):
            if other.ctx.n != self.ctx.n:
                raise ContextMismatch(f"Q(zeta_{self.ctx.n}) vs Q(zeta_{other.ctx.n})")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(self.ctx, tuple(_norm_scalar(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(self.ctx, tuple(_norm_scalar(a - b) for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycElem(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.ctx, tuple(_norm_scalar(a * other) for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(self.ctx, self.ctx._reduce(_poly_mul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_n)")
            return CycElem(self.ctx, tuple(_norm_scalar(Fraction(a) / other) for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.from_int(other)
        if not isinstance(other, CycElem):
            return NotImplemented
        return self.ctx.n == other.ctx.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.n, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def conj(self) -> "CycElem":
        """Complex conjugation, the automorphism z -> z^(n-1)."""
        out = self.ctx.zero
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + self.ctx.root_power(-k) * c
        return out

    def inverse(self) -> "CycElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
        # extended Euclid of the representative against Phi_n over Q
        r0, r1 = [Fraction(c) for c in self.ctx.cyclo_poly], _trim([Fraction(c) for c in self.coeffs])
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ArithmeticError("representative shares a factor with Phi_n")
        inv = self.ctx.element([c / r1[0] for c in s1])
        assert (inv * self) == self.ctx.one
        return inv

    def norm(self) -> Scalar:
        """Field norm to Q: determinant of multiplication by self on the power basis."""
        phi = self.ctx.phi_n
        rows = []
        basis_img = self
        for _ in range(phi):
            rows.append([Fraction(c) for c in basis_img.coeffs])
            basis_img = basis_img * self.ctx.zeta
        return _norm_scalar(_fraction_det(rows))

    def divides(self, a: "CycElem") -> bool:
        return cyc_divides(self, a)

    def evaluate_mod(self, root: int, q: int) -> int:
        """Image under z -> root in F_q (root must have order n mod q)."""
        acc = 0
        for c in reversed(self.coeffs):
            if isinstance(c, Fraction):
                if c.denominator % q == 0:
                    raise PreconditionError(f"denominator divisible by {q}")
                c = c.numerator * pow(c.denominator, -1, q)
            acc = (acc * root + c) % q
        return acc

    def __repr__(self):
        return f"CycElem(n={self.ctx.n}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)

    def to_json(self) -> dict:
        return {"n": self.ctx.n, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycElem":
        ctx = cyclotomic_context(int(data["n"]))
        return ctx.element(Fraction(c) for c in data["coeffs"])


def _fraction_det(rows: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    size = len(m)
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, size):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, size):
                    m[r][k] -= f * m[c][k]
    return det


# ---------------------------------------------------------------------------
# element grammar:  "1 - z^3", "3z^2 + 2*z - 5", "-1/2*z"

_TERM = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(\*?\s*z(?:\s*\^\s*(\d+))?)?\s*"
)


def parse_element(ctx: CyclotomicContext, text: str) -> CycElem:
    s = text.strip()
    if not s:
        raise PreconditionError("empty element expression")
    pos = 0
    coeffs: dict[int, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise PreconditionError(f"cannot parse element {text!r} at offset {pos}")
        sign, num, zpart, exp = m.groups()
        if sign is None and not first:
            raise PreconditionError(f"missing operator in {text!r} at offset {pos}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if zpart is None else (int(exp) if exp is not None else 1)
        if zpart is not None and zpart.lstrip().startswith("*") and num is None:
            raise PreconditionError(f"dangling '*' in {text!r}")
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
        pos = m.end()
        first = False
    out = ctx.zero
    for k, c in coeffs.items():
        out = out + ctx.root_power(k) * c
    return out


def format_element(a: CycElem) -> str:
    terms = []
    for k, c in enumerate(a.coeffs):
        if not c:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if k == 0:
            body = str(mag)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            if mag == 1:
                body = mono
            elif isinstance(mag, Fraction):
                body = f"{mag}*{mono}"
            else:
                body = f"{mag}{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# operations

def cyc_root_power(ctx: CyclotomicContext, k: int) -> CycElem:
    return ctx.root_power(k)


def cyc_add(a: CycElem, b: CycElem) -> CycElem:
    return a + b


def cyc_mul(a: CycElem, b: CycElem) -> CycElem:
    return a * b


def cyc_neg(a: CycElem) -> CycElem:
    return -a


def cyc_inverse(a: CycElem) -> CycElem:
    return a.inverse()


def cyc_norm(a: CycElem) -> Scalar:
    return a.norm()


def cyc_divides(d: CycElem, a: CycElem) -> bool:
    """True iff a/d lies in Z[zeta_n]."""
    if d.is_zero():
        raise ZeroDivisionError("divisibility by zero")
    if not (d.is_integral() and a.is_integral()):
        raise PreconditionError("divisibility is defined for integral elements")
    return (a * d.inverse()).is_integral()


def _check_prime_ideal(n: int, p: int) -> int:
    """Return m = n/p after checking <1 - zeta_p> is prime in Z[zeta_n]."""
    if not is_prime(p) or p == 2 or n % p:
        raise PreconditionError(f"p={p} must be an odd prime factor of n={n}")
    m = n // p
    if m % p == 0:
        raise PreconditionError(f"p={p} divides n={n} more than once")
    if m > 1 and multiplicative_order(p, m) != euler_phi(m):
        raise PreconditionError(
            f"<1 - zeta_{p}> is not prime in Z[zeta_{n}]: the order of {p} in Z_{m}^* "
            f"is {multiplicative_order(p, m)}, not phi({m}) = {euler_phi(m)}"
        )
    return m


def uniformizer(ctx: CyclotomicContext, p: int) -> CycElem:
    """The element 1 - zeta_p, where zeta_p = zeta_n^(n/p)."""
    return ctx.one - ctx.root_power(ctx.n // p)


def cyc_valuation(a: CycElem, p: int) -> int:
    """Largest k with (1 - zeta_p)^k dividing a."""
    if a.is_zero():
        raise PreconditionError("valuation of zero is undefined")
    if not a.is_integral():
        raise PreconditionError("valuation needs an integral element")
    _check_prime_ideal(a.ctx.n, p)
    pi_inv = uniformizer(a.ctx, p).inverse()
    k = 0
    while True:
        q = a * pi_inv
        if not q.is_integral():
            return k
        a, k = q, k + 1


class ReductionHom:
    """Z[zeta_n] -> Z[zeta_n]/<1 - zeta_p> = F_p[y]/Phi_m(y), zeta_p -> 1, zeta_m -> y."""

    def __init__(self, ctx: CyclotomicContext, p: int, target: "FiniteField | None" = None):
        from .finite_field import build_quotient_field

        m = _check_prime_ideal(ctx.n, p)
        if m != 2 and not is_prime(m):
            raise PreconditionError(
                f"quotient construction is implemented for m prime or m = 2, got m={m}"
            )
        self.ctx, self.p, self.m = ctx, p, m
        self.target = target if target is not None else build_quotient_field(p, m)
        if self.target.p != p or tuple(self.target.modulus) != cyclotomic_polynomial(m):
            raise PreconditionError("target field must be F_p[y]/Phi_m(y)")
        # zeta_n^i = zeta_p^a * zeta_m^b with i = a*m + b*p, so zeta_n -> y^(p^-1 mod m)
        self.root_exponent = pow(p, -1, m) if m > 1 else 0
        y = self.target.gen
        self.zeta_image = y ** self.root_exponent
        self._power_images = [self.zeta_image ** k for k in range(ctx.phi_n)]

    def __call__(self, a: CycElem) -> "FFElem":
        if a.ctx.n != self.ctx.n:
            raise ContextMismatch("element from a different cyclotomic ring")
        p = self.p
        out = self.target.zero
        for c, img in zip(a.coeffs, self._power_images):
            if not c:
                continue
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise PreconditionError(f"coefficient {c} is not p-integral")
                c = c.numerator * pow(c.denominator, -1, p)
            out = out + img * (c % p)
        return out

    def image_of_root_power(self, k: int) -> "FFElem":
        return self.zeta_image ** (k % self.ctx.n)


def reduction_hom(ctx: CyclotomicContext, p: int, target: "FiniteField | None" = None) -> ReductionHom:
    return ReductionHom(ctx, p, target)
