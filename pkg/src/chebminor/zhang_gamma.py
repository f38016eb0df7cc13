"""Vandermonde ratios, the constant Gamma_r, and finite-field checks of Zhang's theorem."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Sequence

from .errors import HypothesisError, PreconditionError
from .exact_linalg import RingMatrix, det_field
from .finite_field import FiniteField, build_quotient_field, ff_primitive_rth_root
from .numtheory import is_prime, is_primitive_mod, multiplicative_order


def vandermonde_value(points: Sequence[int]) -> int:
    """Product of (x_j - x_i) over i < j; positive for strictly increasing input."""
    pts = list(points)
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise PreconditionError(f"points {pts} are not strictly increasing")
    return prod(pts[j] - pts[i] for i in range(len(pts)) for j in range(i + 1, len(pts)))


def gamma_n(r: int, n: int) -> tuple[Fraction, tuple[int, ...]]:
    """Largest V_n(a)/V_n(0..n-1) over increasing n-tuples a in [0, r-1], and a tuple attaining it."""
    if not 2 <= n <= r - 1:
        raise PreconditionError(f"need 2 <= n <= r-1, got n={n}, r={r}")
    base = vandermonde_value(range(n))
    best, arg = -1, None
    for a in combinations(range(r), n):
        v = vandermonde_value(a)
        if v > best:
            best, arg = v, a
    return Fraction(best, base), arg


@dataclass
class GammaTable:
    r: int
    gamma: dict[int, Fraction]
    argmax: dict[int, tuple[int, ...]]
    Gamma_r: Fraction = field(init=False)
    # a_i = 2i with n = (r-1)/2 gives 2^C(n,2); a lower bound only
    lower_bound_witness: dict = field(init=False)

    def __post_init__(self):
        self.Gamma_r = max(self.gamma.values())
        h = (self.r - 1) // 2
        self.lower_bound_witness = {"n": h, "points": [2 * i for i in range(h)], "value": str(2 ** comb(h, 2))}

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "gamma": {str(n): str(g) for n, g in sorted(self.gamma.items())},
            "argmax": {str(n): list(a) for n, a in sorted(self.argmax.items())},
            "Gamma_r": str(self.Gamma_r),
            "lower_bound_witness": self.lower_bound_witness,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GammaTable":
        return cls(
            int(data["r"]),
            {int(n): Fraction(g) for n, g in data["gamma"].items()},
            {int(n): tuple(a) for n, a in data["argmax"].items()},
        )


def gamma_capital(r: int) -> GammaTable:
    if r < 3 or not is_prime(r):
        raise PreconditionError(f"r={r} must be an odd prime")
    gamma, argmax = {}, {}
    for n in range(2, r):
        gamma[n], argmax[n] = gamma_n(r, n)
    return GammaTable(r, gamma, argmax)


@dataclass
class ZhangReport:
    r: int
    p: int
    field_modulus: tuple[int, ...]
    gamma_r: Fraction
    hypotheses: dict
    checked: int = 0
    nonsingular: int = 0
    singular: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    @property
    def all_nonsingular(self) -> bool:
        return not self.singular

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "p": self.p,
            "field": {"p": self.p, "modulus": list(self.field_modulus), "order": f"{self.p}^{self.r - 1}"},
            "omega": "y",
            "Gamma_r": str(self.gamma_r),
            "hypotheses": self.hypotheses,
            "counts": {"checked": self.checked, "nonsingular": self.nonsingular, "singular": len(self.singular)},
            "singular_pairs": [{"I": list(I), "J": list(J)} for I, J in self.singular],
        }


def zhang_verify(r: int, p: int, waive_gamma: bool = False) -> ZhangReport:
    """Certify every square submatrix of (omega^(ij)) over F_{p^(r-1)}, omega = y mod Phi_r."""
    if r < 3 or not is_prime(r) or p < 3 or not is_prime(p) or p == r:
        raise PreconditionError("r and p must be distinct odd primes")
    if not is_primitive_mod(p, r):
        raise HypothesisError(
            f"{p} is not primitive in Z_{r}: its order is {multiplicative_order(p, r)}, not {r - 1}"
        )
    Gamma = gamma_capital(r).Gamma_r
    above = p > Gamma
    if not above and not waive_gamma:
        raise HypothesisError(f"p={p} is not greater than Gamma_{r} = {Gamma}; pass waive_gamma for an exploratory run")
    field_ = build_quotient_field(p, r)
    omega = ff_primitive_rth_root(field_)
    powers = [omega ** e for e in range(r)]
    report = ZhangReport(
        r, p, field_.modulus, Gamma,
        {"primitive": True, "p_greater_than_Gamma": above, "gamma_waived": bool(waive_gamma and not above)},
    )
    for k in range(1, r + 1):
        for I in combinations(range(r), k):
            for J in combinations(range(r), k):
                M = RingMatrix(field_, tuple(tuple(powers[i * j % r] for j in J) for i in I))
                report.checked += 1
                if det_field(M).is_zero():
                    report.singular.append((I, J))
                else:
                    report.nonsingular += 1
    return report


def zhang_matrix(field_: FiniteField, I: Sequence[int], J: Sequence[int]) -> RingMatrix:
    omega = ff_primitive_rth_root(field_)
    return RingMatrix(field_, tuple(tuple(omega ** (i * j) for j in J) for i in I))
