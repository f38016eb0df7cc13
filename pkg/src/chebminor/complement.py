"""Jacobi's complementary-minor identity for the DFT matrix A = (zeta_n^(kl)).

A^{-1} is taken as conj(A)/n (character orthogonality), and conjugation is
the automorphism zeta_n -> zeta_n^(-1); no complex embedding is used.
Index sums use 0-based indices; with |I| = |J| the sign matches the
1-based convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cyclotomic import CycElem, format_element
from .errors import PreconditionError
from .exact_linalg import RingMatrix, det_berkowitz, dft_entry_matrix


@lru_cache(maxsize=32)
def dft_matrix(n: int) -> RingMatrix:
    return dft_entry_matrix(n, range(n), range(n))


@lru_cache(maxsize=32)
def inverse_dft_matrix(n: int) -> RingMatrix:
    A = dft_matrix(n)
    return RingMatrix(A.ring, tuple(tuple(x.conj() / n for x in row) for row in A.rows))


@lru_cache(maxsize=32)
def dft_determinant(n: int) -> CycElem:
    return det_berkowitz(dft_matrix(n))


def conj_transpose(M: RingMatrix) -> RingMatrix:
    return RingMatrix(M.ring, tuple(tuple(x.conj() for x in col) for col in zip(*M.rows)))


def gram_identity(n: int) -> bool:
    """A * conj(A)^t == n * Identity."""
    A = dft_matrix(n)
    ctx = A.ring
    target = RingMatrix(ctx, tuple(tuple(ctx.from_int(n) if i == j else ctx.zero for j in range(n))
                                   for i in range(n)))
    return A @ conj_transpose(A) == target


@dataclass(frozen=True)
class MinorPair:
    n: int
    I: tuple[int, ...]
    J: tuple[int, ...]

    @classmethod
    def make(cls, n: int, I: Sequence[int], J: Sequence[int]) -> "MinorPair":
        I, J = tuple(sorted(set(I))), tuple(sorted(set(J)))
        if len(I) != len(J):
            raise PreconditionError(f"|I| = {len(I)} differs from |J| = {len(J)}")
        if not all(0 <= x < n for x in I + J):
            raise PreconditionError(f"indices must lie in 0..{n - 1}")
        if len(I) in (0, n):
            raise PreconditionError("I and J must be proper nonempty subsets")
        return cls(n, I, J)

    @property
    def Ic(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if i not in self.I)

    @property
    def Jc(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if j not in self.J)

    @property
    def sign(self) -> int:
        return -1 if (sum(self.I) + sum(self.J)) % 2 else 1


@dataclass
class JacobiResult:
    pair: MinorPair
    lhs: CycElem
    rhs: CycElem

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"I": list(self.pair.I), "J": list(self.pair.J), "lhs": format_element(self.lhs),
                "rhs": format_element(self.rhs), "equal": self.equal}


def jacobi_check(n: int, I: Sequence[int], J: Sequence[int]) -> JacobiResult:
    """det A_{I,J}  vs  (-1)^(sum I + sum J) det A det (A^{-1})_{J^c, I^c}."""
    pair = MinorPair.make(n, I, J)
    A, Ainv = dft_matrix(n), inverse_dft_matrix(n)
    lhs = det_berkowitz(A.submatrix(pair.I, pair.J))
    rhs = dft_determinant(n) * det_berkowitz(Ainv.submatrix(pair.Jc, pair.Ic)) * pair.sign
    return JacobiResult(pair, lhs, rhs)


@dataclass
class DualityResult:
    pair: MinorPair
    det_IJ: CycElem
    det_IcJc: CycElem
    formula_holds: bool

    @property
    def det_IJ_nonzero(self) -> bool:
        return not self.det_IJ.is_zero()

    @property
    def det_IcJc_nonzero(self) -> bool:
        return not self.det_IcJc.is_zero()

    @property
    def consistent(self) -> bool:
        return self.det_IJ_nonzero == self.det_IcJc_nonzero

    def to_json(self) -> dict:
        return {"I": list(self.pair.I), "J": list(self.pair.J),
                "det_IJ": format_element(self.det_IJ), "det_IcJc": format_element(self.det_IcJc),
                "det_IJ_nonzero": self.det_IJ_nonzero, "det_IcJc_nonzero": self.det_IcJc_nonzero,
                "consistent": self.consistent, "formula_holds": self.formula_holds}


def complement_duality(n: int, I: Sequence[int], J: Sequence[int]) -> DualityResult:
    """Both minors, plus det A_{I,J} == sign * det(A)/n^k * conj(det A_{I^c,J^c}), k = n - |I|."""
    pair = MinorPair.make(n, I, J)
    A = dft_matrix(n)
    d = det_berkowitz(A.submatrix(pair.I, pair.J))
    dc = det_berkowitz(A.submatrix(pair.Ic, pair.Jc))
    k = n - len(pair.I)
    predicted = dft_determinant(n) * dc.conj() * pair.sign / (n ** k)
    return DualityResult(pair, d, dc, predicted == d)
