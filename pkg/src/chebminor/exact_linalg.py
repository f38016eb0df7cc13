"""Exact determinants, kernels and the modular nonsingularity screen.

Matrices hold ring elements (``CycElem``, ``FFElem`` or ``Fraction``).  The
certified path over Z[zeta_n] is the division-free Berkowitz algorithm; over
fields we use plain Gaussian elimination.  The screen maps zeta_n to an
element of order n in F_q for a prime q = 1 (mod n); a nonzero image proves
the determinant nonzero, a zero image proves nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Sequence

import numpy as np

from .cyclotomic import CycElem, CyclotomicContext, cyclotomic_context, format_element
from .errors import ContextMismatch, PreconditionError
from .finite_field import FFElem, FiniteField
from .numtheory import generator_mod, primes_congruent_one


class Rationals:
    tag = "rationals"
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, c) -> Fraction:
        return Fraction(c)

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


QQ = Rationals()


def ring_of(x) -> Any:
    if isinstance(x, CycElem):
        return x.ctx
    if isinstance(x, FFElem):
        return x.field
    if isinstance(x, (int, Fraction)):
        return QQ
    raise TypeError(f"unsupported matrix entry {x!r}")


@dataclass(frozen=True)
class RingMatrix:
    ring: Any
    rows: tuple[tuple, ...]

    def __post_init__(self):
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise PreconditionError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ring=None) -> "RingMatrix":
        rows = tuple(tuple(r) for r in rows)
        if ring is None:
            if not rows or not rows[0]:
                raise PreconditionError("cannot infer the ring of an empty matrix")
            ring = ring_of(rows[0][0])
        if ring is QQ:
            rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        for r in rows:
            for x in r:
                if ring_of(x) != ring:
                    raise ContextMismatch("matrix entries from different rings")
        return cls(ring, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "RingMatrix":
        return RingMatrix(self.ring, tuple(zip(*self.rows)))

    def map(self, fn) -> "RingMatrix":
        return RingMatrix.from_rows([[fn(x) for x in r] for r in self.rows])

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.ring != other.ring:
            raise ContextMismatch("matrix product across rings")
        cols = list(zip(*other.rows))
        zero = self.ring.zero
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return RingMatrix(self.ring, tuple(out))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RingMatrix":
        return RingMatrix(self.ring, tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def apply(self, v: Sequence) -> list:
        zero = self.ring.zero
        out = []
        for r in self.rows:
            acc = zero
            for x, y in zip(r, v):
                acc = acc + x * y
            out.append(acc)
        return out


def identity(ring, k: int) -> RingMatrix:
    return RingMatrix(ring, tuple(tuple(ring.one if i == j else ring.zero for j in range(k)) for i in range(k)))


def _is_zero(x) -> bool:
    return x == 0 if isinstance(x, Fraction) else x.is_zero()


def _inv(x):
    if isinstance(x, Fraction):
        return 1 / x
    return x.inverse()


# ---------------------------------------------------------------------------
# determinants

def berkowitz_charpoly(M: RingMatrix) -> list:
    """Characteristic polynomial det(xI - M), coefficients from x^k down to x^0.

    Division-free, so valid over any commutative ring.
    """
    if not M.is_square:
        raise PreconditionError(f"characteristic polynomial of a non-square {M.shape} matrix")
    A = M.rows
    one, zero = M.ring.one, M.ring.zero
    poly = [one]
    for k in range(len(A)):
        a = A[k][k]
        col = [A[i][k] for i in range(k)]
        row = A[k][:k]
        # first column of the Toeplitz matrix: 1, -a, -R C, -R A C, ..., -R A^(k-1) C
        toeplitz = [one, -a]
        vec = col
        for _ in range(k):
            acc = zero
            for x, y in zip(row, vec):
                acc = acc + x * y
            toeplitz.append(-acc)
            vec = [_dot(A[i][:k], vec, zero) for i in range(k)]
        new = []
        for i in range(k + 2):
            acc = zero
            for j in range(min(i, k) + 1):
                t = toeplitz[i - j]
                c = poly[j]
                acc = acc + t * c
            new.append(acc)
        poly = new
    return poly


def _dot(a, b, zero):
    acc = zero
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def det_berkowitz(M: RingMatrix):
    if not M.is_square:
        raise PreconditionError(f"determinant of a non-square {M.shape} matrix")
    k = M.shape[0]
    if k == 0:
        return M.ring.one
    c = berkowitz_charpoly(M)[-1]
    return c if k % 2 == 0 else -c


def det_exact_ring(M: RingMatrix) -> CycElem:
    if not isinstance(M.ring, CyclotomicContext):
        raise PreconditionError("det_exact_ring expects a matrix over Z[zeta_n]")
    return det_berkowitz(M)


def det_field(M: RingMatrix):
    """Gaussian elimination over a field (F_q^k, Q, or Q(zeta_n))."""
    if not M.is_square:
        raise PreconditionError(f"determinant of a non-square {M.shape} matrix")
    m = [list(r) for r in M.rows]
    k = len(m)
    det = M.ring.one
    for c in range(k):
        piv = next((r for r in range(c, k) if not _is_zero(m[r][c])), None)
        if piv is None:
            return M.ring.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = _inv(m[c][c])
        for r in range(c + 1, k):
            if _is_zero(m[r][c]):
                continue
            f = m[r][c] * inv
            for j in range(c, k):
                m[r][j] = m[r][j] - f * m[c][j]
    return det


def rref(M: RingMatrix) -> tuple[list[list], list[int]]:
    m = [list(r) for r in M.rows]
    nrows, ncols = M.shape
    pivots: list[int] = []
    row = 0
    for c in range(ncols):
        piv = next((r for r in range(row, nrows) if not _is_zero(m[r][c])), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = _inv(m[row][c])
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and not _is_zero(m[r][c]):
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(c)
        row += 1
        if row == nrows:
            break
    return m, pivots


def rank(M: RingMatrix) -> int:
    return len(rref(M)[1])


def kernel_vector(M: RingMatrix) -> Optional[list]:
    """A nonzero v with M v = 0, scaled so its first nonzero entry is 1; None if none exists."""
    nrows, ncols = M.shape
    m, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    zero, one = M.ring.zero, M.ring.one
    v = [zero] * ncols
    v[f] = one
    for r, c in enumerate(pivots):
        v[c] = -m[r][f]
    lead = next(x for x in v if not _is_zero(x))
    inv = _inv(lead)
    v = [x * inv for x in v]
    assert all(_is_zero(x) for x in M.apply(v))
    return v


# ---------------------------------------------------------------------------
# modular screening

@dataclass(frozen=True)
class ScreeningPrime:
    q: int
    generator: int
    root: int  # element of exact order n in F_q

    def to_json(self) -> dict:
        return {"q": self.q, "generator": self.generator, "root": self.root}


def make_screening_prime(n: int, q: int) -> ScreeningPrime:
    if (q - 1) % n or n % q == 0:
        raise PreconditionError(f"q={q} is not a usable screening prime for n={n}")
    g = generator_mod(q)
    return ScreeningPrime(q, g, pow(g, (q - 1) // n, q))


@lru_cache(maxsize=None)
def screening_ladder(n: int, count: int = 4) -> tuple[ScreeningPrime, ...]:
    """Smallest primes q = 1 (mod n) above max(n, 50), with their order-n roots."""
    return tuple(make_screening_prime(n, q) for q in primes_congruent_one(n, max(n, 50), count))


def det_mod_q(M: RingMatrix, sp: ScreeningPrime) -> int:
    if not isinstance(M.ring, CyclotomicContext):
        raise PreconditionError("screening applies to matrices over Z[zeta_n]")
    mat = np.array([[x.evaluate_mod(sp.root, sp.q) for x in r] for r in M.rows], dtype=np.int64)
    return int(det_mod_q_batch(mat[None], sp.q)[0])


def _powmod_vec(base: np.ndarray, e: int, q: int) -> np.ndarray:
    result = np.ones_like(base)
    base = base % q
    while e:
        if e & 1:
            result = result * base % q
        base = base * base % q
        e >>= 1
    return result


def det_mod_q_batch(mats: np.ndarray, q: int) -> np.ndarray:
    """Determinants mod q of a (B, k, k) int64 stack; q < 2^31."""
    A = np.array(mats, dtype=np.int64) % q
    B, k, _ = A.shape
    det = np.ones(B, dtype=np.int64)
    if k == 0 or B == 0:
        return det
    idx = np.arange(B)
    for c in range(k):
        col = A[:, c:, c]
        nz = col != 0
        piv = c + nz.argmax(axis=1)
        dead = ~nz.any(axis=1)
        swap = piv != c
        if swap.any():
            s = idx[swap]
            pc = piv[swap]
            top = A[s, c, :].copy()
            A[s, c, :] = A[s, pc, :]
            A[s, pc, :] = top
            det[s] = (q - det[s]) % q
        pv = A[:, c, c]
        det = det * pv % q
        det[dead] = 0
        if c + 1 == k:
            break
        inv = _powmod_vec(pv, q - 2, q)
        factors = A[:, c + 1:, c] * inv[:, None] % q
        A[:, c + 1:, c:] = (A[:, c + 1:, c:] - factors[:, :, None] * A[:, None, c, c:] % q) % q
    return det


# ---------------------------------------------------------------------------
# certificates

@dataclass
class DetCertificate:
    verdict: str  # "nonsingular" | "singular"
    method: str  # "modular-screen" | "exact-division-free" | "field-elimination"
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "method": self.method, "witness": self.witness}

    @classmethod
    def from_json(cls, data: dict) -> "DetCertificate":
        return cls(data["verdict"], data["method"], dict(data.get("witness", {})))


def screen_nonsingular(M: RingMatrix, primes: Sequence[ScreeningPrime] | None = None) -> Optional[DetCertificate]:
    """Return a nonsingular certificate, or None ("unknown") if every screen gives zero."""
    if not M.is_square:
        raise PreconditionError("screening needs a square matrix")
    if primes is None:
        primes = screening_ladder(M.ring.n)
    for sp in primes:
        d = det_mod_q(M, sp)
        if d:
            return DetCertificate("nonsingular", "modular-screen", {**sp.to_json(), "det_mod_q": d})
    return None


def certify_exact(M: RingMatrix) -> DetCertificate:
    """Exact division-free determinant; a zero result carries an exact kernel vector."""
    d = det_exact_ring(M)
    if not d.is_zero():
        return DetCertificate("nonsingular", "exact-division-free", {"det": format_element(d)})
    v = kernel_vector(M)
    assert v is not None
    return DetCertificate(
        "singular", "exact-division-free",
        {"det": "0", "kernel": [format_element(x) for x in v]},
    )


def certify(M: RingMatrix, screen: bool = True) -> DetCertificate:
    if screen:
        cert = screen_nonsingular(M)
        if cert is not None:
            return cert
    return certify_exact(M)


def certify_field(M: RingMatrix) -> DetCertificate:
    d = det_field(M)
    if not _is_zero(d):
        return DetCertificate("nonsingular", "field-elimination", {"det": str(d)})
    v = kernel_vector(M)
    return DetCertificate("singular", "field-elimination", {"det": "0", "kernel": [str(x) for x in v]})


def dft_entry_matrix(n: int, rows: Sequence[int], cols: Sequence[int]) -> RingMatrix:
    ctx = cyclotomic_context(n)
    return RingMatrix(ctx, tuple(tuple(ctx.root_power(i * j) for j in cols) for i in rows))
