"""Layered uncertainty principle on G = Z_r x Z_m with exact cyclotomic scalars.

Indices of Z_n (n = r*m) are identified with G through i = i_r*m + i_m*r,
and layer k is G_k = {k} x Z_m, i.e. the indices with i_r = k.  For r = 1
there is a single layer and the statement is Tao's principle on Z_m.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .crt_index import CrtContext
from .cyclotomic import CycElem, cyclotomic_context, format_element
from .errors import PreconditionError
from .exact_linalg import det_exact_ring, kernel_vector
from .minor_verifier import CampaignSpec, build_submatrix, run_campaign
from .reports import CampaignReport


class GroupLayout:
    def __init__(self, r: int, m: int):
        if r < 1 or m < 1 or gcd(r, m) != 1:
            raise PreconditionError(f"need coprime positive r, m; got r={r}, m={m}")
        if r * m < 2:
            raise PreconditionError("the group must have at least two elements")
        self.r, self.m, self.n = r, m, r * m
        self._crt = CrtContext(self.n, r, m) if r > 1 and m > 1 else None

    def layer(self, i: int) -> int:
        if self.r == 1:
            return 0
        if self.m == 1:
            return i
        return self._crt.layer(i)

    def layers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.r)]
        for i in range(self.n):
            out[self.layer(i)].append(i)
        return out

    def profile(self, members: Sequence[int]) -> tuple[int, ...]:
        counts = [0] * self.r
        for i in members:
            counts[self.layer(i)] += 1
        return tuple(counts)

    def __eq__(self, other):
        return isinstance(other, GroupLayout) and (self.r, self.m) == (other.r, other.m)


@dataclass(frozen=True)
class GroupFunction:
    layout: GroupLayout
    values: tuple[CycElem, ...]

    @classmethod
    def from_values(cls, r: int, m: int, values: Sequence) -> "GroupFunction":
        layout = GroupLayout(r, m)
        if len(values) != layout.n:
            raise PreconditionError(f"expected {layout.n} values, got {len(values)}")
        ctx = cyclotomic_context(layout.n)
        vals = tuple(v if isinstance(v, CycElem) else ctx.from_int(v) for v in values)
        return cls(layout, vals)

    @classmethod
    def indicator(cls, r: int, m: int, members: Sequence[int]) -> "GroupFunction":
        n = r * m
        s = set(members)
        return cls.from_values(r, m, [1 if i in s else 0 for i in range(n)])

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if not v.is_zero())

    def is_zero(self) -> bool:
        return not self.support

    def translate(self, t: int) -> "GroupFunction":
        n = self.layout.n
        return GroupFunction(self.layout, tuple(self.values[(i - t) % n] for i in range(n)))

    def to_json(self) -> dict:
        return {"r": self.layout.r, "m": self.layout.m, "values": [format_element(v) for v in self.values]}


def dft(f: GroupFunction) -> GroupFunction:
    """f^(j) = sum_i f(i) zeta_n^(ij); unnormalized, positive exponent."""
    n = f.layout.n
    ctx = cyclotomic_context(n)
    out = []
    for j in range(n):
        acc = ctx.zero
        for i, v in enumerate(f.values):
            if not v.is_zero():
                acc = acc + v * ctx.root_power(i * j)
        out.append(acc)
    return GroupFunction(f.layout, tuple(out))


def inverse_dft(fhat: GroupFunction) -> GroupFunction:
    n = fhat.layout.n
    ctx = cyclotomic_context(n)
    out = []
    for i in range(n):
        acc = ctx.zero
        for j, v in enumerate(fhat.values):
            if not v.is_zero():
                acc = acc + v * ctx.root_power(-i * j)
        out.append(acc / n)
    return GroupFunction(fhat.layout, tuple(out))


@dataclass(frozen=True)
class SupportProfile:
    m: int
    s: tuple[int, ...]
    s_hat: tuple[int, ...]

    @property
    def layer_sums(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.s, self.s_hat))

    @property
    def uncertainty_holds(self) -> bool:
        """Some layer has |supp f cap G_k| + |supp f^ cap G^_k| >= m + 1."""
        return max(self.layer_sums) >= self.m + 1

    @property
    def layered_bound(self) -> bool:
        """Every layer sum is <= m (the condition a counterexample must meet)."""
        return all(t <= self.m for t in self.layer_sums)

    def to_json(self) -> dict:
        return {"m": self.m, "s": list(self.s), "s_hat": list(self.s_hat),
                "uncertainty_holds": self.uncertainty_holds}


def support_profile(f: GroupFunction) -> SupportProfile:
    if f.is_zero():
        raise PreconditionError("support profile of the zero function")
    lay = f.layout
    return SupportProfile(lay.m, lay.profile(f.support), lay.profile(dft(f).support))


# ---------------------------------------------------------------------------

@dataclass
class FeasibilityResult:
    r: int
    m: int
    report: CampaignReport
    witness: Optional[dict] = None

    @property
    def certified(self) -> bool:
        """True when no layered pair is singular, so the uncertainty principle holds for (r, m)."""
        return self.report.complete and self.witness is None

    def statement(self) -> str:
        if self.witness is not None:
            return f"singular layered pair found for (r, m) = ({self.r}, {self.m}); witness f violates the layered bound"
        if not self.report.complete:
            return "search incomplete"
        scope = "exhaustive" if self.report.spec.get("samples") is None else "sampled"
        checked = self.report.counts["checked"]
        if self.r == 1:
            return (f"no square submatrix of the Z_{self.m} DFT matrix is singular ({scope}, {checked} pairs) "
                    f"=> |supp f| + |supp f^| >= {self.m + 1} for every nonzero f on Z_{self.m}")
        return (f"no layered pair is singular ({scope}, {checked} pairs) => every nonzero f on "
                f"Z_{self.r} x Z_{self.m} has a layer with |supp f cap G_k| + |supp f^ cap G^_k| >= {self.m + 1}")

    def to_json(self) -> dict:
        return {"r": self.r, "m": self.m, "certified": self.certified, "statement": self.statement(),
                "witness": self.witness, "campaign": self.report.to_json()}


def _campaign_spec(layout: GroupLayout, samples, seed, max_class_size) -> CampaignSpec:
    if layout.r == 1:
        return CampaignSpec(layout.n, "all-square", samples=samples, seed=seed, max_class_size=max_class_size)
    if layout.m == 1:
        raise PreconditionError("m must be at least 2")
    return CampaignSpec(layout.n, "layered", r=layout.r, samples=samples, seed=seed,
                        max_class_size=max_class_size)


def kernel_function(layout: GroupLayout, I: Sequence[int], J: Sequence[int]) -> Optional[GroupFunction]:
    """Nonzero f with supp f in I and f^ = 0 on J, if the transform matrix is singular."""
    I, J = sorted(I), sorted(J)
    # f -> f^|_J has matrix rows J, columns I
    v = kernel_vector(build_submatrix(layout.n, J, I))
    if v is None:
        return None
    ctx = cyclotomic_context(layout.n)
    values = [ctx.zero] * layout.n
    for i, x in zip(I, v):
        values[i] = x
    return GroupFunction(layout, tuple(values))


def feasibility_search(r: int, m: int, samples: Optional[int] = None, seed: int = 0, jobs: int = 1,
                       max_class_size: int = 10**7) -> FeasibilityResult:
    layout = GroupLayout(r, m)
    spec = _campaign_spec(layout, samples, seed, max_class_size)
    report = run_campaign(spec, jobs=jobs)
    result = FeasibilityResult(r, m, report)
    if report.singular_findings:
        first = report.singular_findings[0]
        I, J = first["I"], first["J"]
        f = kernel_function(layout, I, J)
        assert f is not None and not f.is_zero()
        fhat = dft(f)
        prof = support_profile(f)
        assert set(f.support) <= set(I)
        assert all(fhat.values[j].is_zero() for j in J)
        assert prof.layered_bound, "kernel function violates the layered bound"
        result.witness = {"I": list(I), "J": list(J), "f": f.to_json()["values"], "profile": prof.to_json()}
    return result


@dataclass
class EquivalenceCheck:
    vanishes_on_J: bool
    matrix_singular: bool
    forward_ok: bool  # f^|_J = 0 implies singular
    converse_ok: bool  # singular implies a kernel f meeting the layered bound
    kernel_witness: Optional[GroupFunction] = None

    @property
    def holds(self) -> bool:
        return self.forward_ok and self.converse_ok

    def __bool__(self):
        return self.holds


def verify_equivalence(r: int, m: int, I: Sequence[int], J: Sequence[int], f: GroupFunction | Sequence) -> EquivalenceCheck:
    layout = GroupLayout(r, m)
    if not isinstance(f, GroupFunction):
        f = GroupFunction.from_values(r, m, list(f))
    I, J = sorted(set(I)), sorted(set(J))
    if f.is_zero():
        raise PreconditionError("f must be nonzero")
    if not set(f.support) <= set(I):
        raise PreconditionError(f"supp f = {list(f.support)} is not inside I = {I}")
    if layout.profile(I) != layout.profile(J):
        raise PreconditionError(f"layer profiles differ: {layout.profile(I)} vs {layout.profile(J)}")
    fhat = dft(f)
    vanishes = all(fhat.values[j].is_zero() for j in J)
    singular = det_exact_ring(build_submatrix(layout.n, I, J)).is_zero()
    forward_ok = singular or not vanishes
    witness = None
    converse_ok = True
    if singular:
        witness = kernel_function(layout, I, J)
        converse_ok = (
            witness is not None
            and not witness.is_zero()
            and all(dft(witness).values[j].is_zero() for j in J)
            and support_profile(witness).layered_bound
        )
    return EquivalenceCheck(vanishes, singular, forward_ok, converse_ok, witness)
