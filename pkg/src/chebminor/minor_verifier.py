"""Campaigns over submatrices of the n-th DFT matrix (zeta_n^(ij)).

Every pair (I, J) is certified soundly: a nonzero determinant modulo some
screening prime proves nonsingularity, and anything the screen cannot
decide goes to the exact division-free determinant.  Only exact zeros are
reported as singular.
"""
from __future__ import annotations

import bisect
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .crt_index import CrtContext
from .errors import CampaignTooLarge, PreconditionError
from .exact_linalg import (
    RingMatrix,
    certify_exact,
    det_mod_q_batch,
    dft_entry_matrix,
    screening_ladder,
)
from .lcg import Lcg64
from .numtheory import factorize, multiplicative_order
from .reports import (
    ORDER_HASH,
    CampaignReport,
    ProgressLog,
    spec_hash,
    zero_counts,
)

MODES = ("all-square", "principal", "layered", "single-pair")
DEFAULT_CEILING = 10**7
PROGRESS_EVERY = 10**4
LADDER_SIZE = 4
GAMMA_ENUMERATION_LIMIT = 17


@dataclass(frozen=True)
class CampaignSpec:
    n: int
    mode: str
    r: Optional[int] = None
    min_size: Optional[int] = None
    max_size: Optional[int] = None
    samples: Optional[int] = None  # None means exhaustive
    seed: int = 0
    screen: bool = True
    I: Optional[tuple[int, ...]] = None
    J: Optional[tuple[int, ...]] = None
    max_class_size: int = DEFAULT_CEILING

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise PreconditionError("n must be at least 2")
        if self.mode not in MODES:
            raise PreconditionError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "layered":
            if self.r is None:
                raise PreconditionError("layered mode needs the layer modulus r")
            CrtContext.from_layer_modulus(n, self.r)
        if self.mode == "single-pair":
            if self.I is None or self.J is None:
                raise PreconditionError("single-pair mode needs explicit I and J")
            object.__setattr__(self, "I", tuple(sorted(set(self.I))))
            object.__setattr__(self, "J", tuple(sorted(set(self.J))))
            if len(self.I) != len(self.J) or not self.I:
                raise PreconditionError("I and J must be nonempty and of equal size")
            if not all(0 <= x < n for x in self.I + self.J):
                raise PreconditionError(f"indices must lie in 0..{n - 1}")
        if self.samples is not None and self.samples < 1:
            raise PreconditionError("samples must be positive")
        lo, hi = self.size_range
        if lo > hi:
            raise PreconditionError("empty size filter")

    @property
    def size_range(self) -> tuple[int, int]:
        return max(1, self.min_size or 1), min(self.n, self.max_size or self.n)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("max_class_size")
        for key in ("I", "J"):
            if d[key] is not None:
                d[key] = list(d[key])
        d["seed"] = str(d["seed"])
        return d

    @classmethod
    def from_json(cls, data: dict, max_class_size: int = DEFAULT_CEILING) -> "CampaignSpec":
        kw = dict(data)
        kw["seed"] = int(kw.get("seed", 0))
        for key in ("I", "J"):
            if kw.get(key) is not None:
                kw[key] = tuple(kw[key])
        return cls(**kw, max_class_size=max_class_size)

    @property
    def hash(self) -> str:
        return spec_hash(self.to_json())


# ---------------------------------------------------------------------------
# enumeration

@dataclass(frozen=True)
class Block:
    profile: tuple[int, ...]
    diagonal: bool
    nsets: int

    @property
    def size(self) -> int:
        return sum(self.profile)

    @property
    def pair_count(self) -> int:
        return self.nsets if self.diagonal else self.nsets * self.nsets


def spec_layers(spec: CampaignSpec) -> tuple[tuple[int, ...], ...]:
    if spec.mode == "layered":
        return tuple(tuple(layer) for layer in CrtContext.from_layer_modulus(spec.n, spec.r).layers())
    return (tuple(range(spec.n)),)


@lru_cache(maxsize=32)
def block_sets(layers: tuple[tuple[int, ...], ...], profile: tuple[int, ...]) -> np.ndarray:
    """All index sets with the given per-layer sizes, sorted lexicographically, shape (N, k)."""
    parts = [list(combinations(layer, s)) for layer, s in zip(layers, profile)]
    sets = sorted(tuple(sorted(sum(choice, ()))) for choice in product(*parts))
    k = sum(profile)
    arr = np.array(sets, dtype=np.int64).reshape(len(sets), k)
    arr.setflags(write=False)
    return arr


class CampaignPlan:
    """Deterministic, randomly addressable stream of (I, J) pairs for a spec."""

    def __init__(self, spec: CampaignSpec):
        self.spec = spec
        self.layers = spec_layers(spec)
        lo, hi = spec.size_range
        blocks: list[Block] = []
        if spec.mode == "single-pair":
            blocks.append(Block((len(spec.I),), False, 1))
        elif spec.mode in ("principal", "all-square"):
            for k in range(lo, hi + 1):
                blocks.append(Block((k,), spec.mode == "principal", comb(spec.n, k)))
        else:
            for profile in product(*(range(len(layer) + 1) for layer in self.layers)):
                if lo <= sum(profile) <= hi:
                    nsets = prod(comb(len(layer), s) for layer, s in zip(self.layers, profile))
                    blocks.append(Block(tuple(profile), False, nsets))
        self.blocks = blocks
        self.offsets = [0]
        for b in blocks:
            self.offsets.append(self.offsets[-1] + b.pair_count)
        self.class_size = self.offsets[-1]

    @property
    def total(self) -> int:
        return self.spec.samples if self.spec.samples is not None else self.class_size

    def sets(self, block: Block) -> np.ndarray:
        if self.spec.mode == "single-pair":
            raise AssertionError("single-pair has no set list")
        return block_sets(self.layers, block.profile)

    def segments(self, start: int, end: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """(rows, cols) index-set arrays for exhaustive cursors [start, end), one per block touched."""
        if self.spec.mode == "single-pair":
            if start == 0 and end >= 1:
                yield np.array([self.spec.I]), np.array([self.spec.J])
            return
        b = bisect.bisect_right(self.offsets, start) - 1
        pos = start
        while pos < end and b < len(self.blocks):
            block = self.blocks[b]
            lo, hi = self.offsets[b], self.offsets[b + 1]
            seg_end = min(end, hi)
            t = np.arange(pos - lo, seg_end - lo, dtype=np.int64)
            sets = self.sets(block)
            if block.diagonal:
                ri = ci = t
            else:
                ri, ci = np.divmod(t, block.nsets)
            yield sets[ri], sets[ci]
            pos = seg_end
            b += 1

    def pairs(self, start: int = 0, end: Optional[int] = None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        end = self.class_size if end is None else end
        for rows, cols in self.segments(start, end):
            for I, J in zip(rows.tolist(), cols.tolist()):
                yield tuple(I), tuple(J)


class SampleStream:
    """Seeded random pairs: block by pair-count weight, then uniform sets per layer."""

    def __init__(self, plan: CampaignPlan, seed: int):
        self.plan = plan
        self.rng = Lcg64(seed)

    def _draw_set(self, block: Block) -> tuple[int, ...]:
        members: list[int] = []
        for layer, s in zip(self.plan.layers, block.profile):
            members.extend(self.rng.sample(list(layer), s))
        return tuple(sorted(members))

    def draw(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        plan = self.plan
        if plan.spec.mode == "single-pair":
            return plan.spec.I, plan.spec.J
        u = self.rng.below(plan.class_size)
        b = bisect.bisect_right(plan.offsets, u) - 1
        block = plan.blocks[b]
        I = self._draw_set(block)
        J = I if block.diagonal else self._draw_set(block)
        return I, J

    def take(self, count: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [self.draw() for _ in range(count)]


def build_submatrix(n: int, I: Sequence[int], J: Sequence[int]) -> RingMatrix:
    """(zeta_n^(i*j mod n)) with rows for sorted I and columns for sorted J."""
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        raise PreconditionError(f"|I| = {len(I)} differs from |J| = {len(J)}")
    if not I:
        raise PreconditionError("empty index sets")
    if not all(0 <= x < n for x in I + J):
        raise PreconditionError(f"indices must lie in 0..{n - 1}")
    return dft_entry_matrix(n, I, J)


# ---------------------------------------------------------------------------
# certification of batches

@dataclass
class ChunkResult:
    counts: dict[str, int]
    findings: list[dict] = field(default_factory=list)


def certify_batch(n: int, rows: np.ndarray, cols: np.ndarray, screen: bool = True) -> ChunkResult:
    """Certify every pair of one batch; all rows/cols share the same size k."""
    counts = zero_counts()
    B = len(rows)
    counts["checked"] = B
    undecided = np.arange(B)
    if screen and B:
        for level, sp in enumerate(screening_ladder(n, LADDER_SIZE)):
            powers = np.array([pow(sp.root, e, sp.q) for e in range(n)], dtype=np.int64)
            r = rows[undecided]
            c = cols[undecided]
            mats = powers[(r[:, :, None] * c[:, None, :]) % n]
            dets = det_mod_q_batch(mats, sp.q)
            ok = dets != 0
            counts["screened_only"] += int(ok.sum())
            if level:
                counts["ladder_retries"] += int(ok.sum())
            undecided = undecided[~ok]
            if not len(undecided):
                break
    counts["nonsingular"] = B - len(undecided)
    findings = []
    for idx in undecided.tolist():
        I, J = rows[idx].tolist(), cols[idx].tolist()
        t0 = time.perf_counter()
        cert = certify_exact(dft_entry_matrix(n, I, J))
        elapsed = int((time.perf_counter() - t0) * 1000)
        counts["escalated"] += 1
        if cert.verdict == "nonsingular":
            counts["nonsingular"] += 1
        else:
            counts["singular"] += 1
            findings.append({"I": I, "J": J, "verdict": "singular", "certificate": cert.to_json(),
                             "elapsed_ms": elapsed})
    return ChunkResult(counts, findings)


def _merge(into: dict, other: dict) -> None:
    for k, v in other.items():
        into[k] = into.get(k, 0) + v


def _certify_pairs(n: int, pairs: list, screen: bool) -> ChunkResult:
    """Certify a mixed-size list of pairs, keeping findings in input order."""
    by_size: dict[int, list[int]] = {}
    for pos, (I, _) in enumerate(pairs):
        by_size.setdefault(len(I), []).append(pos)
    total = ChunkResult(zero_counts())
    tagged = []
    for k, positions in sorted(by_size.items()):
        rows = np.array([pairs[p][0] for p in positions], dtype=np.int64).reshape(len(positions), k)
        cols = np.array([pairs[p][1] for p in positions], dtype=np.int64).reshape(len(positions), k)
        res = certify_batch(n, rows, cols, screen)
        _merge(total.counts, res.counts)
        # recover input positions of findings for ordering
        lookup = {}
        for p in positions:
            lookup.setdefault((tuple(pairs[p][0]), tuple(pairs[p][1])), []).append(p)
        for f in res.findings:
            p = lookup[(tuple(f["I"]), tuple(f["J"]))].pop(0)
            tagged.append((p, f))
    total.findings = [f for _, f in sorted(tagged, key=lambda t: t[0])]
    return total


_PLAN_CACHE: dict[str, CampaignPlan] = {}


def _plan_for(spec_json: dict) -> CampaignPlan:
    key = spec_hash(spec_json)
    plan = _PLAN_CACHE.get(key)
    if plan is None:
        _PLAN_CACHE.clear()
        plan = _PLAN_CACHE[key] = CampaignPlan(CampaignSpec.from_json(spec_json, max_class_size=2**63))
    return plan


def process_chunk(task: tuple) -> ChunkResult:
    """Worker entry point: ("range", spec_json, start, end) or ("pairs", spec_json, pairs)."""
    kind, spec_json = task[0], task[1]
    plan = _plan_for(spec_json)
    n, screen = plan.spec.n, plan.spec.screen
    if kind == "pairs":
        return _certify_pairs(n, task[2], screen)
    start, end = task[2], task[3]
    total = ChunkResult(zero_counts())
    for rows, cols in plan.segments(start, end):
        res = certify_batch(n, rows, cols, screen)
        _merge(total.counts, res.counts)
        total.findings.extend(res.findings)
    return total


# ---------------------------------------------------------------------------
# hypothesis gate

def theorem_b_hypothesis(n: int) -> dict:
    """Which prime of n = p*r (if any) satisfies: p primitive mod r and p > Gamma_r."""
    from .zhang_gamma import gamma_capital

    f = factorize(n)
    if len(f) != 2 or any(e != 1 for e in f.values()):
        raise PreconditionError(f"n={n} is not a product of two distinct primes")
    a, b = sorted(f)
    if a == 2:
        return {
            "n": n, "case": "2p", "p": b, "r": 2, "applies": True,
            "reasons": [f"n = 2*{b} with {b} an odd prime; no further hypothesis"],
        }
    orientations = []
    for p, r in ((b, a), (a, b)):
        order = multiplicative_order(p, r)
        primitive = order == r - 1
        reasons = []
        if not primitive:
            reasons.append(f"the order of {p} in Z_{r}^* is {order}, not {r - 1}")
        if r <= GAMMA_ENUMERATION_LIMIT:
            Gamma = gamma_capital(r).Gamma_r
            greater = p > Gamma
            if not greater:
                reasons.append(f"{p} is not greater than Gamma_{r} = {Gamma}")
            gamma_str = str(Gamma)
        else:
            greater, gamma_str = False, None
            reasons.append(f"Gamma_{r} not computed (r above the enumeration limit {GAMMA_ENUMERATION_LIMIT})")
        orientations.append({
            "p": p, "r": r, "order_of_p_mod_r": order, "primitive": primitive,
            "Gamma_r": gamma_str, "p_greater_than_Gamma_r": greater,
            "applies": primitive and greater, "reasons": reasons,
        })
    winner = next((o for o in orientations if o["applies"]), None)
    return {
        "n": n, "case": "pr", "applies": winner is not None,
        "p": winner["p"] if winner else None, "r": winner["r"] if winner else None,
        "orientations": orientations,
    }


def _hypothesis_or_none(n: int) -> Optional[dict]:
    try:
        return theorem_b_hypothesis(n)
    except PreconditionError:
        return None


# ---------------------------------------------------------------------------
# driver

def run_campaign(
    spec: CampaignSpec,
    jobs: int = 1,
    progress_path: Optional[str] = None,
    resume: bool = False,
    stop_after: Optional[int] = None,
    progress_every: int = PROGRESS_EVERY,
    on_chunk: Optional[Callable[[int, int], None]] = None,
) -> CampaignReport:
    t0 = time.perf_counter()
    plan = CampaignPlan(spec)
    if spec.samples is None and plan.class_size > spec.max_class_size:
        raise CampaignTooLarge(plan.class_size, spec.max_class_size)
    total = plan.total
    spec_json = spec.to_json()
    shash = spec.hash

    cursor, counts, findings = 0, zero_counts(), []
    log = ProgressLog(progress_path) if progress_path else None
    if log is not None and resume and log.exists():
        state = log.load()
        log.check(state, shash)
        if state.final is not None:
            return CampaignReport.from_json(state.final)
        cursor, counts, findings = state.cursor, state.counts, state.findings
    elif log is not None:
        log.start({"spec": spec_json, "spec_hash": shash, "order_hash": ORDER_HASH, "total": total})

    stream = None
    if spec.samples is not None:
        stream = SampleStream(plan, spec.seed)
        for _ in range(cursor):
            stream.draw()

    def tasks():
        pos = cursor
        while pos < total and (stop_after is None or pos < stop_after):
            end = min(total, pos + progress_every)
            if stream is not None:
                yield end, ("pairs", spec_json, stream.take(end - pos))
            else:
                yield end, ("range", spec_json, pos, end)
            pos = end

    def results():
        if jobs > 1:
            import multiprocessing as mp

            with mp.get_context("fork").Pool(jobs) as pool:
                pending = tasks()
                ends = []

                def feed():
                    for end, task in pending:
                        ends.append(end)
                        yield task

                for i, res in enumerate(pool.imap(process_chunk, feed(), chunksize=1)):
                    yield ends[i], res
        else:
            for end, task in tasks():
                yield end, process_chunk(task)

    for end, res in results():
        _merge(counts, res.counts)
        findings.extend(res.findings)
        cursor = end
        if log is not None:
            log.chunk(cursor, counts, res.findings)
        if on_chunk is not None:
            on_chunk(cursor, total)

    report = CampaignReport(
        spec=spec_json,
        spec_hash=shash,
        counts=counts,
        singular_findings=findings,
        hypothesis=_hypothesis_or_none(spec.n),
        screening=[sp.to_json() for sp in screening_ladder(spec.n, LADDER_SIZE)] if spec.screen else [],
        rng=Lcg64.describe(spec.seed) if spec.samples is not None else None,
        total=total,
        complete=cursor >= total,
        runtime={"wall_ms": int((time.perf_counter() - t0) * 1000)},
    )
    if log is not None and report.complete:
        log.finish(report.to_json())
    return report


def complement_duality_postpass(report: CampaignReport) -> bool:
    """In an exhaustive principal report, I is singular iff its complement is."""
    spec = CampaignSpec.from_json(report.spec)
    if spec.mode != "principal" or spec.samples is not None or spec.size_range != (1, spec.n):
        raise PreconditionError("post-pass needs an exhaustive principal campaign over all sizes")
    full = set(range(spec.n))
    singular = {tuple(f["I"]) for f in report.singular_findings}
    for I in singular:
        comp = tuple(sorted(full - set(I)))
        if comp and comp not in singular:
            return False
    return True
