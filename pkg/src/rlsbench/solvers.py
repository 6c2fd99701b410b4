"""Greedy support-recovery solvers built on subset-averaged least squares.

All solvers share the same peeling skeleton: estimate one signed support
coordinate, subtract its column from the observation, drop the column and
repeat.  They differ in how the coordinate is nominated:

* ``rls``          -- averages m subset least-squares solutions at several
                      subset sizes, majority-votes the nominated coordinate,
                      and estimates the final coefficient by the largest
                      absolute correlation (the matching-pursuit rule).
* ``rls_fixed_size`` -- single subset size per step, no vote; used for
                      sensitivity sweeps over the subset size.
* ``rawls``        -- single subset size floor(0.6 * min(D_k, N)) per step,
                      no vote and no correlation step for the last entry.
* ``omp``          -- classical orthogonal matching pursuit baseline.

Solvers are pure given their seed: identical inputs give bitwise-identical
outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import DesignMatrix
from .linalg import min_norm_least_squares, subset_min_norm
from .rng import as_generator


class DegenerateStepError(RuntimeError):
    """A peeling step produced an identically-zero averaged solution."""


@dataclass(frozen=True)
class Candidate:
    """One nominated coordinate: active-column index, sign and |score|."""

    index: int
    sign: int
    score: float


@dataclass(frozen=True)
class RlsParams:
    """Ensemble parameters: m subsets per solve, `votes` subset sizes spread
    over [frac_lo, frac_hi] * min(D_k, N), tie-breaks seeded by `seed`.

    ``vote_scope`` selects where the majority vote happens: ``"step"``
    (default) votes over the `votes` candidates nominated within each peeling
    step; ``"runs"`` instead runs `votes` complete peeling passes, one per
    subset size, and votes on the resulting support sets.
    """

    m: int = 100
    frac_lo: float = 0.85
    frac_hi: float = 0.9
    votes: int = 5
    seed: int = 0
    vote_scope: str = "step"

    def __post_init__(self):
        if not 0 < self.frac_lo <= self.frac_hi <= 1:
            raise ValueError("need 0 < frac_lo <= frac_hi <= 1")
        if self.m < 1 or self.votes < 1:
            raise ValueError("m and votes must be >= 1")
        if self.vote_scope not in ("step", "runs"):
            raise ValueError("vote_scope must be 'step' or 'runs'")


@dataclass(frozen=True)
class SignedSupport:
    """Estimated signed support in selection order."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        idx = [i for i, _ in self.entries]
        if len(set(idx)) != len(idx):
            raise ValueError("support indices must be distinct")
        if any(s not in (-1, 1) for _, s in self.entries):
            raise ValueError("signs must be -1 or +1")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def index_set(self) -> frozenset[int]:
        return frozenset(self.indices)

    def sign_of(self, index: int) -> int:
        for i, s in self.entries:
            if i == index:
                return s
        raise KeyError(index)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _as_array(x) -> np.ndarray:
    if isinstance(x, DesignMatrix):
        return x.entries
    return np.asarray(x, dtype=float)


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def subset_sizes(
    d_k: int, n: int, frac_lo: float = 0.85, frac_hi: float = 0.9, votes: int = 5
) -> tuple[int, ...]:
    """Subset sizes spread evenly over [frac_lo, frac_hi] * min(d_k, n).

    Endpoints inclusive, rounded half away from zero, clamped to [1, n];
    duplicates after rounding are kept so a size can carry several votes.
    A single vote uses the midpoint of the interval.
    """
    if d_k < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    base = min(d_k, n)
    lo = frac_lo * base
    hi = frac_hi * base
    if votes == 1:
        points = [0.5 * (lo + hi)]
    else:
        points = np.linspace(lo, hi, votes)
    return tuple(min(n, max(1, _round_half_up(p))) for p in points)


def rawls_subset_size(d_k: int, n: int) -> int:
    """floor(0.6 * min(d_k, n)), clamped to at least one row."""
    return max(1, int(math.floor(0.6 * min(d_k, n))))


def _draw_row_subsets(rng, m: int, n: int, n0: int) -> np.ndarray:
    # first n0 entries of m independent uniform permutations
    return np.argsort(rng.random((m, n)), axis=1)[:, :n0]


def peel_step(x_active, y_cur, n0: int, m: int, rng, sv_tol_factor: float = 1.0) -> Candidate:
    """Average m subset least-squares solutions and nominate argmax |mean|.

    Draws m uniformly random n0-subsets of the rows (subsets may repeat
    across draws), solves each subsystem in the minimum-norm sense, averages
    the solutions, and returns the coordinate with the largest absolute
    averaged coefficient together with its sign.
    """
    x_active = _as_array(x_active)
    y_cur = np.asarray(y_cur, dtype=float)
    n = x_active.shape[0]
    if not 1 <= n0 <= n:
        raise ValueError(f"subset size must lie in [1, {n}], got {n0}")
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = as_generator(rng)
    rows = _draw_row_subsets(rng, m, n, n0)
    thetas = subset_min_norm(x_active, y_cur, rows, sv_tol_factor)
    theta_bar = thetas.mean(axis=0)
    idx = int(np.argmax(np.abs(theta_bar)))
    val = theta_bar[idx]
    if val == 0.0:
        raise DegenerateStepError("averaged subset solution is identically zero")
    return Candidate(idx, 1 if val > 0 else -1, float(abs(val)))


def majority_vote(candidates, rng) -> tuple[int, int]:
    """Most frequent candidate index; ties broken uniformly at random.

    The sign is the majority sign among candidates carrying the winning
    index; a sign tie goes to the highest-scoring of those candidates.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("majority_vote needs at least one candidate")
    counts: dict[int, int] = {}
    for c in candidates:
        counts[c.index] = counts.get(c.index, 0) + 1
    top = max(counts.values())
    winners = sorted(i for i, c in counts.items() if c == top)
    if len(winners) == 1:
        index = winners[0]
    else:
        rng = as_generator(rng)
        index = winners[int(rng.integers(len(winners)))]
    backers = [c for c in candidates if c.index == index]
    balance = sum(c.sign for c in backers)
    if balance != 0:
        sign = 1 if balance > 0 else -1
    else:
        sign = max(backers, key=lambda c: c.score).sign
    return index, sign


def omp_single_step(x_active, y_cur) -> Candidate:
    """Coordinate with the largest |<y, column>|; first index on exact ties."""
    x_active = _as_array(x_active)
    y_cur = np.asarray(y_cur, dtype=float)
    corr = x_active.T @ y_cur
    idx = int(np.argmax(np.abs(corr)))
    return Candidate(idx, 1 if corr[idx] >= 0 else -1, float(abs(corr[idx])))


def _check_k(k: int, d: int):
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")


def _peel(entries, active, x_act, y_cur, index, sign):
    entries.append((int(active[index]), sign))
    y_cur = y_cur - sign * x_act[:, index]
    x_act = np.delete(x_act, index, axis=1)
    active = np.delete(active, index)
    return active, x_act, y_cur


def rls(x, y, k: int, params: RlsParams = RlsParams()) -> SignedSupport:
    """Refined peeling: k-1 vote-aggregated averaged-subset steps, then the
    final coordinate from the single-step correlation rule."""
    x = _as_array(x)
    y = np.asarray(y, dtype=float)
    _check_k(k, x.shape[1])
    if params.vote_scope == "runs":
        return _rls_vote_over_runs(x, y, k, params)
    n = x.shape[0]
    rng = as_generator(params.seed)
    active = np.arange(x.shape[1])
    x_act, y_cur = x, y
    entries: list[tuple[int, int]] = []
    for _ in range(k - 1):
        sizes = subset_sizes(x_act.shape[1], n, params.frac_lo, params.frac_hi, params.votes)
        cands = [peel_step(x_act, y_cur, n0, params.m, rng) for n0 in sizes]
        index, sign = majority_vote(cands, rng)
        active, x_act, y_cur = _peel(entries, active, x_act, y_cur, index, sign)
    last = omp_single_step(x_act, y_cur)
    entries.append((int(active[last.index]), last.sign))
    return SignedSupport(tuple(entries))


def rls_fixed_size(x, y, k: int, n0: int, m: int, seed: int = 0) -> SignedSupport:
    """Peeling with one fixed subset size per step and no vote; the final
    coordinate still comes from the correlation rule."""
    x = _as_array(x)
    y = np.asarray(y, dtype=float)
    _check_k(k, x.shape[1])
    rng = as_generator(seed)
    active = np.arange(x.shape[1])
    x_act, y_cur = x, y
    entries: list[tuple[int, int]] = []
    for _ in range(k - 1):
        cand = peel_step(x_act, y_cur, n0, m, rng)
        active, x_act, y_cur = _peel(entries, active, x_act, y_cur, cand.index, cand.sign)
    last = omp_single_step(x_act, y_cur)
    entries.append((int(active[last.index]), last.sign))
    return SignedSupport(tuple(entries))


def rawls(x, y, k: int, m: int = 100, seed: int = 0) -> SignedSupport:
    """Averaged-subset peeling at size floor(0.6 min(D_k, N)) for all k
    coordinates; no vote and no correlation step."""
    x = _as_array(x)
    y = np.asarray(y, dtype=float)
    _check_k(k, x.shape[1])
    n = x.shape[0]
    rng = as_generator(seed)
    active = np.arange(x.shape[1])
    x_act, y_cur = x, y
    entries: list[tuple[int, int]] = []
    for _ in range(k):
        cand = peel_step(x_act, y_cur, rawls_subset_size(x_act.shape[1], n), m, rng)
        active, x_act, y_cur = _peel(entries, active, x_act, y_cur, cand.index, cand.sign)
    return SignedSupport(tuple(entries))


def omp(x, y, k: int, sv_tol_factor: float = 1.0) -> SignedSupport:
    """Classical orthogonal matching pursuit with least-squares refitting.

    Signs are taken from the final refit coefficients; a rank-deficient
    selected submatrix falls back to the minimum-norm refit.
    """
    x = _as_array(x)
    y = np.asarray(y, dtype=float)
    _check_k(k, x.shape[1])
    if np.any(np.all(x == 0.0, axis=0)):
        raise ValueError("design matrix has an identically-zero column")
    residual = y
    selected: list[int] = []
    coeffs = np.zeros(0)
    for _ in range(k):
        scores = np.abs(x.T @ residual)
        scores[selected] = -1.0
        selected.append(int(np.argmax(scores)))
        coeffs = min_norm_least_squares(x[:, selected], y, sv_tol_factor).theta_hat
        residual = y - x[:, selected] @ coeffs
    signs = [1 if c >= 0 else -1 for c in coeffs]
    return SignedSupport(tuple(zip(selected, signs)))


def _rls_vote_over_runs(x, y, k, params: RlsParams) -> SignedSupport:
    """Alternative vote scope: full peeling pass per subset size, then a
    frequency vote over the resulting signed supports.

    Kept as a documented non-default variant; ranking is by occurrence
    count, then earliest selection position, then index.  Signs follow the
    majority over the runs that picked the index, earliest run on ties.
    """
    n = x.shape[0]
    rng = as_generator(params.seed)
    if params.votes == 1:
        fracs = [0.5 * (params.frac_lo + params.frac_hi)]
    else:
        fracs = np.linspace(params.frac_lo, params.frac_hi, params.votes)
    runs: list[SignedSupport] = []
    for frac in fracs:
        active = np.arange(x.shape[1])
        x_act, y_cur = x, y
        entries: list[tuple[int, int]] = []
        for _ in range(k - 1):
            n0 = min(n, max(1, _round_half_up(frac * min(x_act.shape[1], n))))
            cand = peel_step(x_act, y_cur, n0, params.m, rng)
            active, x_act, y_cur = _peel(entries, active, x_act, y_cur, cand.index, cand.sign)
        last = omp_single_step(x_act, y_cur)
        entries.append((int(active[last.index]), last.sign))
        runs.append(SignedSupport(tuple(entries)))

    stats: dict[int, dict] = {}
    for run_no, run in enumerate(runs):
        for pos, (idx, sign) in enumerate(run):
            rec = stats.setdefault(idx, {"count": 0, "pos": pos, "signs": []})
            rec["count"] += 1
            rec["pos"] = min(rec["pos"], pos)
            rec["signs"].append(sign)
    ranked = sorted(stats, key=lambda i: (-stats[i]["count"], stats[i]["pos"], i))
    entries = []
    for idx in ranked[:k]:
        balance = sum(stats[idx]["signs"])
        sign = stats[idx]["signs"][0] if balance == 0 else (1 if balance > 0 else -1)
        entries.append((idx, sign))
    return SignedSupport(tuple(entries))
