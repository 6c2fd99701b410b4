"""Monte-Carlo benchmark harness for exact support recovery.

A sweep runs a Cartesian grid of (N, k, solver) points at fixed ensemble,
D and sigma.  Each trial redraws design, signal and noise from streams
derived from (base_seed, point coordinates, trial index), so results are
reproducible bit for bit under any worker count; instances are shared
across solvers at the same grid point so solver comparisons are paired.

The headline metric is set recovery (estimated support set equals the true
one); signed recovery additionally requires every sign to match.
"""

from __future__ import annotations

import itertools
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .instance import ENSEMBLES, TOEPLITZ, Signal, ensemble_tag, gen_design, gen_observation, gen_signal
from .rng import derive_rng, derive_seed, DEFAULT_SEED
from .solvers import (
    DegenerateStepError,
    RlsParams,
    SignedSupport,
    omp,
    rawls,
    rls,
    rls_fixed_size,
)

CSV_HEADER = (
    "ensemble,D,N,k,sigma,solver,trials,"
    "successes_set,successes_signed,prob_set,prob_signed,wall_seconds"
)

_FIXED_TAG_RE = re.compile(r"^rls_fixed\[n0=(\d+),m=(\d+)\]$")


def _f17(v: float) -> str:
    return format(float(v), ".17g")


@dataclass(frozen=True)
class SolverSpec:
    """One solver column of the sweep grid."""

    kind: str  # 'rls' | 'rls_fixed' | 'rawls' | 'omp'
    n0: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind not in ("rls", "rls_fixed", "rawls", "omp"):
            raise ValueError(f"unknown solver kind {self.kind!r}")
        if self.kind == "rls_fixed":
            if self.n0 is None or self.m is None:
                raise ValueError("rls_fixed requires n0 and m")
            if self.n0 < 1 or self.m < 1:
                raise ValueError("rls_fixed needs n0 >= 1 and m >= 1")
        elif self.n0 is not None:
            raise ValueError(f"solver {self.kind!r} takes no n0")

    @property
    def tag(self) -> str:
        if self.kind == "rls_fixed":
            return f"rls_fixed[n0={self.n0},m={self.m}]"
        return self.kind

    @property
    def sort_key(self) -> tuple:
        return (self.kind, self.n0 or 0, self.m or 0)

    @classmethod
    def parse(cls, text: str) -> "SolverSpec":
        text = text.strip()
        if text in ("rls", "rawls", "omp"):
            return cls(text)
        m = _FIXED_TAG_RE.match(text)
        if m:
            return cls("rls_fixed", n0=int(m.group(1)), m=int(m.group(2)))
        raise ValueError(
            f"cannot parse solver {text!r}; expected rls, rawls, omp "
            "or rls_fixed[n0=..,m=..]"
        )


@dataclass
class SweepConfig:
    ensemble: str
    d: int
    n_values: tuple[int, ...]
    k_values: tuple[int, ...]
    sigma: float
    solvers: tuple[SolverSpec, ...]
    trials: int = 200
    base_seed: int = DEFAULT_SEED
    rls_params: RlsParams = field(default_factory=RlsParams)
    rho: float | None = None
    timing: bool = False
    fix_design: bool = False  # one design per grid point instead of per trial

    def __post_init__(self):
        self.n_values = tuple(int(n) for n in self.n_values)
        self.k_values = tuple(int(k) for k in self.k_values)
        self.solvers = tuple(self.solvers)
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.ensemble == TOEPLITZ and (self.rho is None or not 0 < self.rho < 1):
            raise ValueError("toeplitz ensemble requires rho in (0, 1)")
        if self.ensemble != TOEPLITZ and self.rho is not None:
            raise ValueError(f"ensemble {self.ensemble!r} takes no rho parameter")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ValueError("n_values must be nonempty with every n >= 1")
        if not self.k_values or any(not 1 <= k <= self.d for k in self.k_values):
            raise ValueError(f"k_values must be nonempty with 1 <= k <= {self.d}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        for spec in self.solvers:
            if spec.kind == "rls_fixed" and spec.n0 > min(self.n_values):
                raise ValueError(
                    f"{spec.tag}: n0 exceeds the smallest N in the grid"
                )

    @property
    def ensemble_label(self) -> str:
        return ensemble_tag(self.ensemble, self.rho)


@dataclass
class ResultRecord:
    ensemble: str
    d: int
    n: int
    k: int
    sigma: float
    solver: str
    trials: int
    successes_set: int
    successes_signed: int
    prob_set: float
    prob_signed: float
    wall_seconds: float
    degenerate_failures: int = 0  # diagnostics only, not serialized

    def csv_row(self) -> str:
        return ",".join(
            (
                self.ensemble,
                str(self.d),
                str(self.n),
                str(self.k),
                _f17(self.sigma),
                self.solver,
                str(self.trials),
                str(self.successes_set),
                str(self.successes_signed),
                _f17(self.prob_set),
                _f17(self.prob_signed),
                _f17(self.wall_seconds),
            )
        )


def exact_recovery(theta_star: Signal, estimate: SignedSupport) -> tuple[bool, bool]:
    """(set match, signed match); a wrong-size estimate is simply a failure."""
    truth = theta_star.support
    set_match = estimate.index_set == frozenset(int(i) for i in truth)
    if not set_match:
        return False, False
    signed = all(theta_star.values[i] == s for i, s in estimate)
    return True, signed


def _run_solver(spec: SolverSpec, rls_params: RlsParams, x, y, k, seed):
    if spec.kind == "rls":
        return rls(x, y, k, replace(rls_params, seed=seed))
    if spec.kind == "rls_fixed":
        return rls_fixed_size(x, y, k, n0=spec.n0, m=spec.m, seed=seed)
    if spec.kind == "rawls":
        return rawls(x, y, k, m=spec.m or rls_params.m, seed=seed)
    return omp(x, y, k)


def run_point(
    config: SweepConfig, n: int, k: int, solver: SolverSpec, threads: int = 1
) -> ResultRecord:
    """All trials of one grid point."""
    label = config.ensemble_label
    key = (config.base_seed, label, config.d, n, k, float(config.sigma))
    fixed_design = (
        gen_design(config.ensemble, n, config.d, derive_rng(*key, "design"), rho=config.rho)
        if config.fix_design
        else None
    )

    def trial(t: int) -> tuple[bool, bool, bool]:
        rng = derive_rng(*key, t, "instance")
        x = fixed_design or gen_design(config.ensemble, n, config.d, rng, rho=config.rho)
        theta = gen_signal(config.d, k, rng)
        y = gen_observation(x, theta, config.sigma, rng)
        seed = derive_seed(*key, t, solver.tag, "solver")
        try:
            estimate = _run_solver(solver, config.rls_params, x.entries, y, k, seed)
        except DegenerateStepError:
            return False, False, True
        set_ok, signed_ok = exact_recovery(theta, estimate)
        return set_ok, signed_ok, False

    start = time.perf_counter() if config.timing else 0.0
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(trial, range(config.trials)))
    else:
        outcomes = [trial(t) for t in range(config.trials)]
    wall = time.perf_counter() - start if config.timing else 0.0

    successes_set = sum(1 for s, _, _ in outcomes if s)
    successes_signed = sum(1 for _, s, _ in outcomes if s)
    return ResultRecord(
        ensemble=label,
        d=config.d,
        n=n,
        k=k,
        sigma=config.sigma,
        solver=solver.tag,
        trials=config.trials,
        successes_set=successes_set,
        successes_signed=successes_signed,
        prob_set=successes_set / config.trials,
        prob_signed=successes_signed / config.trials,
        wall_seconds=wall,
        degenerate_failures=sum(1 for _, _, d_ in outcomes if d_),
    )


def run_sweep(config: SweepConfig, threads: int = 1) -> list[ResultRecord]:
    """Every (N, k, solver) grid point, in deterministic lexicographic order."""
    points = [
        (n, k, spec)
        for n in sorted(config.n_values)
        for k in sorted(config.k_values)
        for spec in sorted(config.solvers, key=lambda s: s.sort_key)
    ]
    return [run_point(config, n, k, spec, threads=threads) for n, k, spec in points]


def records_to_csv(records) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def summary_table(records) -> str:
    header = f"{'ensemble':<22}{'D':>5}{'N':>5}{'k':>4}{'sigma':>7}  {'solver':<26}{'trials':>7}{'prob_set':>10}{'prob_signed':>12}"
    lines = [header, "-" * len(header)]
    for r in records:
        lines.append(
            f"{r.ensemble:<22}{r.d:>5}{r.n:>5}{r.k:>4}{r.sigma:>7g}  "
            f"{r.solver:<26}{r.trials:>7}{r.prob_set:>10.3f}{r.prob_signed:>12.3f}"
        )
    return "\n".join(lines)


def _sanitize(tag: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", tag).strip("_")


def plot_data(records) -> dict[str, str]:
    """Two-column (x, prob_set) plot files keyed by file name.

    Fixed-size sweeps at a single (N, k) point are grouped per m with
    x = n0/N; otherwise one file per solver with x = N (or x = k when only
    the sparsity varies).
    """
    records = list(records)
    if not records:
        return {}
    n_vals = {r.n for r in records}
    k_vals = {r.k for r in records}
    fixed = [(_FIXED_TAG_RE.match(r.solver), r) for r in records]
    if all(m for m, _ in fixed) and len(n_vals) == 1 and len(k_vals) == 1 and len(records) > 1:
        groups: dict[int, list[tuple[float, float]]] = {}
        for m, r in fixed:
            groups.setdefault(int(m.group(2)), []).append(
                (int(m.group(1)) / r.n, r.prob_set)
            )
        return {
            f"rls_fixed_m{m_val}.dat": _two_column("n0_over_N", sorted(pts))
            for m_val, pts in sorted(groups.items())
        }
    x_name, x_of = ("k", lambda r: r.k) if len(n_vals) == 1 and len(k_vals) > 1 else ("N", lambda r: r.n)
    out: dict[str, str] = {}
    for tag in sorted({r.solver for r in records}):
        pts = sorted((x_of(r), r.prob_set) for r in records if r.solver == tag)
        out[f"{_sanitize(tag)}.dat"] = _two_column(x_name, pts)
    return out


def _two_column(x_name: str, points) -> str:
    lines = [f"# {x_name} prob_set"]
    lines.extend(f"{_f17(x)} {_f17(p)}" for x, p in points)
    return "\n".join(lines) + "\n"


def brute_force_oracle(x, y, k: int) -> SignedSupport:
    """Exhaustive ternary least-squares decoder for small instances.

    Enumerates every k-subset and sign pattern and returns the sparse
    ternary vector minimizing ||X theta - y||; first (lexicographically
    smallest) pattern wins ties.  Guarded to at most 1e6 patterns.
    """
    if hasattr(x, "entries"):
        x = x.entries
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = x.shape
    if not 0 <= k <= d:
        raise ValueError(f"k must lie in [0, {d}], got {k}")
    n_patterns = math.comb(d, k) * 2**k
    if n_patterns > 10**6:
        raise ValueError(f"search space of {n_patterns} patterns exceeds 1e6")
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=k)))  # lex order
    best = math.inf
    best_entry: tuple = ()
    for subset in itertools.combinations(range(d), k):
        proj = x[:, subset] @ signs.T - y[:, None]
        costs = np.einsum("ij,ij->j", proj, proj)
        j = int(np.argmin(costs))  # first minimum = lex-smallest sign pattern
        if costs[j] < best:
            best = costs[j]
            best_entry = tuple(zip(subset, (int(s) for s in signs[j])))
    return SignedSupport(best_entry)
