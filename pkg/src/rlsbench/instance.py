"""Problem instances: design matrices, ternary signals, noisy observations.

Three design ensembles are supported: i.i.d. standard Gaussian entries,
row-wise correlated Gaussian with Toeplitz covariance rho^|i-j|, and fair
Bernoulli +/-1 entries.  Signals are ternary with exactly k nonzeros placed
on a uniformly random support with i.i.d. uniform signs.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass

import numpy as np

from .rng import as_generator, derive_rng

GAUSSIAN = "gaussian"
TOEPLITZ = "toeplitz"
BERNOULLI = "bernoulli"
ENSEMBLES = (GAUSSIAN, TOEPLITZ, BERNOULLI)

_TAG_RE = re.compile(r"^(\w+)(?:\[rho=([^\]]+)\])?$")


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""


def ensemble_tag(ensemble: str, rho: float | None = None) -> str:
    """Canonical tag, e.g. ``gaussian`` or ``toeplitz[rho=0.3]``."""
    if ensemble == TOEPLITZ:
        if rho is None:
            raise ValueError("toeplitz ensemble requires rho")
        return f"toeplitz[rho={rho!r}]"
    return ensemble


def parse_ensemble_tag(tag: str) -> tuple[str, float | None]:
    m = _TAG_RE.match(tag.strip())
    if not m or m.group(1) not in ENSEMBLES:
        raise InstanceFormatError(f"unknown ensemble tag {tag!r}")
    name, rho_text = m.group(1), m.group(2)
    if name == TOEPLITZ:
        if rho_text is None:
            raise InstanceFormatError("toeplitz tag is missing rho")
        return name, float(rho_text)
    if rho_text is not None:
        raise InstanceFormatError(f"ensemble {name!r} takes no rho parameter")
    return name, None


@dataclass
class DesignMatrix:
    """Dense N x D measurement matrix with its generating ensemble."""

    entries: np.ndarray
    ensemble: str
    rho: float | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.ndim != 2 or self.entries.size == 0:
            raise ValueError("design matrix must be a nonempty 2-D array")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("design matrix entries must be finite")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.ensemble == TOEPLITZ:
            if self.rho is None or not 0.0 < self.rho < 1.0:
                raise ValueError("toeplitz ensemble requires rho in (0, 1)")
        elif self.rho is not None:
            raise ValueError(f"ensemble {self.ensemble!r} takes no rho parameter")
        if self.ensemble == BERNOULLI and not np.all(np.abs(self.entries) == 1.0):
            raise ValueError("bernoulli design must have entries in {-1, +1}")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    @property
    def tag(self) -> str:
        return ensemble_tag(self.ensemble, self.rho)


@dataclass
class Signal:
    """Ternary signal; nonzero entries are +/-1."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=int)
        if self.values.ndim != 1:
            raise ValueError("signal must be a 1-D integer vector")
        if not np.all(np.isin(self.values, (-1, 0, 1))):
            raise ValueError("signal entries must lie in {-1, 0, 1}")

    @property
    def d(self) -> int:
        return self.values.shape[0]

    @property
    def support(self) -> np.ndarray:
        """Sorted indices of the nonzero entries."""
        return np.flatnonzero(self.values)

    @property
    def k(self) -> int:
        return int(np.count_nonzero(self.values))


@dataclass
class ProblemInstance:
    x: DesignMatrix
    theta_star: Signal
    y: np.ndarray
    sigma: float
    seed: int

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.theta_star.d != self.x.d:
            raise ValueError("signal length must match design matrix columns")
        if self.y.shape != (self.x.n,):
            raise ValueError("observation length must match design matrix rows")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


def _check_dims(n: int, d: int):
    if n < 1 or d < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, d={d}")


def gen_gaussian_design(n: int, d: int, rng) -> DesignMatrix:
    """i.i.d. N(0,1) entries."""
    _check_dims(n, d)
    rng = as_generator(rng)
    return DesignMatrix(rng.standard_normal((n, d)), GAUSSIAN)


def gen_toeplitz_design(n: int, d: int, rho: float, rng) -> DesignMatrix:
    """Rows drawn independently from N(0, Sigma) with Sigma_ij = rho^|i-j|.

    Sampled through the Cholesky factor of Sigma; for rho well inside (0,1)
    the covariance is well conditioned and needs no regularization.
    """
    _check_dims(n, d)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    rng = as_generator(rng)
    idx = np.arange(d)
    sigma = rho ** np.abs(idx[:, None] - idx[None, :])
    chol = np.linalg.cholesky(sigma)
    entries = rng.standard_normal((n, d)) @ chol.T
    return DesignMatrix(entries, TOEPLITZ, rho=rho)


def gen_bernoulli_design(n: int, d: int, rng) -> DesignMatrix:
    """Entries independently +/-1 with probability 1/2 each."""
    _check_dims(n, d)
    rng = as_generator(rng)
    entries = 2.0 * rng.integers(0, 2, size=(n, d)) - 1.0
    return DesignMatrix(entries, BERNOULLI)


def gen_design(ensemble: str, n: int, d: int, rng, rho: float | None = None) -> DesignMatrix:
    """Dispatch on ensemble name."""
    if ensemble == GAUSSIAN:
        return gen_gaussian_design(n, d, rng)
    if ensemble == TOEPLITZ:
        if rho is None:
            raise ValueError("toeplitz ensemble requires rho")
        return gen_toeplitz_design(n, d, rho, rng)
    if ensemble == BERNOULLI:
        return gen_bernoulli_design(n, d, rng)
    raise ValueError(f"unknown ensemble {ensemble!r}")


def gen_signal(d: int, k: int, rng) -> Signal:
    """Ternary signal with exactly k nonzeros.

    Support is a uniformly random k-subset; each supported entry is +/-1
    with probability 1/2, independently.
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if not 0 <= k <= d:
        raise ValueError(f"k must lie in [0, {d}], got {k}")
    rng = as_generator(rng)
    values = np.zeros(d, dtype=int)
    support = rng.choice(d, size=k, replace=False)
    values[support] = 2 * rng.integers(0, 2, size=k) - 1
    return Signal(values)


def gen_observation(x: DesignMatrix, theta: Signal, sigma: float, rng) -> np.ndarray:
    """y = X theta + sigma * g with g ~ N(0, I).  Exactly X theta when sigma=0."""
    if theta.d != x.d:
        raise ValueError("signal length must match design matrix columns")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    y = x.entries @ theta.values.astype(float)
    if sigma > 0:
        rng = as_generator(rng)
        y = y + sigma * rng.standard_normal(x.n)
    return y


def generate_instance(
    ensemble: str,
    n: int,
    d: int,
    k: int,
    sigma: float,
    seed: int,
    rho: float | None = None,
) -> ProblemInstance:
    """Full instance from one seed; design, signal and noise use split streams."""
    x = gen_design(ensemble, n, d, derive_rng(seed, "design"), rho=rho)
    theta = gen_signal(d, k, derive_rng(seed, "signal"))
    y = gen_observation(x, theta, sigma, derive_rng(seed, "noise"))
    return ProblemInstance(x, theta, y, sigma, seed)


# ---------------------------------------------------------------------------
# plain-text serialization
#
# '#'-prefixed metadata lines (ensemble, N, D, k, sigma, seed), then the N
# matrix rows comma-separated, a blank line, y, a blank line, theta*.
# Floats are written with 17 significant digits so round trips are exact.
# ---------------------------------------------------------------------------

def _f17(v: float) -> str:
    return format(float(v), ".17g")


def dumps_instance(inst: ProblemInstance) -> str:
    out = io.StringIO()
    out.write(f"# ensemble = {inst.x.tag}\n")
    out.write(f"# N = {inst.x.n}\n")
    out.write(f"# D = {inst.x.d}\n")
    out.write(f"# k = {inst.theta_star.k}\n")
    out.write(f"# sigma = {_f17(inst.sigma)}\n")
    out.write(f"# seed = {inst.seed}\n")
    for row in inst.x.entries:
        out.write(",".join(_f17(v) for v in row) + "\n")
    out.write("\n")
    out.write(",".join(_f17(v) for v in inst.y) + "\n")
    out.write("\n")
    out.write(",".join(str(int(v)) for v in inst.theta_star.values) + "\n")
    return out.getvalue()


def write_instance(inst: ProblemInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_instance(inst))


def loads_instance(text: str) -> ProblemInstance:
    meta: dict[str, str] = {}
    data_lines: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                raise InstanceFormatError(f"malformed metadata line {line!r}")
            key, _, value = body.partition("=")
            meta[key.strip()] = value.strip()
        else:
            data_lines.append(line)

    missing = {"ensemble", "N", "D", "k", "sigma", "seed"} - meta.keys()
    if missing:
        raise InstanceFormatError(f"missing metadata keys: {sorted(missing)}")

    try:
        n = int(meta["N"])
        d = int(meta["D"])
        k = int(meta["k"])
        sigma = float(meta["sigma"])
        seed = int(meta["seed"])
    except ValueError as exc:
        raise InstanceFormatError(f"bad metadata value: {exc}") from exc
    ensemble, rho = parse_ensemble_tag(meta["ensemble"])

    blocks: list[list[str]] = [[]]
    for line in data_lines:
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    blocks = [b for b in blocks if b]
    if len(blocks) != 3:
        raise InstanceFormatError(
            f"expected matrix, y and theta* blocks, found {len(blocks)}"
        )
    rows, y_block, theta_block = blocks
    if len(rows) != n or len(y_block) != 1 or len(theta_block) != 1:
        raise InstanceFormatError("block sizes do not match metadata")

    try:
        entries = np.array([[float(v) for v in row.split(",")] for row in rows])
        y = np.array([float(v) for v in y_block[0].split(",")])
        theta = np.array([int(v) for v in theta_block[0].split(",")])
    except ValueError as exc:
        raise InstanceFormatError(f"bad numeric value: {exc}") from exc
    if entries.shape != (n, d) or y.shape != (n,) or theta.shape != (d,):
        raise InstanceFormatError("data shapes do not match metadata")

    try:
        inst = ProblemInstance(
            DesignMatrix(entries, ensemble, rho=rho), Signal(theta), y, sigma, seed
        )
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc
    if inst.theta_star.k != k:
        raise InstanceFormatError(
            f"metadata says k={k} but theta* has {inst.theta_star.k} nonzeros"
        )
    return inst


def read_instance(path) -> ProblemInstance:
    with open(path) as fh:
        return loads_instance(fh.read())
