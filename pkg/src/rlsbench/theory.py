"""Random-matrix predictions for the subset least-squares error.

For a wide N x D matrix with i.i.d. unit-variance entries, the squared
singular values over D follow the Marchenko-Pastur law with ratio
lambda = N/D.  Closed-form consequences used here:

* integral of the density                  = 1
* integral of density(x)/x                 = 1/(1 - lambda)
* (1/N) sum_i 1/sigma_i^2                  -> 1/(D - N)
* E ||X^+ w||  for w ~ N(0, I_N)           -> sqrt(N/(D - N))

The ``empirical_*`` functions estimate the left-hand sides by Monte Carlo
on Gaussian matrices so the predictions can be checked at finite size.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .linalg import pseudo_inverse
from .rng import as_generator, derive_rng

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MpParams:
    """Marchenko-Pastur ratio parameter and its support edges (1 +/- sqrt)^2."""

    lam: float
    lambda_minus: float = field(init=False)
    lambda_plus: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"ratio must lie in (0, 1), got {self.lam}")
        root = math.sqrt(self.lam)
        object.__setattr__(self, "lambda_minus", (1.0 - root) ** 2)
        object.__setattr__(self, "lambda_plus", (1.0 + root) ** 2)


def mp_density(p: MpParams, x):
    """Density sqrt((lam_plus - x)(x - lam_minus)) / (2 pi lam x); zero
    outside [lam_minus, lam_plus]."""
    x = np.asarray(x, dtype=float)
    inside = (x > p.lambda_minus) & (x < p.lambda_plus)
    num = np.where(inside, (p.lambda_plus - x) * (x - p.lambda_minus), 0.0)
    dens = np.sqrt(num) / (2.0 * np.pi * p.lam * np.where(inside, x, 1.0))
    if x.ndim == 0:
        return float(dens)
    return dens


def mp_density_integral(p: MpParams) -> float:
    """Adaptive quadrature of the density over its support (should be 1)."""
    val, _ = integrate.quad(
        lambda t: mp_density(p, t), p.lambda_minus, p.lambda_plus, limit=200
    )
    return val


def mp_inverse_moment_quadrature(p: MpParams) -> float:
    """Adaptive quadrature of density(x)/x over the support."""
    val, _ = integrate.quad(
        lambda t: mp_density(p, t) / t, p.lambda_minus, p.lambda_plus, limit=200
    )
    return val


def mp_inverse_moment(p: MpParams) -> float:
    """Closed form of the inverse moment: 1/(1 - lambda)."""
    if p.lam >= 1.0:
        raise ValueError("inverse moment diverges for ratio >= 1")
    return 1.0 / (1.0 - p.lam)


def predicted_error_norm(n: int, d: int) -> float:
    """Asymptotic E ||X^+ w|| = sqrt(n / (d - n)) for n < d."""
    if not 0 < n < d:
        raise ValueError(f"need 0 < n < d, got n={n}, d={d}")
    return math.sqrt(n / (d - n))


def empirical_error_norm(n: int, d: int, trials: int, rng) -> tuple[float, float]:
    """Monte-Carlo mean and standard error of ||X^+ w|| over Gaussian draws.

    By linearity X^+(X theta + w) - X^+ X theta = X^+ w, so the signal never
    enters; that identity is covered by the test suite.
    """
    if not 0 < n < d:
        raise ValueError(f"need 0 < n < d, got n={n}, d={d}")
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    rng = as_generator(rng)
    norms = np.empty(trials)
    for t in range(trials):
        x = rng.standard_normal((n, d))
        w = rng.standard_normal(n)
        norms[t] = np.linalg.norm(pseudo_inverse(x) @ w)
    return float(norms.mean()), float(norms.std(ddof=1) / math.sqrt(trials))


def empirical_inverse_singular_mean(n: int, d: int, trials: int, rng) -> float:
    """Monte-Carlo mean of (1/n) sum_i 1/sigma_i^2 over Gaussian n x d draws.

    Singular values below the rank cutoff are excluded with a warning;
    for Gaussian matrices this has probability zero.
    """
    if not 0 < n < d:
        raise ValueError(f"need 0 < n < d, got n={n}, d={d}")
    if trials < 1:
        raise ValueError("need at least 1 trial")
    rng = as_generator(rng)
    vals = np.empty(trials)
    excluded = 0
    for t in range(trials):
        s = np.linalg.svd(rng.standard_normal((n, d)), compute_uv=False)
        keep = s > max(n, d) * s[0] * _EPS
        excluded += int(np.count_nonzero(~keep))
        vals[t] = np.sum(1.0 / s[keep] ** 2) / n
    if excluded:
        warnings.warn(
            f"excluded {excluded} singular values below the rank cutoff",
            RuntimeWarning,
            stacklevel=2,
        )
    return float(vals.mean())


# ---------------------------------------------------------------------------
# report tables (consumed by the CLI `theory` subcommand and the service)
# ---------------------------------------------------------------------------

MP_CHECK_RATIOS = (0.1, 0.3, 0.5, 0.7, 0.9)


def _f17(v: float) -> str:
    return format(float(v), ".17g")


def error_norm_table(d: int, n_values, trials: int, seed: int) -> list[dict]:
    """Per-N comparison of the empirical error norm with sqrt(N/(D-N)).

    Each N gets its own derived stream, so rows do not depend on which
    other grid points are present.
    """
    rows = []
    for n in sorted(int(n) for n in n_values):
        predicted = predicted_error_norm(n, d)
        mean, se = empirical_error_norm(n, d, trials, derive_rng(seed, "error_norm", n))
        rows.append(
            {
                "d": d,
                "n": n,
                "lam": n / d,
                "predicted": predicted,
                "empirical_mean": mean,
                "std_error": se,
                "rel_deviation": abs(mean - predicted) / predicted,
            }
        )
    return rows


def mp_check_table(ratios=MP_CHECK_RATIOS) -> list[dict]:
    """Quadrature of the density and of density/x against the closed forms."""
    rows = []
    for lam in ratios:
        p = MpParams(lam)
        rows.append(
            {
                "lam": lam,
                "density_integral": mp_density_integral(p),
                "inverse_moment_quadrature": mp_inverse_moment_quadrature(p),
                "inverse_moment_closed_form": mp_inverse_moment(p),
            }
        )
    return rows


def error_norm_csv(rows) -> str:
    lines = ["D,N,lambda,predicted,empirical_mean,std_error,rel_deviation"]
    lines.extend(
        ",".join(
            (
                str(r["d"]),
                str(r["n"]),
                _f17(r["lam"]),
                _f17(r["predicted"]),
                _f17(r["empirical_mean"]),
                _f17(r["std_error"]),
                _f17(r["rel_deviation"]),
            )
        )
        for r in rows
    )
    return "\n".join(lines) + "\n"


def mp_check_csv(rows) -> str:
    lines = ["lambda,density_integral,inverse_moment_quadrature,inverse_moment_closed_form"]
    lines.extend(
        ",".join(
            (
                _f17(r["lam"]),
                _f17(r["density_integral"]),
                _f17(r["inverse_moment_quadrature"]),
                _f17(r["inverse_moment_closed_form"]),
            )
        )
        for r in rows
    )
    return "\n".join(lines) + "\n"
