"""Plain-text ``key = value`` configuration files for sweeps and theory runs.

Lines starting with ``#`` are comments.  Integer lists accept comma
separation and inclusive ranges ``start:stop:step`` (mixable, e.g.
``25:40:5,64``).  Unknown keys are errors, as are duplicates.
"""

from __future__ import annotations

from .bench import SolverSpec, SweepConfig
from .rng import DEFAULT_SEED
from .solvers import RlsParams

BENCH_KEYS = {
    "ensemble",
    "rho",
    "D",
    "N",
    "k",
    "sigma",
    "solvers",
    "trials",
    "seed",
    "m",
    "frac_lo",
    "frac_hi",
    "votes",
    "vote_scope",
    "timing",
    "fix_design",
}
THEORY_KEYS = {"D", "N", "trials", "seed"}


class ConfigError(ValueError):
    """Malformed configuration text or values."""


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value mapping; syntax errors and duplicates raise."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def parse_int_list(text: str) -> tuple[int, ...]:
    """Comma-separated ints and/or inclusive start:stop:step ranges."""
    values: list[int] = []
    for atom in text.split(","):
        atom = atom.strip()
        if not atom:
            raise ConfigError(f"empty entry in integer list {text!r}")
        if ":" in atom:
            parts = atom.split(":")
            if len(parts) != 3:
                raise ConfigError(f"range must be start:stop:step, got {atom!r}")
            try:
                start, stop, step = (int(p) for p in parts)
            except ValueError as exc:
                raise ConfigError(f"bad range {atom!r}: {exc}") from exc
            if step < 1:
                raise ConfigError(f"range step must be >= 1 in {atom!r}")
            values.extend(range(start, stop + 1, step))
        else:
            try:
                values.append(int(atom))
            except ValueError as exc:
                raise ConfigError(f"bad integer {atom!r}: {exc}") from exc
    return tuple(values)


def parse_solver_list(text: str) -> tuple[SolverSpec, ...]:
    """Split on commas outside brackets, then parse each solver tag."""
    atoms: list[str] = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced brackets in solvers {text!r}")
        if ch == "," and depth == 0:
            atoms.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ConfigError(f"unbalanced brackets in solvers {text!r}")
    atoms.append("".join(cur))
    try:
        return tuple(SolverSpec.parse(a) for a in atoms)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_bool(value: str, key: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _typed(key: str, value: str):
    try:
        if key in ("D", "trials", "seed", "m", "votes"):
            return int(value)
        if key in ("sigma", "rho", "frac_lo", "frac_hi"):
            return float(value)
        if key in ("N", "k"):
            return parse_int_list(value)
        if key == "solvers":
            return parse_solver_list(value)
        if key in ("timing", "fix_design"):
            return _parse_bool(value, key)
        if key == "vote_scope":
            return value
        if key == "ensemble":
            return value
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    raise ConfigError(f"unknown key {key!r}")


def _check_keys(raw: dict[str, str], allowed: set[str], what: str):
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown {what} keys: {', '.join(unknown)}")


def build_sweep_config(raw: dict[str, str]) -> SweepConfig:
    """SweepConfig from raw key/value strings (file contents plus overrides)."""
    _check_keys(raw, BENCH_KEYS, "bench")
    missing = sorted({"ensemble", "D", "N", "k", "sigma", "solvers"} - raw.keys())
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    vals = {k: _typed(k, v) for k, v in raw.items()}
    rls_params = RlsParams(
        m=vals.get("m", 100),
        frac_lo=vals.get("frac_lo", 0.85),
        frac_hi=vals.get("frac_hi", 0.9),
        votes=vals.get("votes", 5),
        vote_scope=vals.get("vote_scope", "step"),
    )
    try:
        return SweepConfig(
            ensemble=vals["ensemble"],
            d=vals["D"],
            n_values=vals["N"],
            k_values=vals["k"],
            sigma=vals["sigma"],
            solvers=vals["solvers"],
            trials=vals.get("trials", 200),
            base_seed=vals.get("seed", DEFAULT_SEED),
            rls_params=rls_params,
            rho=vals.get("rho"),
            timing=vals.get("timing", False),
            fix_design=vals.get("fix_design", False),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_theory_config(raw: dict[str, str]) -> dict:
    """Theory-run parameters: D, N grid, trials, seed."""
    _check_keys(raw, THEORY_KEYS, "theory")
    missing = sorted({"D", "N"} - raw.keys())
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    d = int(raw["D"])
    n_values = parse_int_list(raw["N"])
    if any(not 0 < n < d for n in n_values):
        raise ConfigError(f"every N must satisfy 0 < N < D={d}")
    trials = int(raw.get("trials", 100))
    seed = int(raw.get("seed", DEFAULT_SEED))
    return {"d": d, "n_values": n_values, "trials": trials, "seed": seed}
