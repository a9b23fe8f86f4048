"""Command-line front end.

Every command prints '#'-prefixed header lines (command, version, parameters,
seed, wall time) followed by a CSV or JSON body.  The body depends only on the
parameters and the seed.

Exit codes: 0 success, 1 compute-time error, 2 unknown command or option,
3 missing field, 4 precondition violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import dioph, expsum, gint, gsieve, metrical
from .gint import ComplexHP, GaussInt, as_fraction

CACHE_ENV = "GAUSSDIOPH_CACHE_DIR"

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_MISSING, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class MissingFieldError(Exception):
    pass


class UsageError(Exception):
    pass


def _version() -> str:
    from . import __version__
    return __version__


# ---------------------------------------------------------------------------
# parameter bag


@dataclass
class ExperimentConfig:
    """A validated command with its typed parameters."""

    command: str
    parameters: dict[str, Any]
    seed: int = 0
    output: str | None = None
    format: str = "csv"
    threads: int = 1
    raw: dict[str, Any] = field(default_factory=dict)


class _Bag:
    """Typed access to merged CLI/config values with field-named diagnostics."""

    def __init__(self, values: dict[str, Any], prec: int) -> None:
        self.values = values
        self.prec = prec
        self.used: dict[str, Any] = {}

    def _get(self, name: str, default, required: bool):
        v = self.values.get(name)
        if v is None:
            if required:
                raise MissingFieldError(f"missing field '{name.replace('_', '-')}'")
            return default, False
        return v, True

    def _wrap(self, name: str, fn: Callable, v):
        try:
            out = fn(v)
        except (ValueError, TypeError, ArithmeticError, ZeroDivisionError) as exc:
            raise ValueError(f"field '{name.replace('_', '-')}': {exc}") from exc
        return out

    def num(self, name: str, default=None, required: bool = False):
        v, given = self._get(name, default, required)
        if not given:
            if default is not None:
                self.used[name] = default
            return default
        out = self._wrap(name, lambda x: float(as_fraction(str(x) if not isinstance(x, (int, float)) else x)), v)
        self.used[name] = v if isinstance(v, (int, float)) else str(v)
        return out

    def frac(self, name: str, default=None, required: bool = False):
        v, given = self._get(name, default, required)
        if not given:
            if default is not None:
                self.used[name] = str(default)
            return None if default is None else as_fraction(default)
        out = self._wrap(name, lambda x: as_fraction(str(x) if not isinstance(x, (int, float)) else x), v)
        self.used[name] = str(v)
        return out

    def int(self, name: str, default=None, required: bool = False):
        v, given = self._get(name, default, required)
        if not given:
            if default is not None:
                self.used[name] = default
            return default

        def conv(x):
            f = as_fraction(str(x) if not isinstance(x, (int, float)) else x)
            if f.denominator != 1:
                raise ValueError(f"{x!r} is not an integer")
            return int(f)

        out = self._wrap(name, conv, v)
        self.used[name] = out
        return out

    def const(self, name: str, default=None, required: bool = False) -> ComplexHP | None:
        v, given = self._get(name, default, required)
        if not given and default is None:
            return None
        if isinstance(v, (list, tuple)) and len(v) == 2:
            v = f"{v[0]}{'' if str(v[1]).startswith(('-', '+')) else '+'}{v[1]}i"
        out = self._wrap(name, lambda x: ComplexHP.parse(str(x), self.prec), v)
        self.used[name] = str(v)
        return out

    def gauss(self, name: str, default=None, required: bool = False) -> GaussInt | None:
        v, given = self._get(name, default, required)
        if not given and default is None:
            return None

        def conv(x):
            if isinstance(x, (list, tuple)) and len(x) == 2:
                return GaussInt(int(x[0]), int(x[1]))
            h = ComplexHP.parse(str(x))
            if h.exact is None or h.exact[0].denominator != 1 or h.exact[1].denominator != 1:
                raise ValueError(f"{x!r} is not a Gaussian integer")
            return GaussInt(int(h.exact[0]), int(h.exact[1]))

        out = self._wrap(name, conv, v)
        self.used[name] = str(out)
        return out

    def choice(self, name: str, options: tuple[str, ...], default: str) -> str:
        v, _ = self._get(name, default, False)
        if v not in options:
            raise ValueError(f"field '{name.replace('_', '-')}': expected one of {options}, got {v!r}")
        self.used[name] = v
        return v

    def flag(self, name: str) -> bool:
        v = bool(self.values.get(name) or False)
        self.used[name] = v
        return v

    def sector(self, r_max_required: bool = False, r_min_default=0.0) -> gsieve.SectorAnnulus:
        sec = self.values.get("sector")
        if isinstance(sec, dict):
            for k, v in sec.items():
                self.values.setdefault(k, v)
                if self.values.get(k) is None:
                    self.values[k] = v
        elif isinstance(sec, (list, tuple)) and len(sec) == 4:
            for k, v in zip(("r_min", "r_max", "theta_min", "theta_max"), sec):
                if self.values.get(k) is None:
                    self.values[k] = v
        r_min = self.num("r_min", r_min_default)
        r_max = self.num("r_max", None, r_max_required)
        t1 = self.num("theta_min", -math.pi)
        t2 = self.num("theta_max", math.pi)
        return gsieve.SectorAnnulus(r_min, math.inf if r_max is None else r_max, t1, t2)


# ---------------------------------------------------------------------------
# prime-table cache


def _cache_path(bag: _Bag, max_norm: int) -> Path | None:
    raw = bag.values.get("cache")
    base = os.environ.get(CACHE_ENV)
    if raw:
        p = Path(str(raw))
        if not p.is_absolute() and base:
            p = Path(base) / p
        return p
    if base:
        return Path(base) / f"gaussian_primes_{max_norm}.bin"
    return None


def _table(bag: _Bag, need: float) -> gsieve.PrimeTable:
    """Load the cached table or build one covering ``need``; a new cache file is
    written only when none exists (an existing file is never modified)."""
    max_norm = bag.int("max_norm", None) or max(2, math.ceil(need))
    path = _cache_path(bag, max_norm)
    if path is not None and path.exists():
        table = gsieve.load_table(path)
    else:
        table = gsieve.build_prime_table(max_norm)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "xb"):
                pass
            gsieve.save_table(table, path)
    table.require(need, "command")
    return table


# ---------------------------------------------------------------------------
# commands: each returns (columns, rows)

Rows = tuple[list[str], list[dict[str, Any]]]


def _cmd_sieve(bag: _Bag) -> Callable[[], Rows]:
    max_norm = bag.int("max_norm", required=True)
    if max_norm < 1:
        raise ValueError("field 'max-norm': must be >= 1")
    if max_norm > gsieve.MAX_NORM_BUDGET:
        raise ValueError(f"field 'max-norm': exceeds the budget {gsieve.MAX_NORM_BUDGET}")

    def run() -> Rows:
        t = _table(bag, max_norm)
        return ["max_norm", "count"], [{"max_norm": t.max_norm, "count": len(t)}]

    return run


def _cmd_count(bag: _Bag) -> Callable[[], Rows]:
    region = bag.sector(r_max_required=True)
    c = bag.const("c")
    q = None
    if c is not None:
        q = dioph.ConstraintQuery(region, bag.frac("delta", required=True),
                                  bag.choice("metric", ("sup", "euclid"), "sup"))

    def run() -> Rows:
        t = _table(bag, region.norm_bounds()[1])
        obs, main = gsieve.count_primes_sector(t, region)
        row = {"observed": obs, "main": main, "ratio": obs / main if main else None}
        cols = ["observed", "main", "ratio"]
        if q is not None:
            row["constrained"] = dioph.count_constrained_primes(t, c, q)
            row["predicted"] = float(4 * q.delta ** 2) * obs if q.metric == "sup" else math.pi * float(q.delta) ** 2 * obs
            cols += ["constrained", "predicted"]
        return cols, [row]

    return run


def _cmd_equid(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    delta = bag.frac("delta", required=True)
    if not (0 < delta <= Fraction(1, 2)):
        raise ValueError(f"field 'delta': must lie in (0, 1/2], got {float(delta)}")
    x1 = bag.num("x1", 1)
    x2 = bag.num("x2", required=True)
    region = bag.sector()
    eps = bag.num("epsilon", 0.01)
    if x2 < 1:
        raise ValueError("field 'x2': must be >= 1")

    def run() -> Rows:
        t = _table(bag, x2)
        rep = dioph.equid_window(t, c, x1, x2, delta, region, eps)
        d = rep.as_dict()
        return list(d), [d]

    return run


def _cmd_spacing(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    max_q = bag.num("max_q", 100)

    def run() -> Rows:
        h = gint.hurwitz_expansion(c, min_q_norm=math.floor(max_q ** 2) + 1)
        rows = []
        for q in h.denominators:
            if q.norm() > max_q ** 2:
                break
            rows.append(dioph.spacing_audit(c, q).row())
        cols = list(rows[0]) if rows else ["q"]
        return cols, rows

    return run


def _cmd_coro(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    max_norm = bag.int("max_norm", required=True)
    delta = bag.frac("delta")
    exponent = None
    if delta is None:
        exponent = bag.frac("exponent", Fraction(-1, 12))
    elif not (0 < delta <= Fraction(1, 2)):
        raise ValueError(f"field 'delta': must lie in (0, 1/2], got {float(delta)}")

    def run() -> Rows:
        t = _table(bag, max_norm)
        if delta is not None:
            q = dioph.ConstraintQuery(gsieve.FULL_CIRCLE, delta, "sup", (1, max_norm))
            n = dioph.count_constrained_primes(t, c, q)
            base = t.norm_slice(1, max_norm).stop - t.norm_slice(1, max_norm).start
            pred = float(4 * delta ** 2) * base
            return ["count", "primes", "predicted", "ratio"], [
                {"count": n, "primes": base, "predicted": pred, "ratio": n / pred if pred else None}]
        found = dioph.find_approx_primes(t, c, exponent)
        rows = [{"p": str(p), "norm": p.norm(), "dist": d} for p, d in found if p.norm() <= max_norm]
        return ["p", "norm", "dist"], rows

    return run


def _cmd_vaaler(bag: _Bag) -> Callable[[], Rows]:
    J = bag.int("J", required=True)
    vp = expsum.VaalerParams(J)
    xs = bag.values.get("x")
    grid = bag.int("grid", 16 if xs is None else None)
    if xs is not None:
        if isinstance(xs, str):
            xs = [s for s in xs.split(",") if s.strip()]
        pts = [float(as_fraction(str(v))) for v in xs]
        bag.used["x"] = [str(v) for v in xs]
    else:
        if grid < 1:
            raise ValueError("field 'grid': must be >= 1")
        pts = list(np.arange(grid) / grid)

    def run() -> Rows:
        psi, ps, sg = expsum.vaaler_eval(vp, np.array(pts, dtype=np.float64))
        rows = [{"x": x, "psi": float(a), "psi_star": float(b), "sigma": float(s)}
                for x, a, b, s in zip(pts, psi, ps, sg)]
        return ["x", "psi", "psi_star", "sigma"], rows

    return run


def _cmd_linear(bag: _Bag) -> Callable[[], Rows]:
    kappa = bag.const("kappa", required=True)
    y_lo = bag.num("y_lo", 0)
    y_hi = bag.num("y_hi", required=True)
    f1 = bag.num("f1", -math.pi)
    f2 = bag.num("f2", math.pi)
    if not (0 <= y_lo < y_hi):
        raise ValueError("fields 'y-lo', 'y-hi': need 0 <= y-lo < y-hi")
    if not (f1 < f2 <= f1 + 2 * math.pi):
        raise ValueError("fields 'f1', 'f2': need f1 < f2 <= f1 + 2 pi")

    def run() -> Rows:
        s, b = expsum.linear_expsum(kappa, y_lo, y_hi, f1, f2)
        return ["re", "im", "abs", "bound", "ratio"], [
            {"re": s.real, "im": s.imag, "abs": abs(s), "bound": b, "ratio": abs(s) / b}]

    return run


def _cmd_gc(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    y = bag.num("y", required=True)
    z = bag.num("z", required=True)
    q = bag.gauss("q", required=True)
    if y < 1:
        raise ValueError("field 'y': must be >= 1")
    gint.verify_convergent(c, q)

    def run() -> Rows:
        g = expsum.g_c_profile(c, y, z, q)
        r1, r2 = g.ratios()
        return ["exact", "bound_general", "bound_small_z", "ratio_general", "ratio_small_z"], [
            {"exact": g.exact, "bound_general": g.bound_general, "bound_small_z": g.bound_small_z,
             "ratio_general": r1, "ratio_small_z": r2}]

    return run


def _type_params(bag: _Bag, need_delta: bool) -> expsum.TypeSumParams:
    return expsum.TypeSumParams(
        x1=bag.num("x1", 1), x2=bag.num("x2", required=True), M=bag.num("M", required=True),
        alpha=bag.num("alpha", 1 / 3), beta=bag.num("beta", 0.5),
        H1=bag.num("H1", 1), H2=bag.num("H2", 0.5),
        delta=bag.frac("delta", required=True) if need_delta else Fraction(1, 2),
        sector=bag.sector())


def _coeff(bag: _Bag, name: str, seed: int):
    kind = bag.choice(name, ("ones", "random"), "ones")
    return expsum.ones if kind == "ones" else expsum.random_signs(seed)


def _cmd_e3(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    p = _type_params(bag, False)

    def run() -> Rows:
        return ["E3"], [{"E3": expsum.e3_exact(c, p)}]

    return run


def _cmd_f3(bag: _Bag, seed: int) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    p = _type_params(bag, True)
    a = _coeff(bag, "a_seq", seed)
    b = _coeff(bag, "b_seq", seed + 1)

    def run() -> Rows:
        return ["F3"], [{"F3": expsum.f3_exact(c, p, a, b)}]

    return run


def _cmd_report(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    q = bag.gauss("q", required=True)
    delta = bag.frac("delta", required=True)
    if not (0 < delta <= Fraction(1, 2)):
        raise ValueError(f"field 'delta': must lie in (0, 1/2], got {float(delta)}")
    x1 = bag.num("x1", 1)
    region = bag.sector()
    eps = bag.num("epsilon", 0.01)
    gint.verify_convergent(c, q)

    def run() -> Rows:
        rep = expsum.type_sum_report(c, q, delta, x1=x1, sector=region, epsilon=eps)
        d = rep.as_dict()
        return list(d), [d]

    return run


def _metrical_params(bag: _Bag) -> metrical.MetricalParams:
    return metrical.MetricalParams(
        c=bag.const("c", required=True), epsilon=bag.num("epsilon", 0.01),
        N=bag.num("N", required=True), A=bag.num("A", 1), B=bag.num("B", 2),
        C_const=bag.num("C", 1))


def _cmd_fn_count(bag: _Bag) -> Callable[[], Rows]:
    mp_ = _metrical_params(bag)
    alpha = bag.const("alpha", required=True)
    need = max(mp_.N ** 2, (mp_.N * max(1.0, abs(mp_.c)) * abs(alpha) + 1) ** 2)

    def run() -> Rows:
        t = _table(bag, need)
        n = metrical.count_F_N(t, mp_, alpha)
        return ["F_N", "degenerate"], [{"F_N": n, "degenerate": mp_.c.is_rational or alpha.exact == (0, 0)}]

    return run


def _cmd_theo1(bag: _Bag, seed: int) -> Callable[[], Rows]:
    mp_ = _metrical_params(bag)
    region = bag.sector(r_min_default=mp_.A)
    if math.isinf(region.r_max):
        region = region.with_radii(region.r_min, mp_.B)
    samples = bag.int("samples", 100)
    if samples < 1:
        raise ValueError("field 'samples': must be >= 1")
    if not (mp_.A <= region.r_min < region.r_max <= mp_.B):
        raise ValueError("fields 'r-min', 'r-max': sector radii must lie within [A, B]")
    need = max(mp_.N ** 2, (mp_.N * max(1.0, abs(mp_.c)) * region.r_max + 1) ** 2)

    def run() -> Rows:
        t = _table(bag, need)
        r = metrical.monte_carlo_theo_i(t, mp_, region, samples, seed)
        d = r.as_dict()
        return list(d), [d]

    return run


def _cmd_sieve_error(bag: _Bag) -> Callable[[], Rows]:
    c = bag.const("c", required=True)
    sp = metrical.SieveErrorParams(
        P=bag.num("P", required=True), d1=bag.gauss("d1", GaussInt(1, 0)), d2=bag.gauss("d2", GaussInt(1, 0)),
        alpha=bag.const("alpha", required=True), epsilon=bag.num("epsilon", 0.01), mu=bag.num("mu"))
    two = bag.flag("two_prime")

    def run() -> Rows:
        r = metrical.t_p_and_e_p(sp, c)
        d = r.as_dict()
        if two:
            d["A_P"] = metrical.a_p_two_prime_count(sp, c)
        return list(d), [d]

    return run


# ---------------------------------------------------------------------------
# parser


_COMMON = ["config", "seed", "output", "format", "threads", "prec", "cache", "max_norm"]

_FIELDS: dict[str, list[str]] = {
    "sieve": [],
    "count": ["r_min", "r_max", "theta_min", "theta_max", "c", "delta", "metric"],
    "equid": ["c", "delta", "x1", "x2", "r_min", "r_max", "theta_min", "theta_max", "epsilon"],
    "spacing": ["c", "max_q"],
    "coro-search": ["c", "delta", "exponent"],
    "vaaler": ["J", "x", "grid"],
    "linear": ["kappa", "y_lo", "y_hi", "f1", "f2"],
    "gc": ["c", "y", "z", "q"],
    "e3": ["c", "x1", "x2", "M", "alpha", "beta", "H1", "H2", "theta_min", "theta_max"],
    "f3": ["c", "x1", "x2", "M", "alpha", "beta", "H1", "H2", "delta", "theta_min", "theta_max",
           "a_seq", "b_seq"],
    "report": ["c", "q", "delta", "x1", "theta_min", "theta_max", "epsilon"],
    "fn-count": ["c", "alpha", "epsilon", "N", "A", "B", "C"],
    "theo1-mc": ["c", "epsilon", "N", "A", "B", "C", "r_min", "r_max", "theta_min", "theta_max", "samples"],
    "sieve-error": ["c", "alpha", "P", "d1", "d2", "epsilon", "mu", "two_prime"],
}

_FLAGS = {"two_prime"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaussdioph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gaussdioph {_version()}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, fields in _FIELDS.items():
        sp = sub.add_parser(name)
        for f in _COMMON + fields:
            opt = "--" + f.replace("_", "-")
            if f in _FLAGS:
                sp.add_argument(opt, dest=f, action="store_true", default=None)
            else:
                sp.add_argument(opt, dest=f, default=None)
    return parser


def _load_config(path: str) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"field 'config': cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("field 'config': top level must be an object")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def parse_and_validate(argv: list[str]) -> tuple[ExperimentConfig, Callable[[], Rows]]:
    """Parse argv (and an optional JSON config) into a validated config plus its runner.

    Raises UsageError, MissingFieldError or ValueError (precondition)."""
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    cfg: dict[str, Any] = {}
    if "config" in values:
        cfg = _load_config(values.pop("config"))
    command = values.pop("command", None) or cfg.pop("command", None)
    cfg.pop("command", None)
    if command is None:
        raise UsageError("no command given")
    if command not in _FIELDS:
        raise UsageError(f"unknown command {command!r}")
    merged = {**cfg, **values}
    seed_raw = merged.pop("seed", 0)
    try:
        seed = int(seed_raw)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"field 'seed': {seed_raw!r} is not an integer") from exc
    if not (0 <= seed < 2 ** 64):
        raise ValueError("field 'seed': must be a 64-bit unsigned integer")
    fmt = merged.pop("format", "csv")
    if fmt not in ("csv", "json"):
        raise ValueError(f"field 'format': expected csv or json, got {fmt!r}")
    output = merged.pop("output", None)
    threads_raw = merged.pop("threads", None)
    threads = int(threads_raw) if threads_raw is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError("field 'threads': must be >= 1")
    prec = int(merged.pop("prec", gint.DEFAULT_PREC))
    if prec < 64:
        raise ValueError("field 'prec': must be >= 64")
    bag = _Bag(merged, prec)
    builders: dict[str, Callable[[], Callable[[], Rows]]] = {
        "sieve": lambda: _cmd_sieve(bag),
        "count": lambda: _cmd_count(bag),
        "equid": lambda: _cmd_equid(bag),
        "spacing": lambda: _cmd_spacing(bag),
        "coro-search": lambda: _cmd_coro(bag),
        "vaaler": lambda: _cmd_vaaler(bag),
        "linear": lambda: _cmd_linear(bag),
        "gc": lambda: _cmd_gc(bag),
        "e3": lambda: _cmd_e3(bag),
        "f3": lambda: _cmd_f3(bag, seed),
        "report": lambda: _cmd_report(bag),
        "fn-count": lambda: _cmd_fn_count(bag),
        "theo1-mc": lambda: _cmd_theo1(bag, seed),
        "sieve-error": lambda: _cmd_sieve_error(bag),
    }
    runner = builders[command]()
    for k in ("cache", "max_norm"):
        if k in merged and k not in bag.used:
            bag.used[k] = merged[k]
    config = ExperimentConfig(command, dict(sorted(bag.used.items())), seed, output, fmt, threads, merged)
    return config, runner


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def render(config: ExperimentConfig, cols: list[str], rows: list[dict[str, Any]], wall: float) -> str:
    head = [
        f"# gaussdioph {_version()} command={config.command}",
        f"# params={json.dumps(_jsonable(config.parameters), sort_keys=True)}",
        f"# seed={config.seed} threads={config.threads}",
        f"# wall_time_s={wall:.3f}",
    ]
    if config.format == "json":
        body = json.dumps({"columns": cols, "rows": _jsonable(rows), "seed": config.seed},
                          sort_keys=True, indent=1) + "\n"
    else:
        cols = [c for c in cols if c != "seed"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["seed"] + cols)
        for r in rows:
            w.writerow([config.seed] + [_cell(r.get(c)) for c in cols])
        body = buf.getvalue()
    return "\n".join(head) + "\n" + body


def report_body(text: str) -> str:
    """The report without its '#' header lines."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config, runner = parse_and_validate(argv)
    except UsageError as exc:
        print(f"gaussdioph: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingFieldError as exc:
        print(f"gaussdioph: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, ArithmeticError) as exc:
        print(f"gaussdioph: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    t0 = time.perf_counter()
    try:
        cols, rows = runner()
    except MissingFieldError as exc:
        print(f"gaussdioph: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except gsieve.CacheFormatError as exc:
        print(f"gaussdioph: cache error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except FileExistsError as exc:
        print(f"gaussdioph: refusing to overwrite cache: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except Exception as exc:  # surfaced verbatim
        print(f"gaussdioph: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = render(config, cols, rows, time.perf_counter() - t0)
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
