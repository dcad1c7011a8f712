"""Command-line front end: ``hyperdual`` / ``python -m hyperdual``.

A run is a grid of cells. Each cell is one check (an identity at one n, K,
a lemma at one shift, ...) at one random point, and draws that point from
its own random stream keyed by (seed, cell index). The report lists one
record per cell in index order plus pass/fail counts.

Settings come from, lowest precedence first: built-in defaults, a key=value
config file (``--config``), ``HYPERDUAL_*`` environment variables, and
command-line flags.

Exit codes: 0 every cell passed, 1 at least one mismatch, 2 invalid
configuration or a cell that could not find a pole-free point.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction

import mpmath

from .combinatorics import compositions
from .errors import DomainError, NonSimplePoleError, ResamplingExhausted
from .identities import (
    EllipticPoint,
    IdentityId,
    KernelPoint,
    OddFunctionKind,
    RationalPoint,
    Side,
    kernel_eval,
    limit_relation_check,
    limit_side_decomposition_holds,
    plane_point,
    quasiperiodicity_deviation,
    riemann_check,
    side_eval,
    summand_eval,
    trig_to_sym_factor,
    wk_eval,
)
from .numerics import MPComplex, PrecisionPolicy, relative_deviation
from .residues import LocusKind, PoleLocus, lemma1_check, lemma2_check, phi_prefactor, star_point, wk_residue
from .sampling import (
    cell_rng,
    random_elliptic_point,
    random_kernel_point,
    random_rational,
    random_rational_point,
    random_sqrt_point,
    sample_until_regular,
)

SCHEMA_VERSION = 1
ENV_PREFIX = "HYPERDUAL_"
SUITES = ("all", "main", "lemmas", "kernels", "limits", "elliptic")
SUITE_ORDER = ("main", "elliptic", "lemmas", "kernels", "limits")

# grid used by a suite when --n / --K are not given
DEFAULT_GRID = {
    "main": ("1..3", "0..4"),
    "elliptic": ("2", "1..3"),
    "lemmas": ("2..3", "0..4"),
    "kernels": ("2..4", "0"),
    "limits": ("2..3", "1..4"),
}

HOME_SUITE = {
    IdentityId.Rational_I2: "main",
    IdentityId.Trig_I5: "main",
    IdentityId.SymTrig_p4: "main",
    IdentityId.Elliptic_A6: "elliptic",
    IdentityId.Kernel_I1: "kernels",
    IdentityId.RuijMac_I6: "kernels",
    IdentityId.RatKernel_A2: "kernels",
    IdentityId.RatLimit_A1: "limits",
}


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


def parse_range(text: str) -> tuple:
    """'a..b' (inclusive), 'a,b,c' or 'a' -> tuple of ints."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = tuple(range(int(lo), int(hi) + 1))
        else:
            values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse range {text!r}") from exc
    if not values:
        raise ConfigError(f"range {text!r} is empty")
    return values


def parse_nomes(text: str) -> tuple:
    try:
        values = tuple(Fraction(part.strip()) for part in str(text).split(",") if part.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse nome list {text!r}") from exc
    if not values:
        raise ConfigError("nome list is empty")
    for p in values:
        if not 0 < abs(p) < 1:
            raise ConfigError(f"nome must satisfy 0 < |p| < 1, got {p}")
    return values


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings. ``n``/``K``/``r`` are ``None`` for per-suite defaults."""

    suite: str = "all"
    identity: IdentityId | None = None
    n: tuple | None = None
    K: tuple | None = None
    r: tuple | None = None
    trials: int = 3
    seed: int = 0
    precision_bits: int = 256
    nome: tuple = (Fraction(1, 5),)
    tolerance_bits: int = 150
    format: str = "json"
    jobs: int = 1
    timings: bool = False
    prefactor: str = "derived"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"suite must be one of {SUITES}, got {self.suite!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.format not in ("json", "text"):
            raise ConfigError(f"format must be json or text, got {self.format!r}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.prefactor not in ("derived", "printed"):
            raise ConfigError(f"prefactor must be derived or printed, got {self.prefactor!r}")
        for name in ("n", "K", "r"):
            values = getattr(self, name)
            if values is not None and len(values) == 0:
                raise ConfigError(f"{name} range is empty")
        if self.n is not None and min(self.n) < 1:
            raise ConfigError("n must be >= 1")
        if self.K is not None and min(self.K) < 0:
            raise ConfigError("K must be >= 0")
        if self.r is not None and min(self.r) < 0:
            raise ConfigError("r must be >= 0")
        if not self.nome:
            raise ConfigError("nome list is empty")
        try:
            self.policy
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def policy(self) -> PrecisionPolicy:
        return PrecisionPolicy(self.precision_bits, 32, self.tolerance_bits)

    def as_dict(self) -> dict:
        """JSON-ready view; exact-only runs still list the numeric fields."""
        return {
            "suite": self.suite,
            "identity": self.identity.value if self.identity else None,
            "n": list(self.n) if self.n else None,
            "K": list(self.K) if self.K is not None else None,
            "r": list(self.r) if self.r is not None else None,
            "trials": self.trials,
            "seed": self.seed,
            "precision_bits": self.precision_bits,
            "nome": [str(p) for p in self.nome],
            "tolerance_bits": self.tolerance_bits,
            "prefactor": self.prefactor,
        }


@dataclass(frozen=True)
class Cell:
    index: int
    suite: str
    check: str
    identity: str
    n: int | None = None
    K: int | None = None
    r: int | None = None
    p: int | None = None
    k: tuple | None = None
    s: str | None = None
    nome: str | None = None
    trial: int = 0


@dataclass
class RunReport:
    config: dict
    cells: list = field(default_factory=list)
    error: str | None = None

    @property
    def summary(self) -> dict:
        passed = sum(1 for c in self.cells if c["equal"])
        return {"total": len(self.cells), "passed": passed, "failed": len(self.cells) - passed}

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "cells": self.cells,
            "summary": self.summary,
            "error": self.error,
        }


# grid construction


def _grid(config: RunConfig, suite: str):
    default_n, default_K = DEFAULT_GRID[suite]
    ns = config.n or parse_range(default_n)
    Ks = config.K if config.K is not None else parse_range(default_K)
    return ns, Ks


def _suite_specs(config: RunConfig, suite: str):
    """Yield Cell keyword dicts (without index/trial) for one suite."""
    ns, Ks = _grid(config, suite)
    if suite == "main":
        for identity in (IdentityId.Rational_I2, IdentityId.Trig_I5, IdentityId.SymTrig_p4):
            for n in ns:
                for K in Ks:
                    yield dict(suite=suite, check="identity", identity=identity.value, n=n, K=K)
        for n in ns:
            for K in Ks:
                if K >= 1:
                    yield dict(suite=suite, check="plane", identity=IdentityId.SymTrig_p4.value, n=n, K=K)
    elif suite == "elliptic":
        for nome in config.nome:
            for n in ns:
                for K in Ks:
                    yield dict(suite=suite, check="identity", identity=IdentityId.Elliptic_A6.value,
                               n=n, K=K, nome=str(nome))
            for n in ns:
                for K in Ks:
                    for group in ("u", "v"):
                        yield dict(suite=suite, check=f"quasiperiodicity_{group}",
                                   identity=IdentityId.Elliptic_A6.value, n=n, K=K, nome=str(nome))
    elif suite == "lemmas":
        sym = IdentityId.SymTrig_p4.value
        for n in ns:
            if n < 2:
                continue
            for K in Ks:
                for p in range(-2, 3):
                    yield dict(suite=suite, check="lemma1", identity=sym, n=n, K=K, p=p)
            for K in Ks:
                for k in compositions(n, K):
                    for p in range(1, k[0] + 1):
                        yield dict(suite=suite, check="lemma2", identity=sym, n=n, K=K, p=p, k=k)
            for K in Ks:
                for p in range(1, K + 1):
                    yield dict(suite=suite, check="residue_relation", identity=sym, n=n, K=K, p=p)
    elif suite == "kernels":
        for identity in (IdentityId.Kernel_I1, IdentityId.RuijMac_I6, IdentityId.RatKernel_A2):
            kinds = (OddFunctionKind.LINEAR,) if identity is IdentityId.RatKernel_A2 else tuple(OddFunctionKind)
            for s in kinds:
                for n in ns:
                    rs = config.r if config.r is not None else range(n + 1)
                    for r in rs:
                        if r <= n:
                            yield dict(suite=suite, check="identity", identity=identity.value,
                                       n=n, r=r, s=s.value)
        for s in OddFunctionKind:
            yield dict(suite=suite, check="riemann", identity=IdentityId.Kernel_I1.value, s=s.value)
    elif suite == "limits":
        lim = IdentityId.RatLimit_A1.value
        for n in ns:
            yield dict(suite=suite, check="limit_relation", identity=lim, n=n)
            for K in Ks:
                yield dict(suite=suite, check="identity", identity=lim, n=n, K=K)
                yield dict(suite=suite, check="decomposition", identity=lim, n=n, K=K)


def build_cells(config: RunConfig) -> list:
    if config.identity is not None:
        home = HOME_SUITE[config.identity]
        if config.suite not in ("all", home):
            raise ConfigError(f"{config.identity.value} is not part of suite {config.suite!r}")
        suites = (home,)
    else:
        suites = SUITE_ORDER if config.suite == "all" else (config.suite,)
    cells = []
    for suite in suites:
        for spec in _suite_specs(config, suite):
            if config.identity is not None and (
                spec["identity"] != config.identity.value or spec["check"] != "identity"
            ):
                continue
            for trial in range(config.trials):
                cells.append(Cell(index=len(cells), trial=trial, **spec))
    return cells


# canonical digests


def _canonical(obj) -> str:
    if obj is None:
        return "-"
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, bool):
        return str(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, MPComplex):
        with mpmath.workprec(obj.precision_bits):
            return f"({mpmath.nstr(obj.real, 50)},{mpmath.nstr(obj.imag, 50)})"
    if isinstance(obj, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(obj, 50)
    if isinstance(obj, (tuple, list)):
        return "[" + ",".join(_canonical(x) for x in obj) + "]"
    if isinstance(obj, PrecisionPolicy):
        return f"policy({obj.working_bits},{obj.guard_bits},{obj.agreement_bits})"
    if hasattr(obj, "__dataclass_fields__"):
        return type(obj).__name__ + "(" + ",".join(
            f"{f.name}={_canonical(getattr(obj, f.name))}" for f in fields(obj)
        ) + ")"
    return str(obj)


def digest(obj) -> str | None:
    if obj is None:
        return None
    return hashlib.sha256(_canonical(obj).encode()).hexdigest()[:16]


# cell runners; each returns (point, lhs, rhs, equal, deviation)


def _run_identity_exact(cell, rng, config):
    identity = IdentityId(cell.identity)
    draw = (lambda g: random_rational_point(g, cell.n)) if identity is IdentityId.Rational_I2 else (
        lambda g: random_sqrt_point(g, cell.n)
    )

    def evaluate(point):
        diff = wk_eval(identity, cell.n, cell.K, point)
        equal = diff.is_exact_zero
        if identity is IdentityId.Trig_I5:
            # every summand must equal t^K times the symmetric-form summand
            factor = trig_to_sym_factor(cell.K, point)
            for k in compositions(cell.n, cell.K):
                for side in Side:
                    equal &= summand_eval(IdentityId.Trig_I5, side, k, point) == factor * summand_eval(
                        IdentityId.SymTrig_p4, side, k, point
                    )
        return diff.lhs, diff.rhs, equal

    return draw, evaluate


def _run_plane(cell, rng, config):
    def evaluate(point):
        at = plane_point(point)
        lhs = side_eval(IdentityId.SymTrig_p4, Side.LHS, cell.n, cell.K, at)
        rhs = side_eval(IdentityId.SymTrig_p4, Side.RHS, cell.n, cell.K, at)
        return lhs, rhs, lhs == 0 and rhs == 0

    return (lambda g: random_sqrt_point(g, cell.n)), evaluate


def _run_elliptic(cell, rng, config):
    nome = Fraction(cell.nome)
    policy = config.policy
    tol = mpmath.mpf(2) ** (-config.tolerance_bits)

    def draw(g):
        return random_elliptic_point(g, cell.n, nome, policy)

    if cell.check == "identity":
        def evaluate(point: EllipticPoint):
            lhs = side_eval(IdentityId.Elliptic_A6, Side.LHS, cell.n, cell.K, point)
            rhs = side_eval(IdentityId.Elliptic_A6, Side.RHS, cell.n, cell.K, point)
            fine = point.with_policy(policy.doubled())
            lhs2 = side_eval(IdentityId.Elliptic_A6, Side.LHS, cell.n, cell.K, fine)
            rhs2 = side_eval(IdentityId.Elliptic_A6, Side.RHS, cell.n, cell.K, fine)
            deviation = relative_deviation(lhs, rhs, policy.working_bits)
            stable = relative_deviation(lhs, lhs2, 2 * policy.working_bits) <= tol and relative_deviation(
                rhs, rhs2, 2 * policy.working_bits) <= tol
            return lhs, rhs, bool(deviation <= tol and stable), deviation
    else:
        group = cell.check.rsplit("_", 1)[1]

        def evaluate(point: EllipticPoint):
            deviations = [quasiperiodicity_deviation(side, cell.n, cell.K, point, group) for side in Side]
            deviation = max(deviations)
            return None, None, bool(deviation <= tol), deviation

    return draw, evaluate


def _run_lemma(cell, rng, config):
    def draw(g):
        return random_sqrt_point(g, cell.n)

    if cell.check == "lemma1":
        return draw, lambda point: (None, None, lemma1_check(cell.n, cell.K, cell.p, point))
    if cell.check == "lemma2":
        return draw, lambda point: (None, None, lemma2_check(cell.n, cell.k, cell.p, point, config.prefactor))

    def evaluate(point):
        at = PoleLocus(LocusKind.UV, cell.p).constrain(point)
        residue = wk_residue(cell.n, cell.K, cell.p, point)
        reduced = wk_eval(IdentityId.SymTrig_p4, cell.n, cell.K - cell.p, star_point(at)).value
        rhs = phi_prefactor(cell.p, at, config.prefactor) * reduced
        return residue, rhs, residue == rhs == 0

    return draw, evaluate


def _run_kernel(cell, rng, config):
    if cell.check == "riemann":
        s = OddFunctionKind(cell.s)
        draw = lambda g: tuple(random_rational(g) for _ in range(4))  # noqa: E731
        return draw, lambda xs: (None, None, riemann_check(s, *xs))
    identity = IdentityId(cell.identity)
    s = OddFunctionKind(cell.s)

    def evaluate(point: KernelPoint):
        lhs = kernel_eval(identity, Side.LHS, s, cell.n, cell.r, point)
        rhs = kernel_eval(identity, Side.RHS, s, cell.n, cell.r, point)
        return lhs, rhs, lhs == rhs

    return (lambda g: random_kernel_point(g, cell.n)), evaluate


def _run_limit(cell, rng, config):
    draw = lambda g: random_rational_point(g, cell.n)  # noqa: E731
    if cell.check == "limit_relation":
        return draw, lambda point: (None, None, limit_relation_check(cell.n, point))
    if cell.check == "decomposition":
        return draw, lambda point: (
            None,
            None,
            all(limit_side_decomposition_holds(side, cell.n, cell.K, point) for side in Side),
        )

    def evaluate(point: RationalPoint):
        diff = wk_eval(IdentityId.RatLimit_A1, cell.n, cell.K, point)
        return diff.lhs, diff.rhs, diff.is_exact_zero

    return draw, evaluate


def _run_main(cell, rng, config):
    if cell.check == "plane":
        return _run_plane(cell, rng, config)
    return _run_identity_exact(cell, rng, config)


RUNNERS = {
    "main": _run_main,
    "elliptic": _run_elliptic,
    "lemmas": _run_lemma,
    "kernels": _run_kernel,
    "limits": _run_limit,
}


def run_cell(cell: Cell, config: RunConfig) -> dict:
    """Evaluate one cell and return its report record."""
    started = time.perf_counter()
    rng = cell_rng(config.seed, cell.index)
    draw, evaluate = RUNNERS[cell.suite](cell, rng, config)
    label = f"cell {cell.index} ({cell.suite}/{cell.check} {cell.identity} n={cell.n} K={cell.K})"
    point = lhs = rhs = deviation = error = None
    equal, resamples, exhausted = False, None, False
    try:
        point, result, resamples = sample_until_regular(rng, draw, evaluate, label=label)
        lhs, rhs, equal = result[:3]
        if len(result) > 3:
            deviation = result[3]
    except ResamplingExhausted as exc:
        error, exhausted = str(exc), True
    except NonSimplePoleError as exc:
        error = f"non-simple pole: {exc}"
    record = {
        "index": cell.index,
        "suite": cell.suite,
        "check": cell.check,
        "identity": cell.identity,
        "n": cell.n,
        "K": cell.K,
        "r": cell.r,
        "p": cell.p,
        "k": list(cell.k) if cell.k is not None else None,
        "s": cell.s,
        "nome": cell.nome,
        "trial": cell.trial,
        "seed": config.seed,
        "point_digest": digest(point),
        "lhs_digest": digest(lhs),
        "rhs_digest": digest(rhs),
        "equal": bool(equal),
        "max_deviation": float(deviation) if deviation is not None else None,
        "resample_count": resamples,
        "error": error,
        "exhausted": exhausted,
    }
    if config.timings:
        record["elapsed_s"] = round(time.perf_counter() - started, 6)
    return record


def _run_cell_star(args):
    return run_cell(*args)


def run_verify(config: RunConfig) -> tuple:
    """Run every cell of the configured grid; returns (RunReport, exit code)."""
    report = RunReport(config=config.as_dict())
    cells = build_cells(config)
    jobs = [(cell, config) for cell in cells]
    if config.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_run_cell_star, jobs, chunksize=max(1, len(jobs) // (4 * config.jobs))))
    else:
        records = [run_cell(*job) for job in jobs]
    records.sort(key=lambda rec: rec["index"])
    report.cells = records
    exhausted = [rec for rec in records if rec["exhausted"]]
    if exhausted:
        report.error = exhausted[0]["error"]
        return report, 2
    return report, 0 if all(rec["equal"] for rec in records) else 1


def emit_report(report: RunReport, fmt: str = "json") -> bytes:
    """Serialize a report: one JSON document, or one text line per cell."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n").encode()
    if fmt != "text":
        raise ConfigError(f"unknown format {fmt!r}")
    lines = []
    for rec in report.cells:
        status = "PASS" if rec["equal"] else "FAIL"
        parts = [f"{status} #{rec['index']}", f"{rec['suite']}/{rec['check']}", rec["identity"]]
        for key in ("n", "K", "r", "p", "k", "s", "nome"):
            if rec[key] is not None:
                value = ",".join(map(str, rec[key])) if key == "k" else rec[key]
                parts.append(f"{key}={value}")
        parts.append(f"trial={rec['trial']}")
        parts.append(f"resamples={rec['resample_count']}")
        if rec["max_deviation"] is not None:
            parts.append(f"dev={rec['max_deviation']:.3e}")
        if "elapsed_s" in rec:
            parts.append(f"t={rec['elapsed_s']:.3f}s")
        if rec["error"]:
            parts.append(f"error={rec['error']}")
        lines.append(" ".join(parts))
    s = report.summary
    lines.append(f"summary: total={s['total']} passed={s['passed']} failed={s['failed']}")
    if report.error:
        lines.append(f"error: {report.error}")
    return ("\n".join(lines) + "\n").encode()


# argument handling

OPTION_KEYS = (
    "identity", "suite", "n", "K", "r", "trials", "seed", "precision_bits",
    "nome", "tolerance_bits", "format", "jobs", "timings", "prefactor",
)


def _normalize_key(key: str) -> str:
    key = key.strip().replace("-", "_")
    return "K" if key in ("K", "k") else key.lower()


def read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment; keys are flag names."""
    values = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for number, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value")
        key, value = line.split("=", 1)
        key = _normalize_key(key)
        if key not in OPTION_KEYS:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def read_env(environ) -> dict:
    values = {}
    for key in OPTION_KEYS:
        name = ENV_PREFIX + key.upper()
        if name in environ:
            values[key] = environ[name]
    return values


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


def _parse_int(key, text) -> int:
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from exc


def config_from_values(values: dict) -> RunConfig:
    """Build a RunConfig from string-valued settings."""
    kwargs = {}
    for key, raw in values.items():
        if raw is None:
            continue
        if key == "identity":
            try:
                kwargs[key] = IdentityId(str(raw).strip())
            except ValueError as exc:
                names = ", ".join(i.value for i in IdentityId)
                raise ConfigError(f"unknown identity {raw!r} (choose from {names})") from exc
        elif key in ("n", "K", "r"):
            kwargs[key] = parse_range(raw)
        elif key == "nome":
            kwargs[key] = parse_nomes(raw)
        elif key in ("trials", "seed", "precision_bits", "tolerance_bits", "jobs"):
            kwargs[key] = _parse_int(key, raw)
        elif key == "timings":
            kwargs[key] = _parse_bool(raw)
        else:
            kwargs[key] = str(raw).strip()
    return RunConfig(**kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdual",
        description="Check hypergeometric duality identities and their proof lemmas at random points.",
    )
    parser.add_argument("--identity", help="run only this identity's own check")
    parser.add_argument("--suite", choices=SUITES)
    parser.add_argument("--n", help="range of n, e.g. 1..3 or 2,4")
    parser.add_argument("--K", dest="K", help="range of K")
    parser.add_argument("--r", help="range of subset sizes for the kernel identities")
    parser.add_argument("--trials", help="random points per cell (>= 1)")
    parser.add_argument("--seed", help="64-bit unsigned seed")
    parser.add_argument("--precision-bits", dest="precision_bits", help="working precision of numeric checks")
    parser.add_argument("--nome", help="nome value(s) for the elliptic suite, e.g. 0.1,0.3")
    parser.add_argument("--tolerance-bits", dest="tolerance_bits", help="numeric checks pass below 2^-bits")
    parser.add_argument("--format", choices=("json", "text"))
    parser.add_argument("--jobs", help="worker processes")
    parser.add_argument("--timings", action="store_const", const="true",
                        help="add elapsed time per cell (breaks byte-identical output)")
    parser.add_argument("--prefactor", choices=("derived", "printed"),
                        help="prefactor form used by the mixed-diagonal residue checks")
    parser.add_argument("--config", help="key=value file supplying any of the flags")
    parser.add_argument("--output", help="write the report here instead of stdout")
    return parser


def resolve_config(argv=None, environ=None) -> tuple:
    """Merge defaults, config file, environment and flags; returns (RunConfig, output path)."""
    args = build_parser().parse_args(argv)
    environ = os.environ if environ is None else environ
    values = {}
    config_path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    if config_path:
        values.update(read_config_file(config_path))
    values.update(read_env(environ))
    values.update({k: v for k, v in vars(args).items() if k in OPTION_KEYS and v is not None})
    return config_from_values(values), args.output


def main(argv=None) -> int:
    try:
        config, output = resolve_config(argv)
        report, code = run_verify(config)
        payload = emit_report(report, config.format)
    except ConfigError as exc:
        print(f"hyperdual: invalid configuration: {exc}", file=sys.stderr)
        return 2
    if output:
        with open(output, "wb") as handle:
            handle.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    if report.error:
        print(f"hyperdual: {report.error}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
