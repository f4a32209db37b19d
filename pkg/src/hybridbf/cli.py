"""Command-line front end: Monte-Carlo simulation, partitioning and checks.

Subcommands
-----------
simulate      run a scenario file and write one CSV row per design
summarize     mean/std per scheme, SNR and RF-chain count from a results CSV
partition     greedy or exhaustive partition of a dumped covariance/channel
channel       dump the channel (and covariance) of one trial of a scenario
bounds-check  eigenvalue bound sweeps for the l1 surrogate
count         number of candidate partitions

Scenario files are INI-style ``key = value`` sections::

    [tx]
    geometry = ula        ; ula | upa
    n = 16                ; ula only
    rows = 4              ; upa only
    cols = 4
    spacing = 0.5

    [rx]
    geometry = ula
    n = 4

    [ofdm]
    n_subcarriers = 64
    cp_length = 16        ; default n_subcarriers / 4
    rolloff = 1.0

    [channel]
    n_cluster = 8
    n_subray = 10
    angle_spread = 5      ; degrees
    az_range = 180        ; degrees
    el_range = 90

    [run]
    n_rf = 1, 2, 4, 8
    snr_db = -10, 0, 10
    trials = 20
    seed = 1
    schemes = fully_digital, fully_connected, fixed:adjacent, dynamic_greedy
    output = results.csv  ; optional, relative to the config file

Exit status is 0 on success, 1 on configuration or input errors, 2 on
command-line usage errors and 3 when a simulation completed but some scheme
could not be designed (for example an exhaustive search above the size
limit).
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .array import UPA, ULA, ArrayGeometry
from .channel import (ClusterConfig, FreqChannel, OfdmGrid, dump_channel_csv,
                      freq_response, generate_clustered, load_channel_csv, trial_seed)
from .evaluator import Scheme, design_scheme, evaluate_design, parse_scheme
from .partitioner import (DEFAULT_EXHAUSTIVE_LIMIT, SearchTooLargeError, Score,
                          approx_lambda1, equal_size_count, exact_objective,
                          exhaustive_partition, exp_corr_lb, exp_corr_matrix,
                          greedy_partition, lambda1_bounds, stirling2)
from .spectral import Covariance, dump_covariance_csv, load_covariance_csv, sample_covariance

__all__ = [
    "Scenario",
    "ConfigError",
    "RESULT_COLUMNS",
    "load_scenario",
    "simulate_trial",
    "simulate",
    "format_rows",
    "summarize",
    "random_correlation",
    "bounds_check",
    "main",
]

RESULT_COLUMNS = ("scheme", "snr_db", "n_rf", "n_tx", "trial", "spectral_efficiency",
                  "relaxed_objective", "partition", "wall_time_ms")
SUMMARY_COLUMNS = ("scheme", "snr_db", "n_rf", "count", "se_mean", "se_std",
                   "relaxed_mean", "relaxed_std")

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 3


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    """12 significant digits, ``.`` decimal separator, no negative zero."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


# ---------------------------------------------------------------- scenario

@dataclass(frozen=True)
class Scenario:
    tx: ArrayGeometry
    rx: ArrayGeometry
    n_rf: tuple
    snr_db: tuple
    grid: OfdmGrid = OfdmGrid.desk(64)
    clusters: ClusterConfig = ClusterConfig()
    trials: int = 1
    seed: int = 0
    schemes: tuple = (Scheme("fully_digital"),)
    rolloff: float = 1.0
    output: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.schemes:
            raise ConfigError("scheme list is empty")
        if not self.snr_db:
            raise ConfigError("snr_db list is empty")
        if not self.n_rf and any(s.family != "fully_digital" for s in self.schemes):
            raise ConfigError("n_rf list is empty")
        for n in self.n_rf:
            if not 1 <= n <= self.tx.n_elements:
                raise ConfigError(f"n_rf = {n} outside 1..{self.tx.n_elements}")


_SCHEMA = {
    "tx": {"geometry", "n", "rows", "cols", "spacing"},
    "rx": {"geometry", "n", "rows", "cols", "spacing"},
    "ofdm": {"n_subcarriers", "cp_length", "sample_period", "rolloff"},
    "channel": {"n_cluster", "n_subray", "angle_spread", "az_range", "el_range"},
    "run": {"n_rf", "snr_db", "trials", "seed", "schemes", "output"},
}
_REQUIRED = {"tx", "rx", "run"}


def _key_lines(text: str) -> dict:
    """``(section, key) -> line number`` for diagnostics."""
    where, section = {}, None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            where[(section, None)] = lineno
            continue
        m = re.match(r"([^=:;#\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            where.setdefault((section, m.group(1).strip().lower()), lineno)
    return where


class _Fields:
    def __init__(self, parser, where, source):
        self.p, self.where, self.source = parser, where, source

    def err(self, section, key, msg):
        line = self.where.get((section, key)) or self.where.get((section, None))
        loc = f"{self.source}:{line}" if line else self.source
        field_ = f"[{section}] {key}" if key else f"[{section}]"
        return ConfigError(f"{loc}: {field_}: {msg}")

    def has(self, section, key):
        return self.p.has_option(section, key)

    def raw(self, section, key, default=None):
        if self.p.has_option(section, key):
            return self.p.get(section, key).strip()
        if default is None:
            raise self.err(section, None, f"missing required key {key!r}")
        return default

    def conv(self, section, key, fn, default=None, what="value"):
        raw = self.raw(section, key, None if default is None else str(default))
        try:
            return fn(raw)
        except (ValueError, TypeError) as exc:
            raise self.err(section, key, f"invalid {what} {raw!r} ({exc})") from None

    def get_int(self, section, key, default=None):
        return self.conv(section, key, _to_int, default, "integer")

    def get_float(self, section, key, default=None):
        return self.conv(section, key, float, default, "number")

    def get_list(self, section, key, fn, what):
        raw = self.raw(section, key)
        items = [t.strip() for t in raw.split(",") if t.strip()]
        out = []
        for tok in items:
            try:
                out.append(fn(tok))
            except (ValueError, TypeError) as exc:
                raise self.err(section, key, f"invalid {what} {tok!r} ({exc})") from None
        return tuple(out)


def _to_int(s: str) -> int:
    return int(s.strip(), 10)


def _geometry(f: _Fields, section: str) -> ArrayGeometry:
    kind = f.raw(section, "geometry", "ula").lower()
    spacing = f.get_float(section, "spacing", 0.5)
    try:
        if kind == "ula":
            return ULA(f.get_int(section, "n"), spacing)
        if kind == "upa":
            return UPA(f.get_int(section, "rows"), f.get_int(section, "cols"), spacing)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise f.err(section, None, str(exc)) from None
    raise f.err(section, "geometry", f"unknown geometry {kind!r} (ula or upa)")


def parse_scenario(text: str, source: str = "<config>", base_dir=None) -> Scenario:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"),
                                       interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}".replace("\n", " ")) from None
    where = _key_lines(text)
    f = _Fields(parser, where, source)
    for section in parser.sections():
        if section not in _SCHEMA:
            raise f.err(section, None, "unknown section")
        for key in parser.options(section):
            if key not in _SCHEMA[section]:
                raise f.err(section, key, "unknown key")
    for section in _REQUIRED - set(parser.sections()):
        raise ConfigError(f"{source}: missing section [{section}]")

    tx, rx = _geometry(f, "tx"), _geometry(f, "rx")
    if not parser.has_section("ofdm"):
        parser.add_section("ofdm")
    if not parser.has_section("channel"):
        parser.add_section("channel")
    K = f.get_int("ofdm", "n_subcarriers", 64)
    try:
        grid = OfdmGrid(K, f.get_int("ofdm", "cp_length", max(K // 4, 1)),
                        f.get_float("ofdm", "sample_period", 1.0))
    except ValueError as exc:
        raise f.err("ofdm", None, str(exc)) from None
    rolloff = f.get_float("ofdm", "rolloff", 1.0)
    if not 0.0 <= rolloff <= 1.0:
        raise f.err("ofdm", "rolloff", "roll-off must lie in [0, 1]")
    try:
        clusters = ClusterConfig(
            n_cluster=f.get_int("channel", "n_cluster", 8),
            n_subray=f.get_int("channel", "n_subray", 10),
            angle_spread=f.get_float("channel", "angle_spread", 5.0),
            az_range=f.get_float("channel", "az_range", 180.0),
            el_range=f.get_float("channel", "el_range", 90.0),
        )
    except ValueError as exc:
        raise f.err("channel", None, str(exc)) from None

    schemes = f.get_list("run", "schemes", parse_scheme, "scheme")
    n_rf = f.get_list("run", "n_rf", _to_int, "RF-chain count") if f.has("run", "n_rf") else ()
    snr = f.get_list("run", "snr_db", float, "SNR")
    seed = f.get_int("run", "seed", 0)
    if seed < 0:
        raise f.err("run", "seed", "seed must be non-negative")
    output = None
    if f.has("run", "output"):
        output = f.raw("run", "output")
        if base_dir is not None and not os.path.isabs(output):
            output = str(Path(base_dir) / output)
    try:
        return Scenario(tx=tx, rx=rx, n_rf=n_rf, snr_db=snr, grid=grid, clusters=clusters,
                        trials=f.get_int("run", "trials", 1), seed=seed, schemes=schemes,
                        rolloff=rolloff, output=output)
    except ConfigError as exc:
        raise f.err("run", None, str(exc)) from None


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path), path.parent)


# -------------------------------------------------------------- simulation

def trial_channel(scn: Scenario, trial: int) -> FreqChannel:
    paths = generate_clustered(scn.clusters, scn.tx, scn.rx, scn.grid,
                               trial_seed(scn.seed, trial))
    return freq_response(paths, scn.tx, scn.rx, scn.grid, scn.rolloff)


@dataclass
class TrialResult:
    trial: int
    rows: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    channel_hash: str = ""


def _rf_counts(scn: Scenario, scheme: Scheme):
    return (scn.tx.n_elements,) if scheme.family == "fully_digital" else scn.n_rf


def simulate_trial(scn: Scenario, trial: int,
                   exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> TrialResult:
    """All rows of one trial, ordered by SNR, then scheme, then RF-chain count.

    The channel is drawn once and every design is computed once per
    ``(scheme, n_rf)``; only the baseband stage depends on the SNR.
    """
    ch = trial_channel(scn, trial)
    cov = sample_covariance(ch)
    out = TrialResult(trial, channel_hash=ch.digest())
    designs = {}
    for snr in scn.snr_db:
        for scheme in scn.schemes:
            for n_rf in _rf_counts(scn, scheme):
                key = (scheme.label, n_rf)
                if key not in designs:
                    t0 = time.perf_counter()
                    try:
                        F, part = design_scheme(scheme, cov, scn.tx, n_rf, exhaustive_limit)
                    except (SearchTooLargeError, ValueError, np.linalg.LinAlgError) as exc:
                        designs[key] = None
                        out.errors.append((scheme.label, n_rf, str(exc)))
                        continue
                    designs[key] = (F, part, 1e3 * (time.perf_counter() - t0))
                design = designs[key]
                if design is None:
                    continue
                F, part, design_ms = design
                t0 = time.perf_counter()
                res = evaluate_design(ch, F, snr, 1.0, part)
                ms = design_ms + 1e3 * (time.perf_counter() - t0)
                # design time is charged to the first SNR only
                designs[key] = (F, part, 0.0)
                out.rows.append({
                    "scheme": scheme.label,
                    "snr_db": snr,
                    "n_rf": n_rf,
                    "n_tx": scn.tx.n_elements,
                    "trial": trial,
                    "spectral_efficiency": max(res.spectral_efficiency, 0.0),
                    "relaxed_objective": res.relaxed_objective,
                    "partition": part.compact() if part is not None else "",
                    "wall_time_ms": ms,
                })
    return out


def _trial_job(args):
    scn, trial, limit = args
    return simulate_trial(scn, trial, limit)


def simulate(scn: Scenario, workers: int = 1,
             exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> list[TrialResult]:
    """Run every trial; results come back in trial order whatever the scheduling."""
    jobs = [(scn, t, exhaustive_limit) for t in range(scn.trials)]
    if workers <= 1 or scn.trials == 1:
        return [_trial_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_job, jobs))


def format_rows(results, timing: bool = True, channel_hash: bool = False) -> str:
    cols = list(RESULT_COLUMNS) + (["channel_hash"] if channel_hash else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for tr in results:
        for row in tr.rows:
            rec = [row["scheme"], fmt(row["snr_db"]), fmt(row["n_rf"]), fmt(row["n_tx"]),
                   fmt(row["trial"]), fmt(row["spectral_efficiency"]),
                   fmt(row["relaxed_objective"]), row["partition"],
                   fmt(row["wall_time_ms"]) if timing else "0"]
            if channel_hash:
                rec.append(tr.channel_hash)
            w.writerow(rec)
    return buf.getvalue()


def summarize(csv_text: str) -> str:
    """Aggregate raw rows into mean/std (population) per scheme, SNR and ``n_rf``.

    Works from the CSV text alone, so re-aggregating a saved results file
    reproduces the summary exactly.  Cells keep first-appearance order.
    """
    reader = csv.DictReader(io.StringIO(csv_text))
    missing = set(RESULT_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"results CSV lacks columns {sorted(missing)}")
    cells: dict = {}
    for lineno, row in enumerate(reader, 2):
        key = (row["scheme"], row["snr_db"], row["n_rf"])
        try:
            se, rel = float(row["spectral_efficiency"]), float(row["relaxed_objective"])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric metric") from None
        cells.setdefault(key, ([], []))
        cells[key][0].append(se)
        cells[key][1].append(rel)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for (scheme, snr, n_rf), (se, rel) in cells.items():
        se, rel = np.asarray(se), np.asarray(rel)
        w.writerow([scheme, snr, n_rf, len(se), fmt(se.mean()), fmt(se.std()),
                    fmt(rel.mean()), fmt(rel.std())])
    return buf.getvalue()


# ------------------------------------------------------------------ checks

def random_correlation(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random Hermitian PSD matrix with unit diagonal.

    ``rank`` defaults to a draw from ``n..2n``, so the matrix is generically
    full rank and its off-diagonal magnitudes are not all equal.
    """
    m = rank or int(rng.integers(n, 2 * n + 1))
    G = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    A = G @ G.conj().T
    d = 1.0 / np.sqrt(np.real(np.diag(A)))
    A = A * d[:, None] * d[None, :]
    A = 0.5 * (A + A.conj().T)
    np.fill_diagonal(A, 1.0)
    return A


def bounds_check(trials: int = 1000, n_min: int = 2, n_max: int = 16, seed: int = 0,
                 rho_grid=None, n_corr=(2, 64)) -> dict:
    """Count bound violations of the l1 surrogate and the exponential identity error."""
    rng = np.random.Generator(np.random.PCG64(seed))
    violations = 0
    for _ in range(trials):
        n = int(rng.integers(n_min, n_max + 1))
        cov = Covariance(random_correlation(n, rng))
        lo, hi = lambda1_bounds(cov)
        lam = approx_lambda1(cov, range(1, n + 1))
        violations += not (lo <= lam <= hi)
    if rho_grid is None:
        rho_grid = np.round(np.append(np.arange(0.0, 1.0, 0.1), 0.99), 10)
    worst = 0.0
    for r in rho_grid:
        for n in range(n_corr[0], n_corr[1] + 1):
            # only |rho| matters; use a complex phase to cover the general case
            cov = Covariance(exp_corr_matrix(r * np.exp(0.7j), n))
            worst = max(worst, abs(approx_lambda1(cov, range(1, n + 1)) - exp_corr_lb(r, n)))
    return {"trials": trials, "violations": violations, "exp_corr_max_error": worst}


# --------------------------------------------------------------------- cli

def _err(msg: str) -> None:
    print(f"hybridbf: error: {msg}", file=sys.stderr)


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text)


def _cmd_simulate(a) -> int:
    scn = load_scenario(a.config)
    if a.seed is not None:
        scn = replace(scn, seed=a.seed)
    results = simulate(scn, a.workers, a.exhaustive_limit)
    text = format_rows(results, timing=not a.no_timing, channel_hash=a.channel_hash)
    _write(text, a.out or scn.output)
    if a.summary:
        _write(summarize(text), a.summary)
    seen: dict = {}
    for tr in results:
        for scheme, n_rf, msg in tr.errors:
            seen.setdefault((scheme, n_rf, msg), []).append(tr.trial)
    for (scheme, n_rf, msg), trials in seen.items():
        _err(f"scheme {scheme} with n_rf={n_rf} skipped in {len(trials)} trial(s): {msg}")
    return EXIT_PARTIAL if seen else EXIT_OK


def _cmd_summarize(a) -> int:
    try:
        text = Path(a.results).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {a.results}: {exc.strerror}") from None
    _write(summarize(text), a.out)
    return EXIT_OK


def _load_cov(a) -> Covariance:
    if a.cov:
        return load_covariance_csv(a.cov)
    return sample_covariance(load_channel_csv(a.channel))


def _cmd_partition(a) -> int:
    cov = _load_cov(a)
    if a.method == "greedy":
        part = greedy_partition(cov, a.n_rf)
    else:
        part, _ = exhaustive_partition(cov, a.n_rf, Score(a.score), a.equal_size,
                                       limit=a.exhaustive_limit)
    _write(part.to_text(), a.out)
    print(f"# objective/K exact={fmt(exact_objective(cov, part))}", file=sys.stderr)
    return EXIT_OK


def _cmd_channel(a) -> int:
    scn = load_scenario(a.config)
    if a.seed is not None:
        scn = replace(scn, seed=a.seed)
    ch = trial_channel(scn, a.trial)
    if not (a.out or a.cov_out):
        raise ConfigError("nothing to write: give --out and/or --cov-out")
    if a.out:
        dump_channel_csv(ch, a.out)
    if a.cov_out:
        dump_covariance_csv(sample_covariance(ch), a.cov_out)
    return EXIT_OK


def _cmd_bounds(a) -> int:
    rep = bounds_check(a.trials, a.n_min, a.n_max, a.seed if a.seed is not None else 0)
    ok3 = rep["violations"] == 0
    ok4 = rep["exp_corr_max_error"] <= 1e-12
    lines = [
        f"sandwich: {rep['violations']} violations in {rep['trials']} matrices "
        f"[{'PASS' if ok3 else 'FAIL'}]",
        f"exponential correlation: max |error| = {rep['exp_corr_max_error']:.3e} "
        f"[{'PASS' if ok4 else 'FAIL'}]",
    ]
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK if ok3 and ok4 else EXIT_ERROR


def _cmd_count(a) -> int:
    if a.n < 0 or a.k < 0:
        raise ConfigError("n and k must be non-negative")
    total = stirling2(a.n, a.k)
    lines = [f"stirling2({a.n},{a.k}) = {total}"]
    if a.k >= 1 and a.n % a.k == 0:
        lines.append(f"equal_size_count({a.n},{a.k}) = {equal_size_count(a.n, a.k)}")
    else:
        lines.append(f"equal_size_count({a.n},{a.k}) = n/a (k does not divide n)")
    verdict = "within" if total <= a.exhaustive_limit else "above"
    lines.append(f"exhaustive search {verdict} limit {a.exhaustive_limit}")
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK


def _positive(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(s):
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybridbf", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=False):
        if config:
            sp.add_argument("--config", required=True, help="scenario file")
            sp.add_argument("--seed", type=_seed, help="override the base seed")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--exhaustive-limit", type=_positive, default=DEFAULT_EXHAUSTIVE_LIMIT,
                        help="largest candidate count for exhaustive search")

    sp = sub.add_parser("simulate", help="run a scenario")
    common(sp, config=True)
    sp.add_argument("--workers", type=_positive, default=1, help="parallel trial workers")
    sp.add_argument("--summary", help="also write mean/std per cell to this file")
    sp.add_argument("--no-timing", action="store_true",
                    help="write 0 for wall_time_ms so output is byte-reproducible")
    sp.add_argument("--channel-hash", action="store_true",
                    help="append a channel digest column")
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("summarize", help="aggregate a results CSV")
    sp.add_argument("results")
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_summarize)

    sp = sub.add_parser("partition", help="partition a dumped covariance or channel")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--cov", help="covariance CSV (i,j,re,im)")
    src.add_argument("--channel", help="channel CSV (k,rx,tx,re,im)")
    sp.add_argument("--n-rf", type=_positive, required=True)
    sp.add_argument("--method", choices=("greedy", "exhaustive"), default="greedy")
    sp.add_argument("--score", choices=("exact", "approx"), default="exact")
    sp.add_argument("--equal-size", action="store_true")
    common(sp)
    sp.set_defaults(func=_cmd_partition)

    sp = sub.add_parser("channel", help="dump one trial's channel")
    common(sp, config=True)
    sp.add_argument("--trial", type=int, default=0)
    sp.add_argument("--cov-out", help="also write the sample covariance")
    sp.set_defaults(func=_cmd_channel)

    sp = sub.add_parser("bounds-check", help="eigenvalue bound sweeps")
    sp.add_argument("--trials", type=_positive, default=1000)
    sp.add_argument("--n-min", type=_positive, default=2)
    sp.add_argument("--n-max", type=_positive, default=16)
    sp.add_argument("--seed", type=_seed)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("count", help="count candidate partitions")
    sp.add_argument("n", type=int)
    sp.add_argument("k", type=int)
    common(sp)
    sp.set_defaults(func=_cmd_count)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SearchTooLargeError, ValueError, OSError,
            np.linalg.LinAlgError) as exc:
        _err(str(exc))
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
