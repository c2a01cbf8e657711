"""Benchmark harness: problem registry, run configuration, trace/report
persistence, dataset and image ingestion, and reference-value caching."""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .adabt import fista_adabt
from .problems import (
    CompositeProblem,
    LogisticL2L1Instance,
    inpainting_problem,
    logistic_problem,
    make_inpainting_instance,
    make_logistic_instance,
    make_poisson_sr_instance,
    make_quadratic_growth_test,
    poisson_problem,
)
from .restart import (
    EXIT_BUDGET,
    EXIT_EPSILON,
    FreeFistaConfig,
    SolveReport,
    free_fista,
    restart_fista_fixed_step,
    vanilla_fista,
)
from .trace import TraceRecord, write_trace_csv


class ConfigError(ValueError):
    """Unknown names or inconsistent values in a run configuration."""


class DatasetFormatError(ValueError):
    """Malformed sparse dataset file."""


class PgmFormatError(ValueError):
    """Malformed binary PGM file."""


class StaleReferenceError(RuntimeError):
    """A benchmark run went below the cached reference value."""


ALGORITHMS = ("fista", "fista-restart", "fista-adabt", "free-fista")

PROBLEM_DEFAULTS: dict[str, dict] = {
    "quadratic": {"dim": 100, "L": 1e4, "mu": 1.0, "l1": 0.1},
    "logistic": {"n": 2000, "m": 100, "lambda1": 10.0, "lambda2": 3.0, "data": ""},
    "inpainting": {"side": 64, "keep": 0.5, "lam": 0.01, "levels": 3, "image": ""},
    "poisson-sr": {"side": 32, "q": 2, "bbar": 0.5, "lam": 0.01, "psf_size": 5,
                   "psf_sigma": 1.0, "peak": 40.0},
}


@dataclass
class RunConfig:
    """Everything needed to reproduce one solver run."""

    problem: str = "quadratic"
    problem_params: dict = field(default_factory=dict)
    algo: str = "free-fista"
    rho: float = 0.8
    delta: float = 0.95
    eps: float = 1e-6
    lmin: float = 1e-12
    l0: Optional[float] = None  # None = use the problem's Lipschitz hint
    C: Optional[float] = None  # None = 6.38/sqrt(rho)
    seed: int = 0
    max_iters: int = 1_000_000
    trace_path: Optional[str] = None
    report_path: Optional[str] = None
    reference_path: Optional[str] = None

    def solver_config(self, L0: float) -> FreeFistaConfig:
        return FreeFistaConfig(
            rho=self.rho,
            delta=self.delta,
            L_min=self.lmin,
            L0=L0,
            C=self.C,
            epsilon=self.eps,
            max_total_iterations=self.max_iters,
        )


def build_problem(name: str, params: dict, seed: int) -> tuple[CompositeProblem, np.ndarray]:
    """Instantiate a named problem plus its starting point (seeded)."""
    if name not in PROBLEM_DEFAULTS:
        raise ConfigError(f"unknown problem {name!r}; valid: {', '.join(sorted(PROBLEM_DEFAULTS))}")
    merged = dict(PROBLEM_DEFAULTS[name])
    for k, v in params.items():
        if k not in merged:
            raise ConfigError(f"unknown parameter {k!r} for problem {name!r}")
        merged[k] = type(merged[k])(v)
    rng = np.random.default_rng(seed)

    if name == "quadratic":
        prob = make_quadratic_growth_test(
            merged["dim"], merged["L"], merged["mu"], seed, l1_weight=merged["l1"]
        )
        x0 = rng.uniform(-1.0, 1.0, merged["dim"])
    elif name == "logistic":
        if merged["data"]:
            A, b = load_sparse_dataset(merged["data"])
            inst = LogisticL2L1Instance(A=A, b=b, lambda1=merged["lambda1"], lambda2=merged["lambda2"])
        else:
            inst = make_logistic_instance(
                merged["n"], merged["m"], merged["lambda1"], merged["lambda2"], seed
            )
        prob = logistic_problem(inst)
        x0 = rng.uniform(-1.0, 1.0, inst.n)
    elif name == "inpainting":
        image = None
        if merged["image"]:
            image = load_pgm(merged["image"])
            merged["side"] = image.shape[0]
        inst = make_inpainting_instance(
            merged["side"], merged["keep"], merged["lam"], seed, levels=merged["levels"], image=image
        )
        prob = inpainting_problem(inst)
        x0 = inst.y.ravel().copy()
    else:  # poisson-sr
        inst = make_poisson_sr_instance(
            merged["side"], merged["q"], merged["bbar"], merged["lam"], seed,
            psf_size=merged["psf_size"], psf_sigma=merged["psf_sigma"], peak=merged["peak"],
        )
        prob = poisson_problem(inst)
        x0 = rng.uniform(0.0, 1.0, inst.n)
    return prob, x0


def run(cfg: RunConfig) -> SolveReport:
    """Execute the configured run; stream the trace to CSV and write the
    report summary when paths are configured."""
    if cfg.algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {cfg.algo!r}; valid: {', '.join(ALGORITHMS)}")
    prob, x0 = build_problem(cfg.problem, cfg.problem_params, cfg.seed)
    L0 = cfg.l0 if cfg.l0 is not None else (prob.lipschitz_hint or 1.0)

    if cfg.algo == "free-fista":
        report = free_fista(prob, x0, cfg.solver_config(L0))
    elif cfg.algo == "fista-adabt":
        out = fista_adabt(
            prob, x0, cfg.max_iters, L0, cfg.lmin, cfg.rho, cfg.delta,
            stop_g_norm=cfg.eps if cfg.eps > 0 else None,
        )
        report = SolveReport(
            x_out=out.x_final,
            exit=EXIT_EPSILON if out.stopped_early else EXIT_BUDGET,
            restarts=0,
            total_inner_iterations=out.iters_done,
            total_backtracks=out.total_backtracks,
            trace=out.trace,
            algo="fista-adabt",
            epsilon=cfg.eps,
            elapsed_s=out.trace[-1].time_s if out.trace else 0.0,
        )
    elif cfg.algo == "fista":
        report = vanilla_fista(prob, x0, L0, cfg.max_iters, eps=cfg.eps if cfg.eps > 0 else None)
    else:  # fista-restart
        report = restart_fista_fixed_step(prob, x0, L0, cfg.solver_config(L0))

    if cfg.reference_path:
        ref = read_reference(cfg.reference_path)
        observed = min((r.F_value for r in report.trace), default=math.inf)
        check_reference_fresh(ref["F_hat"], observed)
    if cfg.trace_path:
        write_trace_csv(cfg.trace_path, report.trace)
    if cfg.report_path:
        write_report(cfg.report_path, cfg, prob, L0, report)
    return report


def write_report(path: str | Path, cfg: RunConfig, prob: CompositeProblem,
                 L0: float, report: SolveReport) -> None:
    """Structured-text run summary echoing every effective value."""
    lines = [
        f"algo = {report.algo}",
        f"problem = {prob.key}",
        f"seed = {cfg.seed}",
        f"rho = {cfg.rho:.17g}",
        f"delta = {cfg.delta:.17g}",
        f"eps = {cfg.eps:.17g}",
        f"lmin = {cfg.lmin:.17g}",
        f"l0 = {L0:.17g}",
        f"C = {cfg.C if cfg.C is not None else 6.38 / math.sqrt(cfg.rho):.17g}",
        f"max_iters = {cfg.max_iters}",
        f"exit = {report.exit}",
        f"restarts = {report.restarts}",
        f"total_inner_iterations = {report.total_inner_iterations}",
        f"total_backtracks = {report.total_backtracks}",
        f"F_final = {prob.F(report.x_out):.17g}",
        f"elapsed_s = {report.elapsed_s:.6f}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def iterations_to_eps(trace: list[TraceRecord], eps: float) -> Optional[int]:
    """First accepted step whose recorded gradient-mapping norm is <= eps."""
    for rec in trace:
        if not math.isnan(rec.g_norm) and rec.g_norm <= eps:
            return rec.global_iter
    return None


def compare(cfg: RunConfig, out_dir: str | Path) -> dict[str, SolveReport]:
    """Run all four algorithms on the same problem/start; one CSV per algo."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports: dict[str, SolveReport] = {}
    summary = []
    for algo in ALGORITHMS:
        sub = replace(cfg, algo=algo, trace_path=str(out / f"{algo}.csv"),
                      report_path=str(out / f"{algo}.report.txt"))
        rep = run(sub)
        reports[algo] = rep
        hit = iterations_to_eps(rep.trace, cfg.eps)
        summary.append(
            f"{algo}: exit={rep.exit} accepted_iters={rep.total_inner_iterations} "
            f"iters_to_eps={hit if hit is not None else 'not reached'} "
            f"backtracks={rep.total_backtracks}"
        )
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    return reports


# ---------------------------------------------------------------------------
# Reference values (long pre-runs approximating the optimal value)
# ---------------------------------------------------------------------------


def problem_hash(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()[:16]


def compute_reference(prob: CompositeProblem, x0: np.ndarray, budget: int,
                      rho: float = 0.8, delta: float = 0.95,
                      L0: Optional[float] = None) -> tuple[float, np.ndarray]:
    """Approximate the optimal value by a long budget-bound run of the
    parameter-free solver (termination test disabled)."""
    cfg = FreeFistaConfig(
        rho=rho, delta=delta, L0=L0 if L0 is not None else (prob.lipschitz_hint or 1.0),
        epsilon=0.0, max_total_iterations=budget,
    )
    report = free_fista(prob, x0, cfg)
    return prob.F(report.x_out), report.x_out


def write_reference(path: str | Path, prob: CompositeProblem, F_hat: float,
                    budget: int, seed: int, L_hat: Optional[float] = None,
                    dist0: Optional[float] = None) -> None:
    lines = [
        f"problem_hash = {problem_hash(prob.key)}",
        f"problem_key = {prob.key}",
        f"F_hat = {F_hat:.17g}",
        f"budget = {budget}",
        f"seed = {seed}",
    ]
    if L_hat is not None:
        lines.append(f"L_hat = {L_hat:.17g}")
    if dist0 is not None:
        lines.append(f"dist0 = {dist0:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_reference(path: str | Path) -> dict:
    entry: dict = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"reference file line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        entry[key.strip()] = value.strip()
    for k in ("F_hat", "L_hat", "dist0"):
        if k in entry:
            entry[k] = float(entry[k])
    for k in ("budget", "seed"):
        if k in entry:
            entry[k] = int(entry[k])
    if "F_hat" not in entry:
        raise ConfigError("reference file missing F_hat")
    return entry


def check_reference_fresh(F_hat: float, observed_min_F: float) -> None:
    """A run that beats the cached reference means the reference budget
    was too small; demand a recompute rather than plot negative gaps."""
    if observed_min_F < F_hat - 1e-12 * max(1.0, abs(F_hat)):
        raise StaleReferenceError(
            f"observed value {observed_min_F:.17g} is below the reference "
            f"{F_hat:.17g}; recompute the reference with a larger budget"
        )


# ---------------------------------------------------------------------------
# Data ingestion
# ---------------------------------------------------------------------------


def load_sparse_dataset(path: str | Path) -> tuple[sp.csr_matrix, np.ndarray]:
    """Parse the 'label idx:val idx:val ...' text format (1-based indices).

    Labels must be +1/-1; a 0 label is remapped to -1 (some corpora use
    0/1 labels).  Returns a CSR matrix and the label vector.
    """
    labels: list[float] = []
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    n_cols = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            try:
                lab = float(parts[0])
            except ValueError:
                raise DatasetFormatError(f"line {lineno}: bad label {parts[0]!r}") from None
            if lab not in (-1.0, 0.0, 1.0):
                raise DatasetFormatError(f"line {lineno}: label must be -1, 0 or +1, got {lab:g}")
            labels.append(-1.0 if lab == 0.0 else lab)
            for tok in parts[1:]:
                idx, _, val = tok.partition(":")
                try:
                    j = int(idx)
                    v = float(val)
                except ValueError:
                    raise DatasetFormatError(f"line {lineno}: bad feature token {tok!r}") from None
                if j < 1:
                    raise DatasetFormatError(f"line {lineno}: indices are 1-based, got {j}")
                rows.append(len(labels) - 1)
                cols.append(j - 1)
                vals.append(v)
                n_cols = max(n_cols, j)
    if not labels:
        raise DatasetFormatError(f"{path}: empty dataset")
    A = sp.csr_matrix((vals, (rows, cols)), shape=(len(labels), n_cols))
    return A, np.array(labels)


def load_pgm(path: str | Path) -> np.ndarray:
    """Read a binary P5 PGM with maxval 255, scaled to [0, 1]."""
    data = Path(path).read_bytes()
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            if data[pos : pos + 1].isspace():
                pos += 1
            elif data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos : pos + 1] != b"\n":
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise PgmFormatError(f"{path}: truncated header")
        return data[start:pos]

    magic = next_token()
    if magic != b"P5":
        raise PgmFormatError(f"{path}: expected binary PGM magic 'P5', got {magic!r}")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError:
        raise PgmFormatError(f"{path}: non-numeric header field") from None
    if maxval != 255:
        raise PgmFormatError(f"{path}: only maxval 255 is supported, got {maxval}")
    pos += 1  # single whitespace after maxval
    payload = data[pos : pos + width * height]
    if len(payload) != width * height:
        raise PgmFormatError(f"{path}: truncated payload ({len(payload)} of {width * height} bytes)")
    img = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return img.astype(np.float64) / 255.0


def load_config_file(path: str | Path) -> RunConfig:
    """Parse a key-value run configuration with [problem]/[solver]/[output]
    sections; missing keys fall back to defaults."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # problem parameters are case-sensitive (L vs l1)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"config file {path}: {exc}") from None
    cfg = RunConfig()
    if parser.has_section("problem"):
        sec = dict(parser.items("problem"))
        cfg.problem = sec.pop("name", cfg.problem)
        cfg.problem_params = sec
    if parser.has_section("solver"):
        sec = dict(parser.items("solver"))
        cfg.algo = sec.get("algo", cfg.algo)
        cfg.rho = float(sec.get("rho", cfg.rho))
        cfg.delta = float(sec.get("delta", cfg.delta))
        cfg.eps = float(sec.get("eps", cfg.eps))
        cfg.lmin = float(sec.get("lmin", cfg.lmin))
        if sec.get("l0", "auto") != "auto":
            cfg.l0 = float(sec["l0"])
        if sec.get("c", "auto") != "auto":
            cfg.C = float(sec["c"])
        cfg.seed = int(sec.get("seed", cfg.seed))
        cfg.max_iters = int(sec.get("max_iters", cfg.max_iters))
    if parser.has_section("output"):
        sec = dict(parser.items("output"))
        cfg.trace_path = sec.get("trace", cfg.trace_path)
        cfg.report_path = sec.get("report", cfg.report_path)
        cfg.reference_path = sec.get("reference", cfg.reference_path)
    return cfg
