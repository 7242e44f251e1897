"""Monte-Carlo experiments around the concentration of omega_gamma.

Three modes share one config and one report format:

``concentration``
    sample G ~ G(n, kappa) per replication and solve for omega_gamma;
``coupling``
    sample the coupled triple (G, G', G'') and check, per replication, the
    sure containments edges(G) <= edges(G') and, on the dense core, the
    ordering omega(G''[S]) <= omega(G[S]) <= omega(G) <= omega(G');
``core``
    sample weights only and audit the dense-core size |S_n|.

Replication ``i`` uses the seed ``derive_seed(master_seed, i)``, so results do
not depend on how many worker processes run them.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .gamma import GammaLike, as_gamma
from .kernels import Kernel, kernel_from_dict
from .sampler import (WEIGHT_KEY, core_probability, default_delta, dense_core, derive_seed,
                      sample, sample_coupled, sample_weights, stream)
from .solver import DEFAULT_BUDGET, qc_number
from .theory import TheoryEstimates, check_hypothesis, estimates, window

MODES = ("concentration", "coupling", "core")
MODE_ALIASES = {"coupling_audit": "coupling", "core_audit": "core"}
EXACT_AUDIT_MAX_N = 48
REFINED_BELOW = 3.0
REFINED_ABOVE = 2.0
CSV_HEADER = ["rep", "seed", "omega", "exact", "core_size", "p_n", "elapsed_ms"]


class CouplingViolation(AssertionError):
    """A sure consequence of the coupling failed; ``seed`` reproduces it."""

    def __init__(self, message: str, seed: int):
        super().__init__(f"{message} (replication seed {seed})")
        self.seed = seed


@dataclass(frozen=True)
class ExperimentConfig:
    kernel: Kernel
    n: int
    gamma: Fraction
    epsilon: float = 0.5
    replications: int = 10
    master_seed: int = 0
    budget: int = DEFAULT_BUDGET
    delta_override: Optional[float] = None
    mode: str = "concentration"

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_gamma(self.gamma))
        mode = MODE_ALIASES.get(self.mode, self.mode)
        object.__setattr__(self, "mode", mode)
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.delta_override is not None and not self.delta_override > 0:
            raise ValueError("delta_override must be positive")

    @property
    def delta(self) -> float:
        return self.delta_override if self.delta_override is not None else default_delta(self.n)

    @classmethod
    def from_dict(cls, cfg: dict) -> ExperimentConfig:
        cfg = dict(cfg)
        kernel = cfg.pop("kernel")
        if not isinstance(kernel, Kernel):
            kernel = kernel_from_dict(kernel)
        unknown = set(cfg) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(kernel=kernel, **cfg)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kernel"] = self.kernel.to_dict()
        d["gamma"] = str(self.gamma)
        return d

    def with_mode(self, mode: str) -> ExperimentConfig:
        return replace(self, mode=mode)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_dict(json.load(fh))


@dataclass(frozen=True)
class Row:
    rep: int
    seed: int
    omega: Optional[int]
    exact: Optional[bool]
    core_size: int
    p_n: float
    elapsed_ms: float
    # coupling mode only: omega of G', G[S_n] and G''[S_n]
    omega_upper: Optional[int] = None
    omega_core: Optional[int] = None
    omega_lower_core: Optional[int] = None


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[Row]
    theory: Optional[TheoryEstimates]
    c: float
    p_max: float
    notes: dict = field(default_factory=dict)

    def _inside(self, low: float, high: float) -> float:
        # inexact rows are censored: they never count as inside
        hits = [r for r in self.rows if r.omega is not None]
        if not hits:
            return float("nan")
        inside = sum(1 for r in hits if r.exact and low <= r.omega <= high)
        return inside / len(hits)

    def fraction_in_window(self, epsilon: float) -> float:
        lo, hi = window(self.theory.omega_tilde, epsilon)
        return self._inside(lo, hi)

    def fraction_in_refined(self, below: float = REFINED_BELOW,
                            above: float = REFINED_ABOVE) -> float:
        return self._inside(self.theory.refined - below, self.theory.refined + above)

    @property
    def censored(self) -> int:
        return sum(1 for r in self.rows if r.exact is False)

    def summary(self) -> dict:
        out: dict = {"mode": self.config.mode, "replications": len(self.rows),
                     "kernel_id": self.config.kernel.kernel_id,
                     "c": self.c, "p_max": self.p_max, "delta": self.config.delta}
        omegas = [r.omega for r in self.rows if r.omega is not None]
        if omegas:
            out.update(mean_omega=sum(omegas) / len(omegas), min_omega=min(omegas),
                       max_omega=max(omegas), censored=self.censored)
        if self.theory is not None:
            eps = self.config.epsilon
            lo, hi = self.theory.window(eps)
            out.update(kl=self.theory.kl, omega_tilde=self.theory.omega_tilde,
                       refined=self.theory.refined, epsilon=eps,
                       window_low=lo, window_high=hi)
            if omegas:
                out.update(fraction_in_window=self.fraction_in_window(eps),
                           fraction_in_refined=self.fraction_in_refined())
        sizes = [r.core_size for r in self.rows]
        out["mean_core_size"] = sum(sizes) / len(sizes)
        out.update(self.notes)
        return out


def _check_hypothesis(cfg: ExperimentConfig) -> tuple[float, float]:
    c, p_max = cfg.kernel.max_point()
    check_hypothesis(cfg.gamma, p_max)
    return c, p_max


def _concentration_rep(cfg: ExperimentConfig, rep: int) -> Row:
    t0 = time.perf_counter()
    seed = derive_seed(cfg.master_seed, rep)
    c, _ = cfg.kernel.max_point()
    s = sample(cfg.kernel, cfg.n, seed)
    res = qc_number(s.graph, cfg.gamma, budget=cfg.budget)
    res.check(s.graph, cfg.gamma)
    core = dense_core(s.weights, c, cfg.delta)
    return Row(rep, seed, res.size, res.exact, len(core), cfg.kernel.inf_on_square(c, cfg.delta),
               1000 * (time.perf_counter() - t0))


def _solve_exact(g, cfg):
    res = qc_number(g, cfg.gamma, budget=cfg.budget)
    res.check(g, cfg.gamma)
    return res


def _coupling_rep(cfg: ExperimentConfig, rep: int, exact: bool = True) -> Row:
    t0 = time.perf_counter()
    seed = derive_seed(cfg.master_seed, rep)
    t = sample_coupled(cfg.kernel, cfg.n, cfg.delta, seed)
    for i, row in enumerate(t.g.rows):
        if row & ~t.g_upper.rows[i]:
            raise CouplingViolation(f"edge of G at vertex {i} missing from G'", seed)
    core = t.core.mask
    for i in t.core:
        # every core pair has kappa >= p_n, so G'' edges inside the core lie in G
        if t.g_lower.rows[i] & core & ~t.g.rows[i]:
            raise CouplingViolation(f"edge of G'' at core vertex {i} missing from G", seed)
    if not exact:
        return Row(rep, seed, None, None, len(t.core), t.p_n, 1000 * (time.perf_counter() - t0))
    w = _solve_exact(t.g, cfg)
    w_up = _solve_exact(t.g_upper, cfg)
    w_core = _solve_exact(t.g.induced_subgraph(t.core), cfg)
    w_low = _solve_exact(t.g_lower.induced_subgraph(t.core), cfg)
    all_exact = w.exact and w_up.exact and w_core.exact and w_low.exact
    if all_exact and not (w_low.size <= w_core.size <= w.size <= w_up.size):
        raise CouplingViolation(
            f"omega ordering violated: G''[S]={w_low.size}, G[S]={w_core.size}, "
            f"G={w.size}, G'={w_up.size}", seed)
    return Row(rep, seed, w.size, all_exact, len(t.core), t.p_n,
               1000 * (time.perf_counter() - t0), w_up.size, w_core.size, w_low.size)


def _core_rep(cfg: ExperimentConfig, rep: int) -> Row:
    t0 = time.perf_counter()
    seed = derive_seed(cfg.master_seed, rep)
    c, _ = cfg.kernel.max_point()
    weights = sample_weights(cfg.n, stream(seed, WEIGHT_KEY))
    core = dense_core(weights, c, cfg.delta)
    return Row(rep, seed, None, None, len(core), cfg.kernel.inf_on_square(c, cfg.delta),
               1000 * (time.perf_counter() - t0))


def _run(fn: Callable, cfg: ExperimentConfig, jobs: int, *args) -> list[Row]:
    reps = range(cfg.replications)
    if jobs <= 1:
        return [fn(cfg, r, *args) for r in reps]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, cfg, r, *args) for r in reps]
        return [f.result() for f in futures]


def run_concentration(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    c, p_max = _check_hypothesis(cfg)
    theory = estimates(cfg.n, cfg.gamma, p_max)
    rows = _run(_concentration_rep, cfg, jobs)
    return ExperimentReport(cfg.with_mode("concentration"), rows, theory, c, p_max)


def run_coupling_audit(cfg: ExperimentConfig, jobs: int = 1, exact: bool = True) -> ExperimentReport:
    """Raises CouplingViolation on the first failed check."""
    c, p_max = _check_hypothesis(cfg)
    if exact and cfg.n > EXACT_AUDIT_MAX_N:
        raise ValueError(f"exact coupling audits are limited to n <= {EXACT_AUDIT_MAX_N}")
    theory = estimates(cfg.n, cfg.gamma, p_max)
    rows = _run(_coupling_rep, cfg, jobs, exact)
    notes = {"violations": 0, "exact_comparisons": sum(1 for r in rows if r.exact)}
    return ExperimentReport(cfg.with_mode("coupling"), rows, theory, c, p_max, notes)


def run_core_audit(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    c, p_max = cfg.kernel.max_point()
    delta = cfg.delta
    rows = _run(_core_rep, cfg, jobs)
    q = core_probability(c, delta)
    expected = cfg.n * q
    sd = math.sqrt(cfg.n * q * (1 - q))
    mean = sum(r.core_size for r in rows) / len(rows)
    p_n = cfg.kernel.inf_on_square(c, delta)
    notes = {"core_prob": q, "expected_core_size": expected, "core_sd": sd,
             "core_within_4sd": abs(mean - expected) <= 4 * sd,
             "p_n": p_n, "p_gap": p_max - p_n}
    return ExperimentReport(cfg.with_mode("core"), rows, None, c, p_max, notes)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    if cfg.mode == "concentration":
        return run_concentration(cfg, jobs)
    if cfg.mode == "coupling":
        return run_coupling_audit(cfg, jobs, exact=cfg.n <= EXACT_AUDIT_MAX_N)
    return run_core_audit(cfg, jobs)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report_csv(report: ExperimentReport, timing: bool = False) -> str:
    """Rows as CSV followed by ``# summary:`` comment lines.

    Wall-clock times are left blank unless ``timing`` is set, so the default
    output is byte-identical across runs.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    for r in sorted(report.rows, key=lambda r: r.rep):
        w.writerow([r.rep, r.seed, _fmt(r.omega), _fmt(r.exact), r.core_size, _fmt(r.p_n),
                    f"{r.elapsed_ms:.3f}" if timing else ""])
    for key, value in report.summary().items():
        buf.write(f"# summary: {key}={_fmt(value)}\r\n")
    return buf.getvalue()


def read_report_csv(text: str) -> list[dict]:
    """Parse the rows written by :func:`write_report_csv` (comment lines skipped)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))
