"""Instance generation and the comparison harness.

Each cell of a suite is one (instance, method) pair and produces an
:class:`InverseReport` with the sparsity metrics, norms, Penrose residuals
and timing of the computed ``H``.
"""
from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import solvers
from .errors import BoundViolation, ConfigError, GinvError, RankError
from .formulations import ProblemKind, Status, build
from .localsearch import LsConfig, build_ah_symmetric, local_search
from .matcore import (
    ToleranceConfig,
    mp_pseudoinverse,
    nonzero_rows,
    norm_0,
    norm_1,
    norm_21,
    property_residuals,
    svd,
)

__all__ = [
    "InstanceSpec",
    "InverseReport",
    "MethodOutput",
    "SuiteConfig",
    "compute",
    "make_report",
    "METHODS",
    "generate",
    "run_method",
    "run_suite",
    "ratio_study",
    "RatioResult",
    "reports_to_jsonl",
    "reports_from_jsonl",
    "render_table",
    "TYPICAL_RATIO",
]

log = logging.getLogger(__name__)

METHODS = ("P21", "P21_L1", "P123", "P123_FULL", "LS", "MP")
# LS / P123 1-norm ratios on random instances usually stay below this
TYPICAL_RATIO = 1.6
MAX_ATTEMPTS = 10


@dataclass(frozen=True)
class InstanceSpec:
    m: int
    n: int
    r: int
    density: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if min(self.m, self.n, self.r) < 1 or self.r > min(self.m, self.n):
            raise ConfigError(f"need 1 <= r <= min(m, n), got {self}")
        if not 0 < self.density <= 1:
            raise ConfigError(f"density must lie in (0, 1], got {self.density}")

    @property
    def label(self) -> str:
        return f"{self.m},{self.n},{self.r}"

    @classmethod
    def parse(cls, text: str, density: float = 0.5, seed: int = 0) -> "InstanceSpec":
        """Parse ``"40x20x10"`` (or ``"40,20,10"``)."""
        parts = text.replace(",", "x").split("x")
        if len(parts) != 3:
            raise ConfigError(f"instance size must look like MxNxR, got {text!r}")
        try:
            m, n, r = (int(p) for p in parts)
        except ValueError:
            raise ConfigError(f"instance size must look like MxNxR, got {text!r}") from None
        return cls(m, n, r, density, seed)


def _sprand(rng: np.random.Generator, rows: int, cols: int, density: float) -> np.ndarray:
    # uniform(0, 1) values on a uniformly random pattern of the given density
    mask = rng.random((rows, cols)) < density
    return np.where(mask, rng.random((rows, cols)), 0.0)


def generate(spec: InstanceSpec) -> np.ndarray:
    """Random ``m x n`` matrix of rank exactly ``r``: ``A = B @ C``.

    ``B`` (m x r) and ``C`` (r x n) are sparse uniform factors. The rank is
    checked by SVD; on failure the draw is repeated with seed + 1, up to 10
    attempts.

    Raises
    ------
    RankError
        If no attempt yields rank ``r``.
    """
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(spec.seed + attempt)
        B = _sprand(rng, spec.m, spec.r, spec.density)
        C = _sprand(rng, spec.r, spec.n, spec.density)
        A = B @ C
        if np.any(A) and svd(A).r == spec.r:
            return A
    raise RankError(f"could not generate a rank-{spec.r} instance for {spec}")


@dataclass
class InverseReport:
    instance: str
    m: int
    n: int
    r: int
    seed: int
    method: str
    status: str
    nzr: int | None = None
    norm0: int | None = None
    norm1: float | None = None
    norm21: float | None = None
    residuals: tuple[float, float, float, float] | None = None
    time_s: float | None = None
    total_s: float | None = None
    H: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def solved(self) -> bool:
        return self.status == Status.OPTIMAL.value and self.H is not None

    def to_json(self, timing: bool = True) -> str:
        d = asdict(self)
        d.pop("H")
        if d["residuals"] is not None:
            d["residuals"] = list(d["residuals"])
        if not timing:
            d.pop("time_s")
            d.pop("total_s")
        return json.dumps(d)

    @classmethod
    def from_json(cls, line: str) -> "InverseReport":
        d = json.loads(line)
        if d.get("residuals") is not None:
            d["residuals"] = tuple(d["residuals"])
        return cls(**d)


def make_report(A, H, method: str, status, time_s: float, total_s: float,
                spec: InstanceSpec | None = None, zero_tol: float = 1e-5,
                r: int | None = None) -> InverseReport:
    """Compute the metrics of ``H`` as an inverse of ``A``."""
    m, n = A.shape
    status = Status(status).value
    return InverseReport(
        instance=spec.label if spec else f"{m},{n},{r}",
        m=m,
        n=n,
        r=spec.r if spec else int(r if r is not None else svd(A).r),
        seed=spec.seed if spec else 0,
        method=method,
        status=status,
        nzr=nonzero_rows(H, zero_tol),
        norm0=norm_0(H, zero_tol),
        norm1=norm_1(H),
        norm21=norm_21(H),
        residuals=tuple(property_residuals(A, H)),
        time_s=time_s,
        total_s=total_s,
        H=H,
    )


@dataclass(frozen=True)
class SuiteConfig:
    tol: ToleranceConfig = ToleranceConfig()
    solver: solvers.SolverConfig = solvers.SolverConfig()
    ls: LsConfig = LsConfig()
    use_known_rank: bool = True


@dataclass
class MethodOutput:
    """Raw result of one method: ``H``, its status, solve time and trace rows."""

    H: np.ndarray
    status: Status
    time_s: float
    r: int
    trace_header: tuple[str, ...] = ()
    trace: list = field(default_factory=list)


SOLVER_TRACE = ("iteration", "objective", "residual")
SWAP_TRACE = ("iteration", "j", "k", "ratio", "log_absdet")


def compute(A, method: str, cfg: SuiteConfig | None = None, rank: int | None = None) -> MethodOutput:
    """Run one method on ``A`` and return the inverse it produces.

    Solver exceptions propagate; :func:`run_method` turns them into statuses.
    """
    cfg = cfg or SuiteConfig()
    method = method.upper()
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "P123_FULL":
        sol = solvers.solve_p123_full(A, cfg.solver, cfg.tol, rank=rank)
        r = rank if rank is not None else svd(A, cfg.tol).r
        return MethodOutput(sol.H, sol.status, sol.solve_time, r)
    if method == "LS":
        t0 = time.perf_counter()
        state = local_search(A, cfg.ls, cfg.tol, rank=rank)
        H = build_ah_symmetric(A, state.T)
        elapsed = time.perf_counter() - t0
        status = Status.OPTIMAL if state.locally_optimal else Status.ITER_LIMIT
        return MethodOutput(H, status, elapsed, len(state.S), SWAP_TRACE, list(state.history))
    F = svd(A, cfg.tol, rank=rank)
    if method == "MP":
        t0 = time.perf_counter()
        H = mp_pseudoinverse(F)
        return MethodOutput(H, Status.OPTIMAL, time.perf_counter() - t0, F.r)
    if method == "P21":
        sol = solvers.solve_p21(build(ProblemKind.P21, F), cfg.solver)
    elif method == "P123":
        sol = solvers.solve_p123(build(ProblemKind.P123, F), cfg.solver)
    else:
        anchor = solvers.solve_p21(build(ProblemKind.P21, F), cfg.solver)
        problem = build(ProblemKind.P21_L1, F, anchor.objective)
        sol = solvers.solve_p21_l1(problem, cfg.solver, anchor=anchor)
        # the anchor solve is part of the method's cost
        sol.solve_time += anchor.solve_time
    return MethodOutput(sol.H, sol.status, sol.solve_time, F.r, SOLVER_TRACE, list(sol.trace))


def run_method(A, method: str, cfg: SuiteConfig | None = None, spec: InstanceSpec | None = None,
               rank: int | None = None) -> InverseReport:
    """Run one method on ``A``; solver failures become report statuses."""
    cfg = cfg or SuiteConfig()
    method = method.upper()
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    if rank is None and spec is not None and cfg.use_known_rank:
        rank = spec.r
    started = time.perf_counter()
    try:
        out = compute(A, method, cfg, rank)
    except GinvError as exc:
        log.warning("%s on %s failed: %s", method, spec.label if spec else A.shape, exc)
        m, n = A.shape
        elapsed = time.perf_counter() - started
        return InverseReport(
            instance=spec.label if spec else f"{m},{n},{rank}",
            m=m, n=n, r=spec.r if spec else (rank or 0), seed=spec.seed if spec else 0,
            method=method, status="Error", time_s=elapsed, total_s=elapsed,
        )
    return make_report(A, out.H, method, out.status, out.time_s, time.perf_counter() - started,
                       spec, cfg.tol.zero_tol, out.r)


def _run_cell(args):
    spec, method, cfg = args
    return run_method(generate(spec), method, cfg, spec)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GINV_THREADS", "1")))
    except ValueError:
        raise ConfigError("GINV_THREADS must be an integer") from None


def run_suite(specs, methods, cfg: SuiteConfig | None = None, workers: int | None = None
              ) -> list[InverseReport]:
    """One report per (instance, method), in instance order then method order.

    Cells run in a process pool of ``workers`` (default: ``GINV_THREADS`` or
    1); the returned order does not depend on completion order.
    """
    cfg = cfg or SuiteConfig()
    methods = [m.upper() for m in methods]
    cells = [(spec, method, cfg) for spec in specs for method in methods]
    workers = workers or _threads()
    if workers <= 1 or len(cells) <= 1:
        return [_run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell, cells))


@dataclass(frozen=True)
class RatioResult:
    instance: str
    seed: int
    r: int
    ratio: float

    @property
    def below_typical_ratio(self) -> bool:
        return self.ratio < TYPICAL_RATIO


def ratio_study(reports) -> list[RatioResult]:
    """``norm1(LS) / norm1(P123)`` for every instance that has both reports.

    Raises
    ------
    BoundViolation
        If a ratio exceeds the rank ``r`` (the proven worst case).
    ConfigError
        If no instance has both an LS and a P123 report.
    """
    by_key: dict[tuple[str, int], dict[str, InverseReport]] = {}
    for rep in reports:
        by_key.setdefault((rep.instance, rep.seed), {})[rep.method] = rep
    results = []
    for (instance, seed), reps in by_key.items():
        ls, lp = reps.get("LS"), reps.get("P123")
        if ls is None or lp is None or ls.norm1 is None or lp.norm1 is None:
            continue
        ratio = ls.norm1 / lp.norm1
        if ratio > ls.r * (1 + 1e-9):
            raise BoundViolation(f"{instance}: LS/P123 1-norm ratio {ratio:.6g} exceeds r = {ls.r}")
        log.info("%s seed %d: LS/P123 ratio %.4f (%s %.1f)", instance, seed, ratio,
                 "<" if ratio < TYPICAL_RATIO else ">=", TYPICAL_RATIO)
        results.append(RatioResult(instance, seed, ls.r, ratio))
    if not results:
        raise ConfigError("no instance has both LS and P123 reports")
    return results


def reports_to_jsonl(reports, timing: bool = True) -> str:
    return "".join(rep.to_json(timing) + "\n" for rep in reports)


def reports_from_jsonl(text: str) -> list[InverseReport]:
    return [InverseReport.from_json(line) for line in text.splitlines() if line.strip()]


def render_table(reports) -> str:
    """Plain-text table with columns m,n,r | method | NZR | ||H||_0 | ||H||_1 | ||H||_2,1 | time."""
    header = f"{'m,n,r':<14}{'method':<11}{'NZR':>6}{'||H||_0':>10}{'||H||_1':>13}{'||H||_2,1':>13}{'time (s)':>11}"
    lines = [header, "-" * len(header)]
    last = None
    for rep in reports:
        key = (rep.instance, rep.seed)
        label = rep.instance if key != last else ""
        last = key
        if rep.norm1 is not None:
            # '*' marks a point returned without reaching the optimality test
            mark = "" if rep.status == Status.OPTIMAL.value else "*"
            lines.append(
                f"{label:<14}{rep.method:<11}{rep.nzr:>6}{rep.norm0:>10}{rep.norm1:>13.3f}"
                f"{rep.norm21:>13.3f}{rep.time_s:>10.2f}{mark or ' '}"
            )
        else:
            lines.append(f"{label:<14}{rep.method:<11}{'-':>6}{'-':>10}{'-':>13}{'-':>13}{'*':>11}")
    return "\n".join(lines)
