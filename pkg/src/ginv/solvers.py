"""Solvers for the reduced problems, the unreduced LP, and a brute-force oracle.

``solve_p21``
    Douglas-Rachford splitting on ``M = V [inv(D); Z]`` (n x r): the 2,1-norm
    has a closed-form prox (row shrinkage) and the constraint
    ``V1^T M = inv(D)`` a closed-form projection. Stopping is certified by a
    duality gap.
``solve_p123``
    The sparse LP of :func:`ginv.formulations.factored_lp` solved by HiGHS, or
    Douglas-Rachford on ``H`` for instances past the LP size cap.
``solve_p21_l1``
    ADMM with a soft-threshold step for the 1-norm and a projection onto the
    2,1-norm ball, followed by a feasibility-restoring blend toward the P21
    solution.
``solve_p123_full``
    LP over all of ``H`` with the Penrose constraints imposed directly.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import ConfigError, ConvergenceError, DimensionError, SizeCapError
from .formulations import (
    ProblemKind,
    ReducedProblem,
    Solution,
    Status,
    build,
    factored_lp,
    objective_p1,
    objective_p21,
    row_factor,
)
from .matcore import ToleranceConfig, as_matrix, norm_1, norm_21, property_residuals, svd
from .structure import h_from_z

__all__ = [
    "SolverConfig",
    "solve",
    "solve_p21",
    "solve_p123",
    "solve_p21_l1",
    "solve_p123_full",
    "column_variant",
    "oracle_small",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Options shared by all solvers.

    ``step`` is the Douglas-Rachford prox parameter (``None`` picks one from
    the data scale); ``rho`` and ``ball_weight`` scale the ADMM penalties for
    P21_L1. ``p123_method`` is ``"auto"``, ``"lp"`` or ``"splitting"``; auto
    uses the LP while ``n * m <= lp_size_cap``.
    """

    max_iters: int = 100_000
    solver_tol: float = 1e-8
    step: float | None = None
    relaxation: float = 1.0
    rho: float = 100.0
    ball_weight: float = 10.0
    admm_tol: float = 1e-6
    admm_max_iters: int = 50_000
    p123_method: str = "auto"
    lp_size_cap: int = 20_000
    full_size_cap: int = 2_500
    time_limit: float = 300.0
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1 or self.admm_max_iters < 1:
            raise ConfigError("iteration limits must be positive")
        for name in ("solver_tol", "rho", "ball_weight", "admm_tol", "time_limit"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.step is not None and not self.step > 0:
            raise ConfigError("step must be positive")
        if not 0 < self.relaxation < 2:
            raise ConfigError("relaxation must lie in (0, 2)")
        if self.p123_method not in ("auto", "lp", "splitting"):
            raise ConfigError(f"unknown p123_method {self.p123_method!r}")


def _check_kind(problem: ReducedProblem, kind: ProblemKind) -> None:
    if problem.kind is not kind:
        raise ConfigError(f"expected a {kind.value} problem, got {problem.kind.value}")


def _unique_point(problem: ReducedProblem, method: str) -> Solution:
    # n == r: Z is empty and H = G is the only candidate
    F = problem.factors
    Z = np.zeros(problem.dims)
    status = Status.OPTIMAL if problem.is_feasible(Z) else Status.INFEASIBLE
    return Solution(Z, problem.objective(Z), F.G.copy(), status, 0, 0.0, method)


# -- Douglas-Rachford ---------------------------------------------------------


def _row_shrink(X: np.ndarray, t: float) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > t, 1.0 - t / norms, 0.0)
    return X * scale


def _soft(X: np.ndarray, t: float) -> np.ndarray:
    return np.sign(X) * np.maximum(np.abs(X) - t, 0.0)


def _douglas_rachford(
    f, prox_f, project, dual_bound, z0, t, cfg: SolverConfig, check_every: int = 10
):
    """Minimize ``f`` over an affine set by Douglas-Rachford splitting.

    Iterates ``x = project(z)``, ``y = prox_f(2x - z, t)``,
    ``z += relaxation * (y - x)``. The fixed-point residual ``||y - x||`` is
    nonincreasing for any fixed ``t``. ``dual_bound(x, z, t)`` must return a
    valid lower bound on the optimum; the run stops once
    ``f(x) - bound <= solver_tol * (1 + |f(x)|)``.

    Returns ``(x, objective, lower_bound, iterations, status, trace, merit)``.
    """
    z = z0.copy()
    lam = cfg.relaxation
    trace = []
    merit = []
    best_bound = -np.inf
    status = Status.ITER_LIMIT
    start = time.perf_counter()
    x = project(z)
    it = 0
    for it in range(1, cfg.max_iters + 1):
        y = prox_f(2.0 * x - z, t)
        d = y - x
        merit.append(float(np.linalg.norm(d)))
        z = z + lam * d
        x = project(z)
        if it % check_every == 0 or it == cfg.max_iters:
            obj = f(x)
            best_bound = max(best_bound, dual_bound(x, z, t))
            trace.append((it, obj, merit[-1]))
            if obj - best_bound <= cfg.solver_tol * (1.0 + abs(obj)):
                status = Status.OPTIMAL
                break
            if time.perf_counter() - start > cfg.time_limit:
                status = Status.TIME_LIMIT
                break
    return x, f(x), best_bound, it, status, trace, merit


def solve_p21(problem: ReducedProblem, cfg: SolverConfig | None = None) -> Solution:
    """Minimize ``||G + V2 Z U1^T||_{2,1}`` over ``Z``.

    Works on ``M = V [inv(D); Z]``, whose rows have the same norms as the rows
    of ``H``. The feasible set is ``{M : V1^T M = inv(D)}``. The dual bound
    uses ``Lam`` in the range of ``V1`` with every row norm at most 1:
    ``||M||_{2,1} >= <Lam, M> = <Lam, V1 inv(D)>`` on the feasible set.
    """
    cfg = cfg or SolverConfig()
    _check_kind(problem, ProblemKind.P21)
    F = problem.factors
    if F.n == F.r:
        return _unique_point(problem, "p21-dr")
    started = time.perf_counter()
    V1 = F.V1
    B = V1 / F.sigma[: F.r]
    Dinv = F.Dinv

    def project(M):
        return M - V1 @ (V1.T @ M - Dinv)

    def dual_bound(x, z, t):
        lam = V1 @ (V1.T @ (x - z)) / t
        worst = np.linalg.norm(lam, axis=1).max()
        if worst > 1.0:
            lam = lam / worst
        return float(np.sum(lam * B))

    t = cfg.step if cfg.step is not None else float(np.linalg.norm(B, axis=1).mean())
    x, obj, bound, iters, status, trace, merit = _douglas_rachford(
        norm_21, _row_shrink, project, dual_bound, B, t, cfg
    )
    Z = F.V2.T @ x
    H = h_from_z(F, Z)
    elapsed = time.perf_counter() - started
    return Solution(
        Z,
        objective_p21(F, Z),
        H,
        status,
        iters,
        elapsed,
        "p21-dr",
        trace,
        {"lower_bound": bound, "merit": merit, "step": t},
    )


# -- P123 ---------------------------------------------------------------------


def _highs_status(res) -> Status:
    if res.status == 0:
        return Status.OPTIMAL
    if res.status == 2:
        return Status.INFEASIBLE
    if "time limit" in (res.message or "").lower():
        return Status.TIME_LIMIT
    return Status.ITER_LIMIT


def _linprog(c, cfg: SolverConfig, **kwargs):
    return linprog(
        c,
        method="highs-ipm",
        options={"time_limit": cfg.time_limit, "presolve": True},
        **kwargs,
    )


def solve_p123(problem: ReducedProblem, cfg: SolverConfig | None = None) -> Solution:
    """Minimize ``||G + V2 Z U1^T||_1`` over ``Z``."""
    cfg = cfg or SolverConfig()
    _check_kind(problem, ProblemKind.P123)
    F = problem.factors
    if F.n == F.r:
        return _unique_point(problem, "p123-lp")
    method = cfg.p123_method
    if method == "auto":
        method = "lp" if F.n * F.m <= cfg.lp_size_cap else "splitting"
    if method == "lp":
        return _solve_p123_lp(problem, cfg)
    return _solve_p123_splitting(problem, cfg)


def _solve_p123_lp(problem: ReducedProblem, cfg: SolverConfig) -> Solution:
    F = problem.factors
    started = time.perf_counter()
    c, A_eq, b_eq, bounds, slices = factored_lp(F)
    res = _linprog(c, cfg, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
    elapsed = time.perf_counter() - started
    status = _highs_status(res)
    if res.x is None:
        Z = np.zeros(problem.dims)
    else:
        Z = res.x[slices["Z"]].reshape(problem.dims, order="F")
    H = h_from_z(F, Z)
    return Solution(
        Z,
        norm_1(H),
        H,
        status,
        int(getattr(res, "nit", 0) or 0),
        elapsed,
        "p123-lp",
        info={"lp_objective": None if res.fun is None else float(res.fun), "message": res.message},
    )


def _solve_p123_splitting(problem: ReducedProblem, cfg: SolverConfig) -> Solution:
    # Douglas-Rachford on H over the affine set {G + V2 Z U1^T}
    F = problem.factors
    started = time.perf_counter()
    G, V2, U1 = F.G, F.V2, F.U1

    def project(H):
        return G + V2 @ (V2.T @ H @ U1) @ U1.T

    def dual_bound(x, z, t):
        lam = (x - z) / t
        lam = lam - V2 @ (V2.T @ lam @ U1) @ U1.T
        worst = np.abs(lam).max()
        if worst > 1.0:
            lam = lam / worst
        return float(np.sum(lam * G))

    t = cfg.step if cfg.step is not None else float(np.abs(G).mean())
    x, obj, bound, iters, status, trace, merit = _douglas_rachford(
        norm_1, _soft, project, dual_bound, G, t, cfg
    )
    Z = V2.T @ x @ U1
    H = h_from_z(F, Z)
    return Solution(
        Z,
        norm_1(H),
        H,
        status,
        iters,
        time.perf_counter() - started,
        "p123-dr",
        trace,
        {"lower_bound": bound, "merit": merit, "step": t},
    )


# -- P21_L1 -------------------------------------------------------------------


def _project_l1_ball(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of a nonnegative vector onto ``{w >= 0, sum(w) <= radius}``."""
    if v.sum() <= radius:
        return v
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - radius
    idx = np.arange(1, len(u) + 1)
    k = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[k] / (k + 1)
    return np.maximum(v - theta, 0.0)


def _project_21_ball(X: np.ndarray, radius: float) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1)
    target = _project_l1_ball(norms, radius)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > 0, target / norms, 0.0)
    return X * scale[:, None]


def _blend_into_ball(M: np.ndarray, anchor: np.ndarray, radius: float) -> np.ndarray:
    """Closest point to ``M`` on the segment ``[M, anchor]`` inside the 2,1-ball.

    ``anchor`` must lie inside the ball; convexity makes the feasible part of
    the segment an interval containing ``anchor``.
    """
    if norm_21(M) <= radius:
        return M
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if norm_21((1 - mid) * M + mid * anchor) <= radius:
            hi = mid
        else:
            lo = mid
    return (1 - hi) * M + hi * anchor


def solve_p21_l1(
    problem: ReducedProblem,
    cfg: SolverConfig | None = None,
    anchor: Solution | None = None,
) -> Solution:
    """Minimize ``||H||_1`` subject to ``||H||_{2,1} <= z_budget * (1 + 1e-8)``.

    Parameters
    ----------
    anchor : Solution, optional
        A P21 solution for the same factors. Solved here when omitted. It is a
        feasible point whenever the budget is at least its objective, and the
        returned point is never worse than it.

    Notes
    -----
    ADMM splits ``H = M U1^T`` (1-norm, soft threshold) and ``N = M``
    (2,1-ball projection) with ``M`` restricted to ``V1^T M = inv(D)``. Every
    500th iterate is pulled back into the ball along the segment to the
    anchor, and the best such point is returned.

    The budget constraint is active and the problem is badly conditioned
    there: the 1-norm falls by roughly ``1e4`` times any increase of the
    budget. Reaching the relaxed optimum to ``solver_tol`` is out of reach for
    a first-order method, so ``status`` reports the ADMM residual test
    (``admm_tol``) only.
    """
    cfg = cfg or SolverConfig()
    _check_kind(problem, ProblemKind.P21_L1)
    F = problem.factors
    radius = problem.budget
    if F.n == F.r:
        return _unique_point(problem, "p21l1-admm")
    started = time.perf_counter()
    if anchor is None:
        anchor = solve_p21(build(ProblemKind.P21, F), cfg)
    anchor_M = row_factor(F, anchor.Z)
    if norm_21(anchor_M) > radius:
        lower = anchor.info.get("lower_bound", -np.inf)
        if radius < lower:
            Z = anchor.Z
            return Solution(
                Z, objective_p1(F, Z), h_from_z(F, Z), Status.INFEASIBLE, 0,
                time.perf_counter() - started, "p21l1-admm",
                info={"lower_bound": lower, "budget": radius},
            )
        # budget within the P21 duality gap: tighten the anchor
        anchor = solve_p21(build(ProblemKind.P21, F), replace(cfg, solver_tol=1e-14))
        anchor_M = row_factor(F, anchor.Z)
        if norm_21(anchor_M) > radius:
            Z = anchor.Z
            return Solution(
                Z, objective_p1(F, Z), h_from_z(F, Z), Status.INFEASIBLE, 0,
                time.perf_counter() - started, "p21l1-admm",
                info={"lower_bound": anchor.info.get("lower_bound"), "budget": radius},
            )

    V1, U1, Dinv = F.V1, F.U1, F.Dinv
    G = F.G

    def project(M):
        return M - V1 @ (V1.T @ M - Dinv)

    rho = cfg.rho / max(np.abs(G).mean(), np.finfo(float).tiny)
    sig = cfg.ball_weight * rho
    M = anchor_M.copy()
    H = M @ U1.T
    N = M.copy()
    uh = np.zeros_like(H)
    un = np.zeros_like(M)
    status = Status.ITER_LIMIT
    trace = []
    best_M = anchor_M
    best_obj = norm_1(anchor_M @ U1.T)
    it = 0
    for it in range(1, cfg.admm_max_iters + 1):
        M = project((rho * (H - uh) @ U1 + sig * (N - un)) / (rho + sig))
        MU = M @ U1.T
        H_old, N_old = H, N
        H = _soft(MU + uh, 1.0 / rho)
        N = _project_21_ball(M + un, radius)
        uh += MU - H
        un += M - N
        if it % 50 == 0:
            r_pri = np.sqrt(np.linalg.norm(MU - H) ** 2 + np.linalg.norm(M - N) ** 2)
            r_dual = np.linalg.norm(rho * (H - H_old) @ U1 + sig * (N - N_old))
            scale_pri = max(np.linalg.norm(MU) + np.linalg.norm(M), np.linalg.norm(H) + np.linalg.norm(N))
            scale_dual = np.linalg.norm(rho * uh @ U1 + sig * un)
            trace.append((it, norm_1(MU), float(r_pri)))
            if it % 500 == 0:
                candidate = _blend_into_ball(M, anchor_M, radius)
                cand_obj = norm_1(candidate @ U1.T)
                if cand_obj < best_obj:
                    best_M, best_obj = candidate, cand_obj
            if r_pri <= cfg.admm_tol * scale_pri and r_dual <= cfg.admm_tol * max(scale_dual, 1e-300):
                status = Status.OPTIMAL
                break
            if time.perf_counter() - started > cfg.time_limit:
                status = Status.TIME_LIMIT
                break

    candidate = _blend_into_ball(M, anchor_M, radius)
    if norm_1(candidate @ U1.T) < best_obj:
        best_M = candidate
    Z = F.V2.T @ best_M
    obj = objective_p1(F, Z)
    anchor_obj = objective_p1(F, anchor.Z)
    used_anchor = anchor_obj <= obj or objective_p21(F, Z) > radius
    if used_anchor:
        Z, obj = anchor.Z.copy(), anchor_obj
    H = h_from_z(F, Z)
    return Solution(
        Z, obj, H, status, it, time.perf_counter() - started, "p21l1-admm", trace,
        {"budget": radius, "used_anchor": bool(used_anchor), "anchor_objective": anchor_obj},
    )


# -- Unreduced LP -------------------------------------------------------------


def _independent_rows(K: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Indices of a maximal set of linearly independent rows of ``K``."""
    _, R, piv = scipy.linalg.qr(K.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        return np.array([], dtype=int)
    rank = int(np.count_nonzero(diag > rtol * diag[0]))
    return np.sort(piv[:rank])


def full_constraints(A: np.ndarray, null_basis: np.ndarray):
    """Linear constraints on ``vec(H)`` (column-major) for P1, P3 and P2.

    * ``AHA = A``: ``kron(A^T, A) vec(H) = vec(A)``
    * ``AH`` symmetric: ``(AH)_ij - (AH)_ji = 0`` for ``i < j``
    * ``H N = 0`` with ``N`` spanning the null space of ``A^T``. Given P1 and
      P3, ``AH`` is the orthogonal projector onto ``range(A)``, so ``HAH = H``
      holds exactly when ``H`` annihilates ``range(A)``'s complement.
    """
    m, n = A.shape
    K1 = np.kron(A.T, A)
    b1 = A.ravel(order="F")
    AH_op = np.kron(np.eye(m), A)  # vec(AH) = kron(I, A) vec(H)
    iu, ju = np.triu_indices(m, k=1)
    K2 = AH_op[iu + ju * m] - AH_op[ju + iu * m]
    K3 = np.kron(null_basis.T, np.eye(n))
    K = np.vstack([K1, K2, K3])
    b = np.concatenate([b1, np.zeros(K2.shape[0] + K3.shape[0])])
    return K, b


def solve_p123_full(
    A, cfg: SolverConfig | None = None, tol: ToleranceConfig | None = None, rank: int | None = None
) -> Solution:
    """Minimize ``||H||_1`` over all ``H`` satisfying P1, P2 and P3.

    Intended as a cross-check of the reduced LP on small instances.

    Raises
    ------
    SizeCapError
        If ``n * m`` exceeds ``cfg.full_size_cap``.
    ConvergenceError
        If the optimal ``H`` fails the Penrose checks (P1, P2, P3).
    """
    cfg = cfg or SolverConfig()
    tol = tol or ToleranceConfig()
    A = as_matrix(A, "A")
    m, n = A.shape
    if n * m > cfg.full_size_cap:
        raise SizeCapError(f"n*m = {n * m} exceeds full LP cap {cfg.full_size_cap}")
    started = time.perf_counter()
    F = svd(A, tol, rank=rank)
    K, b = full_constraints(A, F.U2)
    rows = _independent_rows(K)
    K, b = K[rows], b[rows]
    N = n * m
    A_eq = sp.hstack([sp.csr_matrix(K), -sp.csr_matrix(K)]).tocsc()
    c = np.ones(2 * N)
    res = _linprog(c, cfg, A_eq=A_eq, b_eq=b, bounds=[(0, None)] * (2 * N))
    elapsed = time.perf_counter() - started
    status = _highs_status(res)
    if res.x is None:
        H = np.zeros((n, m))
    else:
        H = (res.x[:N] - res.x[N:]).reshape((n, m), order="F")
    # keep only the free block so Solution.Z has its usual meaning
    Z = F.V2.T @ H @ F.U1
    if status is Status.OPTIMAL:
        r = property_residuals(A, H)
        limit = 1e-6 * np.linalg.norm(A)
        if max(r.p1, r.p2, r.p3) > limit:
            raise ConvergenceError(
                f"full LP solution violates Penrose properties: P1={r.p1:.3g} P2={r.p2:.3g} P3={r.p3:.3g}"
            )
    return Solution(
        Z, norm_1(H), H, status, int(getattr(res, "nit", 0) or 0), elapsed, "p123-full-lp",
        info={"constraint_rows": int(K.shape[0]), "message": res.message},
    )


# -- Column variant -----------------------------------------------------------


def column_variant(A, cfg: SolverConfig | None = None, tol: ToleranceConfig | None = None,
                   rank: int | None = None) -> Solution:
    """Minimize the sum of column 2-norms of a generalized inverse of ``A``.

    Solved as the row problem for ``A.T`` and transposed back. ``Z`` is the
    free block of the transposed problem.
    """
    A = as_matrix(A, "A")
    Ft = svd(A.T, tol, rank=rank)
    sol = solve_p21(build(ProblemKind.P21, Ft), cfg)
    return replace(sol, H=sol.H.T.copy(), method="p21-col-dr")


# -- Dispatcher -----------------------------------------------------------------


def solve(problem: ReducedProblem, cfg: SolverConfig | None = None, **kwargs) -> Solution:
    if problem.kind is ProblemKind.P21:
        return solve_p21(problem, cfg)
    if problem.kind is ProblemKind.P123:
        return solve_p123(problem, cfg)
    return solve_p21_l1(problem, cfg, **kwargs)


# -- Oracle ---------------------------------------------------------------------


_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden(fun, lo: float, hi: float, iters: int = 100) -> tuple[float, float]:
    """``(argmin, min)`` of a convex function of one variable on ``[lo, hi]``.

    Convex functions are unimodal, so golden-section search is exact up to
    the final bracket width even at kinks and on plateaus.
    """
    a, b = hi - _PHI * (hi - lo), lo + _PHI * (hi - lo)
    fa, fb = fun(a), fun(b)
    for _ in range(iters):
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = hi - _PHI * (hi - lo)
            fa = fun(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + _PHI * (hi - lo)
            fb = fun(b)
    candidates = [(fa, a), (fb, b), (fun(lo), lo), (fun(hi), hi)]
    f, x = min(candidates)
    return x, f


def _sublevel(fun, lo: float, hi: float, level: float, iters: int = 100):
    """Interval ``{x in [lo, hi] : fun(x) <= level}`` of a convex ``fun``, or ``None``.

    Endpoints are returned on the feasible side of the bisection bracket.
    """
    x0, f0 = _golden(fun, lo, hi, iters)
    if f0 > level:
        return None

    def edge(inside: float, outside: float) -> float:
        if fun(outside) <= level:
            return outside
        for _ in range(iters):
            mid = 0.5 * (inside + outside)
            if fun(mid) <= level:
                inside = mid
            else:
                outside = mid
        return inside

    return edge(x0, lo), edge(x0, hi)


def oracle_small(problem: ReducedProblem, radius: float | None = None, iters: int = 100) -> float:
    """Brute-force optimal value for problems whose ``Z`` has at most 2 entries.

    Every objective is convex in ``Z``, and so is its partial minimum over one
    coordinate, which makes nested golden-section searches over
    ``[-radius, radius]^k`` exact to bracket precision. For P21_L1 the
    feasible ``z2``-interval at each ``z1`` and the feasible ``z1``-range are
    found by bisection on convex sublevel sets, and only budget-feasible
    points are ever scored.

    ``radius`` defaults to ``10 * (1 + max(inv(D)))``.
    """
    F = problem.factors
    k = int(np.prod(problem.dims))
    if k > 2:
        raise DimensionError(f"oracle_small handles at most 2 free entries, got {k}")
    if k == 0:
        return problem.objective(np.zeros(problem.dims))
    R = radius if radius is not None else 10.0 * (1.0 + float(F.Dinv.max()))

    # H(z) = G + sum_p z_p E_p with E_p = V2 e_p U1^T (column-major Z)
    basis = [h_from_z(F, np.eye(k)[p].reshape(problem.dims, order="F")) - F.G for p in range(k)]
    G = F.G

    def at(*z):
        H = G.copy()
        for zp, E in zip(z, basis):
            H += zp * E
        return H

    def one(*z):
        return float(np.abs(at(*z)).sum())

    def two(*z):
        return float(np.linalg.norm(at(*z), axis=1).sum())

    def nested(f):
        if k == 1:
            return _golden(f, -R, R, iters)[1]
        return _golden(lambda u: _golden(lambda v: f(u, v), -R, R, iters)[1], -R, R, iters)[1]

    if problem.kind is ProblemKind.P21:
        return nested(two)
    if problem.kind is ProblemKind.P123:
        return nested(one)

    b = problem.budget

    def best_on_line(u):
        # min of the 1-norm over feasible v with z = (u, v)
        span = _sublevel(lambda v: two(u, v), -R, R, b, iters)
        if span is None:
            return np.inf
        return _golden(lambda v: one(u, v), span[0], span[1], iters)[1]

    if k == 1:
        span = _sublevel(two, -R, R, b, iters)
        return np.inf if span is None else _golden(one, span[0], span[1], iters)[1]
    dom = _sublevel(lambda u: _golden(lambda v: two(u, v), -R, R, iters)[1], -R, R, b, iters)
    if dom is None:
        return np.inf
    return _golden(best_on_line, dom[0], dom[1], iters)[1]
