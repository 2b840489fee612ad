"""Reduced optimization problems over the free block ``Z`` and their LP encodings.

Every candidate has the form ``H = G + V2 @ Z @ U1.T`` (see
:func:`ginv.structure.h_from_z`), so each problem is posed over the
``(n - r) x r`` matrix ``Z`` alone:

``P21``
    minimize ``||H||_{2,1}``, i.e. the sum of row norms of ``V @ [inv(D); Z]``.
``P21_L1``
    minimize ``||H||_1`` subject to ``||H||_{2,1} <= z_budget``.
``P123``
    minimize ``||H||_1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, DimensionError
from .matcore import SvdFactors, norm_1, norm_21
from .matio import write_csv
from .structure import h_from_z

__all__ = [
    "ProblemKind",
    "Status",
    "ReducedProblem",
    "Solution",
    "BUDGET_SLACK",
    "objective_p21",
    "objective_p1",
    "build",
    "export_lp",
    "epigraph_lp",
    "factored_lp",
    "dump_reduced_data",
]

BUDGET_SLACK = 1e-8


class ProblemKind(str, enum.Enum):
    P21 = "P21"
    P21_L1 = "P21_L1"
    P123 = "P123"


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    ITER_LIMIT = "IterLimit"
    TIME_LIMIT = "TimeLimit"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True, eq=False)
class ReducedProblem:
    kind: ProblemKind
    factors: SvdFactors
    z_budget: float | None = None

    @property
    def dims(self) -> tuple[int, int]:
        return (self.factors.n - self.factors.r, self.factors.r)

    @property
    def budget(self) -> float:
        """The 2,1-norm bound actually enforced, ``z_budget * (1 + BUDGET_SLACK)``."""
        if self.z_budget is None:
            raise ConfigError(f"{self.kind.value} has no 2,1-norm budget")
        return self.z_budget * (1.0 + BUDGET_SLACK)

    def objective(self, Z) -> float:
        if self.kind is ProblemKind.P21:
            return objective_p21(self.factors, Z)
        return objective_p1(self.factors, Z)

    def is_feasible(self, Z) -> bool:
        if self.kind is not ProblemKind.P21_L1:
            return True
        return objective_p21(self.factors, Z) <= self.budget


@dataclass(eq=False)
class Solution:
    """Result of a solve. ``H`` is always ``h_from_z(factors, Z)``."""

    Z: np.ndarray
    objective: float
    H: np.ndarray
    status: Status
    iterations: int
    solve_time: float
    method: str = ""
    trace: list[tuple[int, float, float]] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status is Status.OPTIMAL


def _check_z(F: SvdFactors, Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    if Z.shape != (F.n - F.r, F.r):
        raise DimensionError(f"Z must have shape {(F.n - F.r, F.r)}, got {Z.shape}")
    return Z


def row_factor(F: SvdFactors, Z) -> np.ndarray:
    """``V @ [inv(D); Z]`` (n x r); its row norms equal those of ``H``."""
    Z = _check_z(F, Z)
    M = F.V1 / F.sigma[: F.r]
    if Z.size:
        M = M + F.V2 @ Z
    return M


def objective_p21(F: SvdFactors, Z) -> float:
    """Sum over rows of ``||e_i^T V [inv(D); Z]||_2``."""
    return norm_21(row_factor(F, Z))


def objective_p1(F: SvdFactors, Z) -> float:
    """``||G + V2 Z U1^T||_1``."""
    return norm_1(h_from_z(F, _check_z(F, Z)))


def build(kind, F: SvdFactors, z_budget: float | None = None) -> ReducedProblem:
    """Build a reduced problem.

    Raises
    ------
    ConfigError
        If ``kind`` is ``P21_L1`` and no positive ``z_budget`` is supplied, or a
        budget is supplied for another kind.
    """
    kind = ProblemKind(kind)
    if kind is ProblemKind.P21_L1:
        if z_budget is None:
            raise ConfigError("P21_L1 needs z_budget (normally the optimal value of P21)")
        if not (np.isfinite(z_budget) and z_budget > 0):
            raise ConfigError(f"z_budget must be positive, got {z_budget!r}")
        z_budget = float(z_budget)
    elif z_budget is not None:
        raise ConfigError(f"z_budget only applies to P21_L1, not {kind.value}")
    return ReducedProblem(kind, F, z_budget)


def budget_lower_bound(F: SvdFactors) -> float:
    """A cheap lower bound on the P21 optimum: ``||inv(D)||_F``.

    Any feasible ``M = V [inv(D); Z]`` has ``||M||_{2,1} >= ||M||_F >= ||inv(D)||_F``.
    """
    return float(np.linalg.norm(1.0 / F.sigma[: F.r]))


def _z_operator(F: SvdFactors) -> np.ndarray:
    # column-major vec: vec(V2 Z U1^T) = kron(U1, V2) vec(Z)
    return np.kron(F.U1, F.V2)


def epigraph_lp(F: SvdFactors):
    """LP ``min sum(Fe)`` s.t. ``Fe - V2 Z U1^T >= G``, ``Fe + V2 Z U1^T >= -G``.

    Together the two families say ``Fe >= |G + V2 Z U1^T|`` entrywise.

    Variables are ``[vec(Fe), vec(Z)]`` (column-major). Returns
    ``(c, A_ub, b_ub, bounds)`` in ``scipy.optimize.linprog`` convention, with
    both inequality families written as ``<=``.
    """
    N = F.n * F.m
    k = (F.n - F.r) * F.r
    K = sp.csr_matrix(_z_operator(F))
    g = F.G.ravel(order="F")
    eye = sp.identity(N, format="csr")
    # -Fe + K z <= -g  and  -Fe - K z <= g
    A_ub = sp.vstack([sp.hstack([-eye, K]), sp.hstack([-eye, -K])]).tocsc()
    b_ub = np.concatenate([-g, g])
    c = np.concatenate([np.ones(N), np.zeros(k)])
    bounds = [(0, None)] * N + [(None, None)] * k
    return c, A_ub, b_ub, bounds


def factored_lp(F: SvdFactors):
    """Sparse equality-form LP equivalent to ``min ||G + V2 Z U1^T||_1``.

    Introduces ``K = V2 Z`` (n x r) so that ``H = G + K U1^T`` and writes
    ``H = P - Q`` with ``P, Q >= 0``. Variables ``[vec P, vec Q, vec K, vec Z]``.
    The dense ``kron(U1, V2)`` coupling is factored as
    ``kron(U1, I) @ kron(I, V2)``, which keeps the constraint matrix sparse.
    Returns ``(c, A_eq, b_eq, bounds, slices)``.
    """
    n, m, r = F.n, F.m, F.r
    N, nr, k = n * m, n * r, (n - r) * r
    eye_N = sp.identity(N, format="csr")
    top = sp.hstack(
        [eye_N, -eye_N, -sp.kron(sp.csr_matrix(F.U1), sp.identity(n)), sp.csr_matrix((N, k))]
    )
    bottom = sp.hstack(
        [sp.csr_matrix((nr, 2 * N)), sp.identity(nr), -sp.kron(sp.identity(r), sp.csr_matrix(F.V2))]
    )
    A_eq = sp.vstack([top, bottom]).tocsc()
    b_eq = np.concatenate([F.G.ravel(order="F"), np.zeros(nr)])
    c = np.concatenate([np.ones(2 * N), np.zeros(nr + k)])
    bounds = [(0, None)] * (2 * N) + [(None, None)] * (nr + k)
    slices = {"P": slice(0, N), "Q": slice(N, 2 * N), "K": slice(2 * N, 2 * N + nr), "Z": slice(2 * N + nr, None)}
    return c, A_eq, b_eq, bounds, slices


def export_lp(F: SvdFactors | ReducedProblem, path) -> tuple[int, int]:
    """Write the epigraph LP of P123 to ``path`` in MPS format.

    Names fit the 8-character fixed-format fields; numeric fields carry 17
    significant digits, so readers must accept whitespace-separated (free)
    MPS. Returns ``(n_variables, n_constraint_rows)``.
    """
    if isinstance(F, ReducedProblem):
        if F.kind is not ProblemKind.P123:
            raise ConfigError(f"LP export applies to P123, not {F.kind.value}")
        F = F.factors
    n, m, r = F.n, F.m, F.r
    N, k = n * m, (n - r) * r
    if N > 9_999_999:
        raise DimensionError("instance too large for 8-character MPS names")
    K = _z_operator(F)
    g = F.G.ravel(order="F")
    up = [f"U{i:07d}" for i in range(N)]
    lo = [f"L{i:07d}" for i in range(N)]

    lines = ["NAME          P123", "ROWS", " N  OBJ"]
    lines += [f" G  {name}" for name in up]
    lines += [f" G  {name}" for name in lo]
    lines.append("COLUMNS")
    for i in range(N):
        col = f"F{i:07d}"
        lines.append(f"    {col:<8}  {'OBJ':<8}  1")
        lines.append(f"    {col:<8}  {up[i]:<8}  1")
        lines.append(f"    {col:<8}  {lo[i]:<8}  1")
    for j in range(k):
        col = f"Z{j:07d}"
        for i in np.flatnonzero(K[:, j]):
            v = K[i, j]
            # F - K z >= g  and  F + K z >= -g
            lines.append(f"    {col:<8}  {up[i]:<8}  {_num(-v)}")
            lines.append(f"    {col:<8}  {lo[i]:<8}  {_num(v)}")
    lines.append("RHS")
    for i in range(N):
        if g[i] != 0.0:
            lines.append(f"    {'RHS':<8}  {up[i]:<8}  {_num(g[i])}")
            lines.append(f"    {'RHS':<8}  {lo[i]:<8}  {_num(-g[i])}")
    lines.append("BOUNDS")
    for j in range(k):
        lines.append(f" FR {'BND':<8}  Z{j:07d}")
    lines.append("ENDATA")
    Path(path).write_text("\n".join(lines) + "\n")
    return N + k, 2 * N


def _num(v: float) -> str:
    return f"{v:.17g}"


def dump_reduced_data(F: SvdFactors, directory) -> list[Path]:
    """Write ``G``, ``V2`` and ``U1`` as CSV files into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, M in (("G", F.G), ("V2", F.V2), ("U1", F.U1)):
        p = directory / f"{name}.csv"
        if M.size:
            write_csv(p, M)
        else:
            p.write_text("")
        paths.append(p)
    return paths
