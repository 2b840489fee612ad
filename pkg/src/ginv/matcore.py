"""Dense matrix core: SVD factors, the Moore-Penrose pseudoinverse, norms and
Penrose-property residuals.

Matrices are plain 2-D ``numpy.ndarray`` objects of dtype ``float64``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DimensionError, ZeroMatrixError

__all__ = [
    "ToleranceConfig",
    "SvdFactors",
    "Residuals",
    "as_matrix",
    "svd",
    "mp_pseudoinverse",
    "norm_1",
    "norm_21",
    "norm_0",
    "nonzero_rows",
    "property_residuals",
]

ZERO_TOL = 1e-5


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances.

    Parameters
    ----------
    rank_tol : float, optional
        Relative singular-value cutoff used for rank detection. ``None`` means
        ``max(m, n) * eps``, resolved per matrix.
    zero_tol : float
        Entries with magnitude above this are counted as nonzero.
    residual_tol : float
        Relative tolerance for Penrose-property checks.
    solver_tol : float
        Convergence tolerance handed to the optimization routines.
    """

    rank_tol: float | None = None
    zero_tol: float = ZERO_TOL
    residual_tol: float = 1e-8
    solver_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "zero_tol", "residual_tol", "solver_tol"):
            value = getattr(self, name)
            if value is None and name == "rank_tol":
                continue
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}")

    def effective_rank_tol(self, shape: tuple[int, int]) -> float:
        if self.rank_tol is not None:
            return self.rank_tol
        return max(shape) * np.finfo(np.float64).eps


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D float64 array (no copy when possible)."""
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Full SVD ``A = U @ Sigma @ V.T`` split at the numerical rank ``r``."""

    A: np.ndarray
    U: np.ndarray
    V: np.ndarray
    sigma: np.ndarray
    r: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def U1(self) -> np.ndarray:
        return self.U[:, : self.r]

    @property
    def U2(self) -> np.ndarray:
        return self.U[:, self.r :]

    @property
    def V1(self) -> np.ndarray:
        return self.V[:, : self.r]

    @property
    def V2(self) -> np.ndarray:
        return self.V[:, self.r :]

    @property
    def D(self) -> np.ndarray:
        return np.diag(self.sigma[: self.r])

    @cached_property
    def Dinv(self) -> np.ndarray:
        return np.diag(1.0 / self.sigma[: self.r])

    @cached_property
    def G(self) -> np.ndarray:
        """``V1 @ Dinv @ U1.T``, which is the pseudoinverse of ``A``."""
        return (self.V1 / self.sigma[: self.r]) @ self.U1.T

    @property
    def Sigma(self) -> np.ndarray:
        S = np.zeros(self.shape)
        k = min(self.shape)
        S[np.arange(k), np.arange(k)] = self.sigma
        return S

    def transpose(self) -> "SvdFactors":
        """Factors of ``A.T`` (roles of U and V exchanged)."""
        return SvdFactors(self.A.T, self.V, self.U, self.sigma, self.r)


def _leading(col: np.ndarray) -> float:
    # first entry whose magnitude is within rounding of the largest; a plain
    # argmax would let last-bit noise pick between tied entries
    mags = np.abs(col)
    return col[np.argmax(mags >= mags.max() * (1 - 1e-12))]


def _normalize_signs(U: np.ndarray, V: np.ndarray) -> None:
    # make the largest-magnitude entry of every V column positive, flipping the
    # paired U column too; unpaired columns are normalized on their own
    k = min(U.shape[0], V.shape[0])
    for j in range(V.shape[1]):
        if _leading(V[:, j]) < 0:
            V[:, j] = -V[:, j]
            if j < k:
                U[:, j] = -U[:, j]
    for j in range(k, U.shape[1]):
        if _leading(U[:, j]) < 0:
            U[:, j] = -U[:, j]


def svd(A, cfg: ToleranceConfig | None = None, rank: int | None = None) -> SvdFactors:
    """Full SVD of ``A`` with rank detection.

    Parameters
    ----------
    A : array_like, shape (m, n)
    cfg : ToleranceConfig, optional
    rank : int, optional
        Use this rank instead of detecting it (for instances of known rank).

    Raises
    ------
    ZeroMatrixError
        If ``A`` is identically zero.
    """
    cfg = cfg or ToleranceConfig()
    A = as_matrix(A, "A")
    if A.size == 0 or not np.any(A):
        raise ZeroMatrixError("A is the zero matrix; its generalized inverses are unstructured")
    U, sigma, Vt = np.linalg.svd(A, full_matrices=True)
    V = Vt.T.copy()
    _normalize_signs(U, V)
    if rank is None:
        cutoff = cfg.effective_rank_tol(A.shape) * sigma[0]
        rank = int(np.count_nonzero(sigma > cutoff))
    elif not 1 <= rank <= min(A.shape):
        raise ConfigError(f"rank override {rank} outside [1, {min(A.shape)}]")
    A = A.copy()
    A.setflags(write=False)
    return SvdFactors(A, U, V, sigma, int(rank))


def mp_pseudoinverse(F: SvdFactors) -> np.ndarray:
    """Moore-Penrose pseudoinverse ``V @ pinv(Sigma) @ U.T``."""
    return F.G.copy()


def norm_1(M) -> float:
    return float(np.abs(M).sum())


def norm_21(M) -> float:
    """Sum of the Euclidean norms of the rows."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, axis=1).sum())


def norm_0(M, zero_tol: float = ZERO_TOL) -> int:
    return int(np.count_nonzero(np.abs(M) > zero_tol))


def nonzero_rows(M, zero_tol: float = ZERO_TOL) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return int(np.count_nonzero(np.any(np.abs(M) > zero_tol, axis=1)))


class Residuals(NamedTuple):
    """Frobenius-norm defects of the four Penrose properties."""

    p1: float
    p2: float
    p3: float
    p4: float


def property_residuals(A, H) -> Residuals:
    """Residuals ``||AHA-A||, ||HAH-H||, ||AH-(AH)^T||, ||HA-(HA)^T||``."""
    A = as_matrix(A, "A")
    H = as_matrix(H, "H")
    if H.shape != A.shape[::-1]:
        raise DimensionError(f"H must have shape {A.shape[::-1]}, got {H.shape}")
    AH = A @ H
    HA = H @ A
    return Residuals(
        float(np.linalg.norm(AH @ A - A)),
        float(np.linalg.norm(HA @ H - H)),
        float(np.linalg.norm(AH - AH.T)),
        float(np.linalg.norm(HA - HA.T)),
    )
