"""Determinant local search for row-sparse ah-symmetric reflexive generalized inverses.

Choose ``r`` linearly independent rows ``S`` of ``A``; then swap columns in
and out of ``T`` while that multiplies ``|det A[S, T]|`` by more than
``kappa``. With ``A_hat = A[:, T]``, the matrix that is zero except on rows
``T``, where it equals ``pinv(A_hat)``, is a reflexive generalized inverse of
``A`` with ``AH`` symmetric and exactly ``r`` nonzero rows.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigError, ConvergenceError, RankError
from .matcore import ToleranceConfig, as_matrix, svd

__all__ = [
    "LsConfig",
    "LsState",
    "select_rows",
    "initial_T",
    "swap_ratio",
    "local_search",
    "build_ah_symmetric",
]

log = logging.getLogger(__name__)

REFRESH_EVERY = 50


@dataclass(frozen=True)
class LsConfig:
    """``kappa`` is the minimum determinant gain for a swap to be accepted.

    The default is effectively plain local search; a value such as 1.01 bounds
    the number of swaps polynomially.
    """

    kappa: float = 1.0 + 1e-10
    max_swaps: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not self.kappa >= 1.0:
            raise ConfigError(f"kappa must be >= 1, got {self.kappa}")
        if self.max_swaps < 0:
            raise ConfigError("max_swaps must be nonnegative")


@dataclass(eq=False)
class LsState:
    """Current submatrix ``A[S, T]`` with its cached inverse.

    ``logabsdet`` is kept instead of ``|det|`` itself, which over- or
    underflows for moderate ``r``; :attr:`absdet` exponentiates it.
    ``ratios`` caches ``Atil_inv @ A[S, :]`` (r x n).
    """

    A: np.ndarray
    S: np.ndarray
    T: np.ndarray
    Atil_inv: np.ndarray
    ratios: np.ndarray
    logabsdet: float
    swaps: int = 0
    locally_optimal: bool = False
    history: list[tuple[int, int, int, float, float]] = field(default_factory=list)

    @property
    def r(self) -> int:
        return len(self.S)

    @property
    def Atil(self) -> np.ndarray:
        return self.A[np.ix_(self.S, self.T)]

    @property
    def absdet(self) -> float:
        return float(np.exp(self.logabsdet))

    @classmethod
    def start(cls, A: np.ndarray, S, T) -> "LsState":
        S = np.asarray(S, dtype=int)
        T = np.asarray(T, dtype=int).copy()
        state = cls(A, S, T, np.empty((0, 0)), np.empty((0, 0)), 0.0)
        state.refresh()
        return state

    def refresh(self) -> None:
        """Recompute the inverse, ratio table and determinant from scratch."""
        Atil = self.Atil
        lu, piv = scipy.linalg.lu_factor(Atil, check_finite=False)
        diag = np.abs(np.diag(lu))
        if np.any(diag == 0):
            raise RankError(f"A[S, T] is singular for T = {self.T.tolist()}")
        self.logabsdet = float(np.log(diag).sum())
        self.Atil_inv = scipy.linalg.lu_solve((lu, piv), np.eye(self.r), check_finite=False)
        self.ratios = scipy.linalg.lu_solve((lu, piv), self.A[self.S], check_finite=False)

    def swap(self, j: int, k: int) -> float:
        """Replace ``T[j]`` by column ``k``; returns the determinant ratio."""
        w = self.ratios[:, k].copy()
        pivot = w[j]
        if pivot == 0:
            raise RankError("swap would make A[S, T] singular")
        # Sherman-Morrison update for replacing column j of Atil by A[S, k]
        w[j] -= 1.0
        self.ratios -= np.outer(w / pivot, self.ratios[j])
        self.Atil_inv -= np.outer(w / pivot, self.Atil_inv[j])
        self.T[j] = k
        self.logabsdet += float(np.log(abs(pivot)))
        self.swaps += 1
        if self.swaps % REFRESH_EVERY == 0:
            self.refresh()
        return abs(pivot)


def _pivoted_indices(M: np.ndarray, r: int) -> np.ndarray:
    """First ``r`` column pivots of a column-pivoted QR of ``M``, sorted."""
    _, R, piv = scipy.linalg.qr(M, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if len(diag) < r or diag[0] == 0 or diag[r - 1] <= max(M.shape) * np.finfo(float).eps * diag[0]:
        raise RankError(f"could not certify {r} linearly independent columns")
    return np.sort(piv[:r])


def select_rows(A, r: int | None = None, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Indices ``S`` (0-based) of ``r`` linearly independent rows of ``A``.

    Taken from a column-pivoted QR of ``A.T``; ``r`` defaults to the numerical
    rank of ``A``.
    """
    A = as_matrix(A, "A")
    if r is None:
        r = svd(A, tol).r
    return _pivoted_indices(A.T, r)


def initial_T(A, S) -> np.ndarray:
    """Columns ``T`` with ``A[S, T]`` nonsingular, from a pivoted QR of ``A[S, :]``."""
    A = as_matrix(A, "A")
    S = np.asarray(S, dtype=int)
    return _pivoted_indices(A[S], len(S))


def swap_ratio(state: LsState, j: int, k: int) -> float:
    """``|det|`` after replacing ``T[j]`` by column ``k``, divided by ``|det|`` before.

    Equals ``|(inv(Atil) @ A[S, k])[j]|`` by the rank-one determinant identity.
    """
    if not 0 <= j < state.r:
        raise IndexError(f"position {j} outside T of length {state.r}")
    if not 0 <= k < state.A.shape[1]:
        raise IndexError(f"column {k} outside A with {state.A.shape[1]} columns")
    if state.T[j] == k:
        return 1.0
    return float(abs(state.ratios[j, k]))


def local_search(
    A,
    cfg: LsConfig | None = None,
    tol: ToleranceConfig | None = None,
    *,
    rank: int | None = None,
    S=None,
    T=None,
    raise_on_limit: bool = False,
) -> LsState:
    """Best-improving swap search for a local maximizer of ``|det A[S, T]|``.

    Each step scans every (position, column) pair, takes the largest ratio
    (ties broken by smallest position, then smallest column) and accepts it if
    it exceeds ``cfg.kappa``. ``S`` and ``T`` are 0-based and chosen by pivoted
    QR when omitted.

    On reaching ``max_swaps`` the state is returned with
    ``locally_optimal = False`` (or :class:`ConvergenceError` is raised if
    ``raise_on_limit``).
    """
    cfg = cfg or LsConfig()
    A = as_matrix(A, "A")
    if S is None:
        if rank is None:
            rank = svd(A, tol).r
        S = select_rows(A, rank)
    if T is None:
        T = initial_T(A, S)
    state = LsState.start(A, S, T)
    in_T = np.zeros(A.shape[1], dtype=bool)
    while True:
        in_T[:] = False
        in_T[state.T] = True
        mags = np.abs(state.ratios)
        mags[:, in_T] = 0.0
        flat = int(np.argmax(mags))
        j, k = divmod(flat, A.shape[1])
        best = mags[j, k]
        if best <= cfg.kappa:
            state.locally_optimal = True
            break
        if state.swaps >= cfg.max_swaps:
            if raise_on_limit:
                raise ConvergenceError(f"local search hit max_swaps={cfg.max_swaps}")
            log.warning("local search stopped at max_swaps=%d before local optimality", cfg.max_swaps)
            break
        ratio = state.swap(j, k)
        state.history.append((state.swaps, j, k, ratio, state.logabsdet))
    return state


def build_ah_symmetric(A, T, rtol: float = 1e-12) -> np.ndarray:
    """Generalized inverse supported on rows ``T``: ``H[T] = pinv(A[:, T])``.

    ``pinv(A[:, T]) = inv(A_hat^T A_hat) A_hat^T`` is computed from a thin QR of
    ``A_hat`` rather than the normal equations.

    Raises
    ------
    RankError
        If ``A[:, T]`` is numerically rank deficient.
    """
    A = as_matrix(A, "A")
    T = np.asarray(T, dtype=int)
    A_hat = A[:, T]
    Q, R = np.linalg.qr(A_hat)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag.min() <= rtol * max(diag.max(), 1e-300) * max(A_hat.shape):
        raise RankError("A[:, T] is rank deficient")
    H = np.zeros(A.shape[::-1])
    H[T] = scipy.linalg.solve_triangular(R, Q.T)
    return H
