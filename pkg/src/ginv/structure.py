"""Block view of candidate inverses in the singular bases of ``A``.

Any ``H`` (n x m) can be written ``H = V @ Gamma @ U.T`` with
``Gamma = V.T @ H @ U`` partitioned at the rank ``r``::

    Gamma = [[X, Y],
             [Z, W]]

with ``X`` r x r, ``Y`` r x (m-r), ``Z`` (n-r) x r and ``W`` (n-r) x (m-r).
``AHA = A`` holds exactly when ``X = inv(D)``; given that, ``HAH = H`` iff
``W = Z @ D @ Y``, ``AH`` is symmetric iff ``Y = 0`` and ``HA`` is symmetric
iff ``Z = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError
from .matcore import SvdFactors, as_matrix

__all__ = ["BlockGamma", "BlockResiduals", "gamma_from_H", "H_from_gamma", "h_from_z", "block_residuals"]


@dataclass(frozen=True, eq=False)
class BlockGamma:
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    W: np.ndarray

    @classmethod
    def split(cls, gamma: np.ndarray, r: int) -> "BlockGamma":
        return cls(gamma[:r, :r], gamma[:r, r:], gamma[r:, :r], gamma[r:, r:])

    def assemble(self) -> np.ndarray:
        return np.block([[self.X, self.Y], [self.Z, self.W]])

    def check_shapes(self, F: SvdFactors) -> None:
        m, n, r = F.m, F.n, F.r
        expected = {"X": (r, r), "Y": (r, m - r), "Z": (n - r, r), "W": (n - r, m - r)}
        for name, shape in expected.items():
            got = getattr(self, name).shape
            if got != shape:
                raise DimensionError(f"block {name} has shape {got}, expected {shape}")


def gamma_from_H(F: SvdFactors, H) -> BlockGamma:
    """Blocks of ``V.T @ H @ U``."""
    H = as_matrix(H, "H")
    if H.shape != (F.n, F.m):
        raise DimensionError(f"H must have shape {(F.n, F.m)}, got {H.shape}")
    return BlockGamma.split(F.V.T @ H @ F.U, F.r)


def H_from_gamma(F: SvdFactors, gamma: BlockGamma) -> np.ndarray:
    gamma.check_shapes(F)
    return F.V @ gamma.assemble() @ F.U.T


def h_from_z(F: SvdFactors, Z) -> np.ndarray:
    """Assemble ``H = G + V2 @ Z @ U1.T``, i.e. ``Gamma = [[inv(D), 0], [Z, 0]]``."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.shape != (F.n - F.r, F.r):
        raise DimensionError(f"Z must have shape {(F.n - F.r, F.r)}, got {Z.shape}")
    if Z.size == 0:
        return F.G.copy()
    return F.G + F.V2 @ Z @ F.U1.T


class BlockResiduals(NamedTuple):
    """Frobenius-norm defects of the block criteria for P1..P4."""

    p1: float
    p2: float
    p3: float
    p4: float


def _fro(M: np.ndarray) -> float:
    return float(np.linalg.norm(M)) if M.size else 0.0


def block_residuals(F: SvdFactors, gamma: BlockGamma) -> BlockResiduals:
    """``(||X - inv(D)||, ||Z D Y - W||, ||Y||, ||Z||)``; missing blocks count as 0."""
    gamma.check_shapes(F)
    d = F.sigma[: F.r]
    ZDY = (gamma.Z * d) @ gamma.Y
    return BlockResiduals(
        _fro(gamma.X - F.Dinv),
        _fro(ZDY - gamma.W),
        _fro(gamma.Y),
        _fro(gamma.Z),
    )
