"""Lax-pair primitives for the focusing NLS equation ``i u_t + u_xx + 2|u|^2 u = 0``.

Two-component vectors are numpy arrays whose last axis has length 2 and
2x2 matrices are arrays whose last two axes are ``(2, 2)``.  Every function
broadcasts over ``t`` and ``x`` so whole grids are evaluated in one call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
# symmetry matrix of the Lax pair, V*(lambda*) = SIGMA V(lambda) SIGMA^-1
SIGMA = np.array([[0, 1], [-1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class SolitonParameters:
    """Physical parameters of one soliton: velocity ``xi``, amplitude ``eta``,
    initial position ``x1`` and phase ``phi1``.

    The spectral parameter is ``xi + i*eta``; the soliton has height ``2*eta``
    and travels with velocity ``-4*xi``.
    """

    xi: float
    eta: float
    x1: float = 0.0
    phi1: float = 0.0

    def __post_init__(self):
        vals = (self.xi, self.eta, self.x1, self.phi1)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite soliton parameters {vals}")
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")

    @property
    def lam(self) -> complex:
        return complex(self.xi, self.eta)


def theta(t, x, lam):
    """Phase ``lam*x + 2*lam**2*t`` of the vacuum Lax solutions."""
    return lam * np.asarray(x) + 2 * lam**2 * np.asarray(t)


def lax_U(lam, u):
    """x-part ``-i lam sigma3 + Q`` of the Lax pair."""
    lam, u = np.broadcast_arrays(np.asarray(lam, dtype=complex), np.asarray(u, dtype=complex))
    out = np.zeros(lam.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = -1j * lam
    out[..., 1, 1] = 1j * lam
    out[..., 0, 1] = u
    out[..., 1, 0] = -np.conj(u)
    return out


def lax_V(lam, u, ux):
    """t-part ``-2i lam^2 sigma3 + Qtilde`` of the Lax pair."""
    lam, u, ux = np.broadcast_arrays(
        np.asarray(lam, dtype=complex), np.asarray(u, dtype=complex), np.asarray(ux, dtype=complex)
    )
    mod2 = np.abs(u) ** 2
    out = np.zeros(lam.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = -2j * lam**2 + 1j * mod2
    out[..., 1, 1] = 2j * lam**2 - 1j * mod2
    out[..., 0, 1] = 2 * lam * u + 1j * ux
    out[..., 1, 0] = -2 * lam * np.conj(u) + 1j * np.conj(ux)
    return out


def vacuum_solution(lam, u0, v0, t, x):
    """Column solution ``(u0 e^{-i theta}, v0 e^{i theta})`` of the Lax system with ``u = 0``."""
    if u0 == 0 and v0 == 0:
        raise DomainError("degenerate vacuum vector")
    th = theta(t, x, lam)
    return np.stack([u0 * np.exp(-1j * th), v0 * np.exp(1j * th)], axis=-1)


def orthogonal_partner(v):
    """Return ``(-conj(v2), conj(v1))``, Hermitian-orthogonal to ``v``."""
    v = np.asarray(v, dtype=complex)
    return np.stack([-np.conj(v[..., 1]), np.conj(v[..., 0])], axis=-1)


def one_soliton(params: SolitonParameters, t, x):
    """Closed-form one-soliton solution on the whole line."""
    xi, eta = params.xi, params.eta
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    phase = 2 * xi * x + 4 * (xi**2 - eta**2) * t + params.phi1 + np.pi / 2
    return 2 * eta * np.exp(-1j * phase) / np.cosh(2 * eta * (x + 4 * xi * t - params.x1))


def one_soliton_x(params: SolitonParameters, t, x):
    """Analytic x-derivative of :func:`one_soliton`."""
    xi, eta = params.xi, params.eta
    arg = 2 * eta * (np.asarray(x, dtype=float) + 4 * xi * np.asarray(t, dtype=float) - params.x1)
    return one_soliton(params, t, x) * (-2j * xi - 2 * eta * np.tanh(arg))
