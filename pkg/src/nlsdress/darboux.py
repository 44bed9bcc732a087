"""Iterated Darboux (dressing) transformation over the zero seed.

The N-fold dressing matrix is the ordered product

    D[N](lam) = F_N(lam) ... F_1(lam),   F_j = (lam - conj(l_j)) I + (conj(l_j) - l_j) P[j],

where P[j] is the rank-one Hermitian projector onto ``D[j-1](l_j) psi_j`` and
``psi_j`` is a vacuum Lax solution.  The dressed potential is

    u[N] = -2i sum_j (l_j - conj(l_j)) P[j]_12.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import IDENTITY, theta, vacuum_solution
from .errors import DomainError

BREAKDOWN_NORM = 1e-300
# ||F_k(lam) psi|| relative to the larger eigenvalue modulus of F_k(lam)
BREAKDOWN_RELATIVE = 1e-13
DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class SpectralDatum:
    """Spectral parameter ``lam`` with the constants ``(u0, v0)`` of its vacuum solution."""

    lam: complex
    u0: complex
    v0: complex

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "u0", complex(self.u0))
        object.__setattr__(self, "v0", complex(self.v0))
        if self.lam.imag == 0:
            raise DomainError(f"spectral parameter {self.lam} is real")
        if self.u0 == 0 and self.v0 == 0:
            raise DomainError("degenerate vacuum vector")
        if not all(np.isfinite(z) for z in (self.lam, self.u0, self.v0)):
            raise DomainError("non-finite spectral datum")

    def solution(self, t, x):
        return vacuum_solution(self.lam, self.u0, self.v0, t, x)

    def scaled_solution(self, t, x):
        """Vacuum solution rescaled pointwise so its largest component has modulus ``<= 1``.

        Projectors are scale invariant, so this only removes the ``e^{+-2 eta x}`` overflow.
        """
        th = np.asarray(theta(t, x, self.lam))
        with np.errstate(divide="ignore"):
            la = np.log(abs(self.u0)) + th.imag
            lb = np.log(abs(self.v0)) - th.imag
        shift = np.maximum(la, lb)
        a = self.u0 * np.exp(-1j * th.real - shift + th.imag) if self.u0 else np.zeros_like(th)
        b = self.v0 * np.exp(1j * th.real - shift - th.imag) if self.v0 else np.zeros_like(th)
        return np.stack([a, b], axis=-1)


@dataclass(frozen=True)
class DressingChain:
    """Ordered spectral data defining a Darboux transformation of the zero seed."""

    data: tuple[SpectralDatum, ...]
    seed: str = "zero"

    def __init__(self, data: Sequence[SpectralDatum], seed: str = "zero"):
        object.__setattr__(self, "data", tuple(data))
        object.__setattr__(self, "seed", seed)
        if seed != "zero":
            raise ValueError(f"unsupported seed {seed!r}")
        lams = [d.lam for d in self.data]
        for i, a in enumerate(lams):
            for b in lams[:i]:
                if abs(a - b) <= 1e-12 * max(1.0, abs(a)):
                    raise DomainError(f"duplicate spectral parameter {a}")

    def __len__(self):
        return len(self.data)

    @property
    def lams(self) -> np.ndarray:
        return np.array([d.lam for d in self.data], dtype=complex)


@dataclass
class DressingEvaluation:
    """Unit kernel vectors ``p_j`` of the projectors ``P[j] = p_j p_j^H`` on a grid."""

    lams: np.ndarray
    vectors: np.ndarray  # shape (N, ..., 2)
    _u: np.ndarray | None = field(default=None, repr=False)

    @property
    def projectors(self) -> np.ndarray:
        v = self.vectors
        return v[..., :, None] * np.conj(v[..., None, :])

    @property
    def dressed_u(self) -> np.ndarray:
        if self._u is None:
            if len(self.lams) == 0:
                self._u = np.zeros(self.vectors.shape[1:-1], dtype=complex)
            else:
                p12 = self.vectors[..., 0] * np.conj(self.vectors[..., 1])
                weights = (-2j * (self.lams - np.conj(self.lams))).reshape((-1,) + (1,) * (p12.ndim - 1))
                self._u = np.sum(weights * p12, axis=0)
        return self._u

    @property
    def sigma1(self) -> np.ndarray:
        """Coefficient of ``lam^(N-1)`` in ``D[N]``."""
        shape = self.vectors.shape[1:-1]
        out = np.zeros(shape + (2, 2), dtype=complex)
        for lam, proj in zip(self.lams, self.projectors):
            out += -np.conj(lam) * IDENTITY + (np.conj(lam) - lam) * proj
        return out


def _apply_factor(lam, lam_k, p_k, vec):
    # ((lam - lam_k*) I + (lam_k* - lam_k) p_k p_k^H) vec
    proj = np.sum(np.conj(p_k) * vec, axis=-1, keepdims=True) * p_k
    return (lam - np.conj(lam_k)) * vec + (np.conj(lam_k) - lam_k) * proj


def evaluate_chain(chain: DressingChain, t, x) -> DressingEvaluation:
    """Build all projectors of ``chain`` at the points ``(t, x)`` (broadcast)."""
    t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    vecs = []
    for j, datum in enumerate(chain.data):
        psi = datum.scaled_solution(t, x)
        for k in range(j):
            lam_k = chain.data[k].lam
            psi = _apply_factor(datum.lam, lam_k, vecs[k], psi)
            nrm = np.linalg.norm(psi, axis=-1, keepdims=True)
            scale = max(abs(datum.lam - np.conj(lam_k)), abs(datum.lam - lam_k))
            if np.any(nrm < BREAKDOWN_RELATIVE * scale):
                raise DomainError(f"projector breakdown at datum {j} (lambda={datum.lam})")
            psi = psi / nrm
        nrm = np.linalg.norm(psi, axis=-1, keepdims=True)
        if np.any(nrm < BREAKDOWN_NORM) or not np.all(np.isfinite(nrm)):
            raise DomainError(f"projector breakdown at datum {j} (lambda={datum.lam})")
        vecs.append(psi / nrm)
    if vecs:
        vectors = np.stack(vecs)
    else:
        vectors = np.zeros((0,) + t.shape + (2,), dtype=complex)
    return DressingEvaluation(chain.lams, vectors)


def dressed_u(chain: DressingChain, t, x) -> np.ndarray:
    return evaluate_chain(chain, t, x).dressed_u


def dressing_matrix(chain: DressingChain, t, x, lam, evaluation: DressingEvaluation | None = None):
    """``D[N](t, x, lam)``; ``lam`` broadcasts against the grid of ``(t, x)``."""
    ev = evaluation if evaluation is not None else evaluate_chain(chain, t, x)
    lam = np.asarray(lam, dtype=complex)
    shape = np.broadcast_shapes(ev.vectors.shape[1:-1], lam.shape)
    out = np.broadcast_to(IDENTITY, shape + (2, 2)).copy()
    lam_m = lam[..., None, None]
    for lam_k, proj in zip(ev.lams, ev.projectors):
        factor = (lam_m - np.conj(lam_k)) * IDENTITY + (np.conj(lam_k) - lam_k) * proj
        out = factor @ out
    return out


def dressing_coefficients(chain: DressingChain, t: float, x: float) -> np.ndarray:
    """Matrix coefficients of ``D[N]`` as a polynomial in ``lam``; index = power, shape (N+1, 2, 2)."""
    ev = evaluate_chain(chain, t, x)
    coeffs = [IDENTITY.copy()]
    for lam_k, proj in zip(ev.lams, ev.projectors):
        const = -np.conj(lam_k) * IDENTITY + (np.conj(lam_k) - lam_k) * proj
        new = [const @ coeffs[0]]
        for i in range(1, len(coeffs)):
            new.append(coeffs[i - 1] + const @ coeffs[i])
        new.append(coeffs[-1].copy())
        coeffs = new
    return np.array(coeffs)


def central_diff(f, z, h: float = DEFAULT_STEP, order: int = 1):
    """Fourth-order central difference of ``f`` at ``z`` (first or second derivative)."""
    if order == 1:
        return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)
    if order == 2:
        return (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)
    raise ValueError(f"unsupported derivative order {order}")


def richardson_diff(f, z, h: float = DEFAULT_STEP):
    """First derivative from the fourth-order stencil at ``h`` and ``h/2``, extrapolated to sixth order."""
    return (16 * central_diff(f, z, h / 2) - central_diff(f, z, h)) / 15


def dressed_u_x(chain: DressingChain, t, x, h: float = DEFAULT_STEP):
    return central_diff(lambda s: dressed_u(chain, t, s), np.asarray(x, dtype=float), h)


def dressed_u_xx(chain: DressingChain, t, x, h: float = DEFAULT_STEP):
    return central_diff(lambda s: dressed_u(chain, t, s), np.asarray(x, dtype=float), h, order=2)


def dressed_u_t(chain: DressingChain, t, x, h: float = DEFAULT_STEP):
    return central_diff(lambda s: dressed_u(chain, s, x), np.asarray(t, dtype=float), h)
