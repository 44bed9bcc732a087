"""Reflectionless scattering data of dressed solutions and the mirror-soliton relations."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ScatteringData:
    """Poles ``lam_j`` in the upper half-plane with weights ``C_j``.

    ``a11`` is the Blaschke product over the poles.  The reflection coefficient
    is identically zero; ``rho_factors`` records the poles whose
    ``(lam - conj(l0)) / (lam - l0)`` factor would multiply a nonzero ``rho``.
    """

    poles: tuple[complex, ...] = ()
    weights: tuple[complex, ...] = ()
    reflectionless: bool = True
    rho_factors: tuple[complex, ...] = field(default=())

    def __post_init__(self):
        if len(self.poles) != len(self.weights):
            raise ValueError("poles and weights differ in length")

    def a11(self, lam):
        lam = np.asarray(lam, dtype=complex)
        out = np.ones_like(lam)
        for p in self.poles:
            out = out * (lam - p) / (lam - np.conj(p))
        return out

    def a12(self, lam):
        return np.zeros_like(np.asarray(lam, dtype=complex))

    def rho(self, lam):
        return np.zeros_like(np.asarray(lam, dtype=complex))


def add_pole(data: ScatteringData, lam0: complex, u0: complex, v0: complex) -> ScatteringData:
    """Scattering data after one Darboux step with ``lam0`` and constants ``(u0, v0)``."""
    lam0 = complex(lam0)
    if lam0.imag <= 0:
        raise DomainError(f"pole {lam0} not in upper half-plane")
    if u0 == 0 or v0 == 0:
        raise DomainError("add_pole needs both vacuum constants nonzero")
    for p in data.poles:
        if abs(p - lam0) <= 1e-12 * max(1.0, abs(p)):
            raise DomainError(f"pole collision at {lam0}")
    weights = [(p - lam0.conjugate()) / (p - lam0) * c for p, c in zip(data.poles, data.weights)]
    c0 = -(v0 / u0) * (lam0 - lam0.conjugate()) / complex(data.a11(lam0))
    return ScatteringData(
        poles=data.poles + (lam0,),
        weights=tuple(weights) + (c0,),
        reflectionless=data.reflectionless,
        rho_factors=data.rho_factors + (lam0,),
    )


def pure_soliton_data(chain) -> ScatteringData:
    """Closed-form pole weights of a chain dressed from the zero seed."""
    lams = [d.lam for d in chain.data]
    for lam in lams:
        if lam.imag <= 0:
            raise DomainError(f"pole {lam} not in upper half-plane")
    weights = []
    for j, d in enumerate(chain.data):
        if d.u0 == 0 or d.v0 == 0:
            raise DomainError("pure soliton weights need both vacuum constants nonzero")
        num = np.prod([d.lam - np.conj(lk) for lk in lams])
        den = np.prod([d.lam - lk for k, lk in enumerate(lams) if k != j])
        weights.append(complex(-(d.v0 / d.u0) * num / den))
    return ScatteringData(poles=tuple(lams), weights=tuple(weights), rho_factors=tuple(lams))


def soliton_to_weight(eta: float, x1: float, phi1: float) -> complex:
    return 2 * eta * cmath.exp(2 * eta * x1 + 1j * phi1)


def weight_to_soliton(c: complex, eta: float) -> tuple[float, float]:
    """Position and phase ``(x1, phi1)`` of weight ``c``; ``phi1`` in ``(-pi, pi]``."""
    if c == 0:
        raise DomainError("zero weight")
    if eta <= 0:
        raise ValueError("eta must be positive")
    x1 = (math.log(abs(c)) - math.log(2 * eta)) / (2 * eta)
    return x1, wrap_phase(cmath.phase(c))


def wrap_phase(phi: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    out = math.remainder(phi, 2 * math.pi)
    return math.pi if out <= -math.pi else out


@dataclass(frozen=True)
class MirrorRelation:
    x_sum: float
    phi_diff: float
    weight_product: complex


def _boundary_terms(bc, xi: float, eta: float) -> tuple[float, float]:
    """Boundary contributions to ``x_j + xhat_j`` and ``phi_j - phihat_j``."""
    kind = getattr(bc, "kind", None)
    if kind == "new":
        a2, b = bc.alpha**2, abs(bc.beta)
        re_p, im_p = 4 * xi**2 - a2 - (2 * eta + b) ** 2, 4 * xi * (2 * eta + b)
        re_m, im_m = 4 * xi**2 - a2 - (2 * eta - b) ** 2, 4 * xi * (2 * eta - b)
        x_term = math.log((re_p**2 + im_p**2) / (re_m**2 + im_m**2)) / (4 * eta)
        phi_term = cmath.phase(complex(re_p, im_p) / complex(re_m, im_m)) + math.pi
        return x_term, phi_term
    if kind == "robin":
        a = bc.alpha
        x_term = math.log((4 * xi**2 + (a - 2 * eta) ** 2) / (4 * xi**2 + (a + 2 * eta) ** 2)) / (4 * eta)
        phi_term = cmath.phase(complex(2 * xi, 2 * eta - a) / complex(2 * xi, 2 * eta + a))
        return x_term, phi_term
    if kind == "dirichlet":
        return 0.0, math.pi
    raise ValueError(f"unsupported boundary {bc!r}")


def _interaction_terms(solitons, j: int) -> tuple[float, float, complex]:
    """Primed sums/product over ``k != j`` for position, phase and weight product."""
    sj = solitons[j]
    lj = complex(sj.xi, sj.eta)
    x_term = phi_term = 0.0
    bracket = 1.0 + 0j
    for k, sk in enumerate(solitons):
        if k == j:
            continue
        dxm, dxp = sj.xi - sk.xi, sj.xi + sk.xi
        dem, dep = sj.eta - sk.eta, sj.eta + sk.eta
        ratio = (dxm**2 + dem**2) * (dxp**2 + dem**2) / ((dxp**2 + dep**2) * (dxm**2 + dep**2))
        x_term -= math.log(ratio) / (2 * sj.eta)
        # the bracket enters the weight product squared, so its phase counts twice
        phi_term -= 2 * cmath.phase(complex(dxm, dem) * complex(dxp, dem) / (complex(dxp, dep) * complex(dxm, dep)))
        lk = complex(sk.xi, sk.eta)
        bracket *= (lj - lk.conjugate()) * (lj + lk) / ((lj - lk) * (lj + lk.conjugate()))
    return x_term, phi_term, bracket


def mirror_relations(bc, solitons) -> list[MirrorRelation]:
    """Predicted ``x_j + xhat_j``, ``phi_j - phihat_j`` (mod 2 pi) and ``C_j conj(Chat_j)``.

    Depends only on the spectral parameters and the boundary, not on the
    solitons' positions or phases.
    """
    out = []
    for j, s in enumerate(solitons):
        if s.xi == 0:
            raise DomainError("mirror relations need xi != 0")
        lam = complex(s.xi, s.eta)
        bx, bphi = _boundary_terms(bc, s.xi, s.eta)
        ix, iphi, bracket = _interaction_terms(solitons, j)
        x_sum = math.log(1 + (s.eta / s.xi) ** 2) / (2 * s.eta) + bx + ix
        phi_diff = wrap_phase(2 * cmath.phase(lam) + bphi + iphi)
        product = -4 * lam**2 * bc.pairing_factor(lam) * (2 * s.eta) ** 2 / (2 * s.xi) ** 2 * bracket**2
        out.append(MirrorRelation(x_sum, phi_diff, complex(product)))
    return out


def extracted_relations(chain, n_physical: int) -> list[MirrorRelation]:
    """Read the mirror relations off the weights of a ``[physical..., mirror...]`` chain."""
    data = pure_soliton_data(chain)
    out = []
    for j in range(n_physical):
        eta = data.poles[j].imag
        c, chat = data.weights[j], data.weights[n_physical + j]
        x, phi = weight_to_soliton(c, eta)
        xh, phih = weight_to_soliton(chat, eta)
        out.append(MirrorRelation(x + xh, wrap_phase(phi - phih), c * chat.conjugate()))
    return out
