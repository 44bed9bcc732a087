"""Integrable boundary conditions at x = 0 and dressing chains that preserve them.

Three boundaries are supported:

* ``Dirichlet()``: ``u(t, 0) = 0``, boundary matrix the identity;
* ``Robin(alpha)``: ``u_x = alpha u``, boundary matrix ``G0``;
* ``New(alpha, beta)``: the defect-type condition

      u_x = i u_t / (2 Om) - u Om / 2 + u |u|^2 / (2 Om) - u alpha^2 / (2 Om),
      Om = sqrt(beta^2 - |u|^2),

  with the time-dependent boundary matrix ``K0``.

A boundary chain pairs every soliton pole ``lam`` with a mirror pole
``-conj(lam)`` whose constants are fixed by ``psihat(t, 0) = K0(lam) psi(t, 0)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import IDENTITY, SolitonParameters, vacuum_solution
from .darboux import (
    DEFAULT_STEP,
    DressingChain,
    SpectralDatum,
    dressed_u,
    dressing_matrix,
    evaluate_chain,
    richardson_diff,
)
from .errors import DomainError
from .scattering import soliton_to_weight

OMEGA_TOL = 1e-9
POLE_TOL = 1e-12


@dataclass(frozen=True)
class Dirichlet:
    kind = "dirichlet"

    def pairing_factor(self, lam: complex) -> complex:
        return 1.0 + 0j

    def matrix(self, u, lam):
        lam = np.asarray(lam, dtype=complex)
        shape = np.broadcast_shapes(lam.shape, np.shape(u))
        return np.broadcast_to(IDENTITY, shape + (2, 2)).copy()

    def excluded(self, lam: complex) -> bool:
        return False


@dataclass(frozen=True)
class Robin:
    alpha: float
    kind = "robin"

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")

    def pairing_factor(self, lam: complex) -> complex:
        a = self.alpha
        den = 1j * a + 2 * lam
        if abs(den) < POLE_TOL:
            raise DomainError("prefactor pole")
        return (1j * a - 2 * lam) / den

    def matrix(self, u, lam):
        lam = np.asarray(lam, dtype=complex)
        shape = np.broadcast_shapes(lam.shape, np.shape(u))
        lam = np.broadcast_to(lam, shape)
        den = 1j * self.alpha + 2 * lam
        if np.any(np.abs(den) < POLE_TOL):
            raise DomainError("prefactor pole")
        out = np.zeros(shape + (2, 2), dtype=complex)
        out[..., 0, 0] = (1j * self.alpha - 2 * lam) / den
        out[..., 1, 1] = 1.0
        return out

    def anchor(self) -> "BoundaryAnchor":
        # G0 numerator diag(i a - 2 lam, i a + 2 lam) annihilates e2 at lam = -i a/2
        return BoundaryAnchor(-0.5j * self.alpha, np.array([0, 1], dtype=complex))

    def excluded(self, lam: complex) -> bool:
        return abs(1j * self.alpha + 2 * lam) < POLE_TOL or abs(1j * self.alpha - 2 * lam) < POLE_TOL


@dataclass(frozen=True)
class New:
    alpha: float
    beta: float
    kind = "new"

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("the new boundary needs alpha, beta nonzero")

    @property
    def lambda0(self) -> complex:
        return -(self.alpha + 1j * self.beta) / 2

    def prefactor_den(self, lam):
        return (2 * lam - 1j * abs(self.beta)) ** 2 - self.alpha**2

    def pairing_factor(self, lam: complex) -> complex:
        b = abs(self.beta)
        den = self.prefactor_den(lam)
        if abs(den) < POLE_TOL:
            raise DomainError("prefactor pole")
        return ((2 * lam + 1j * b) ** 2 - self.alpha**2) / den

    def omega(self, u):
        return omega(self.beta, u)

    def numerator(self, u, lam):
        """``K0`` times ``(2 lam - i|beta|)^2 - alpha^2``; a quadratic in ``lam`` with leading term ``4 I``."""
        lam = np.asarray(lam, dtype=complex)
        u = np.asarray(u, dtype=complex)
        shape = np.broadcast_shapes(lam.shape, u.shape)
        lam, u = np.broadcast_to(lam, shape), np.broadcast_to(u, shape)
        om = self.omega(u)
        c = self.alpha**2 + self.beta**2
        out = np.empty(shape + (2, 2), dtype=complex)
        out[..., 0, 0] = 4 * lam**2 + 4j * lam * om - c
        out[..., 0, 1] = 4j * lam * u
        out[..., 1, 0] = 4j * lam * np.conj(u)
        out[..., 1, 1] = 4 * lam**2 - 4j * lam * om - c
        return out

    def matrix(self, u, lam):
        lam = np.asarray(lam, dtype=complex)
        den = self.prefactor_den(lam)
        if np.any(np.abs(den) < POLE_TOL):
            raise DomainError("prefactor pole")
        return self.numerator(u, lam) / np.asarray(den)[..., None, None]

    def anchor(self) -> "BoundaryAnchor":
        kernel = [1, 0] if self.beta > 0 else [0, 1]
        return BoundaryAnchor(self.lambda0, np.array(kernel, dtype=complex))

    def excluded(self, lam: complex) -> bool:
        l0 = self.lambda0
        return any(abs(lam - z) < 1e-9 for z in (l0, l0.conjugate(), -l0, -l0.conjugate()))


def omega(beta: float, u):
    """Principal root of ``beta^2 - |u|^2``; errors on the complex branch."""
    gap = beta**2 - np.abs(u) ** 2
    if np.any(gap < -OMEGA_TOL):
        raise DomainError(f"Omega branch violation: beta^2 - |u|^2 = {np.min(gap):.3e}")
    return np.sqrt(np.maximum(gap, 0.0))


BoundaryCondition = Union[Dirichlet, Robin, New]


@dataclass(frozen=True)
class BoundaryAnchor:
    """Spectral parameter of the boundary matrix's zero and its kernel vector at the zero seed."""

    lambda0: complex
    seed_kernel: np.ndarray


@dataclass(frozen=True)
class MirrorPair:
    """A soliton datum and its mirror, stored as ``(-conj(lam), (-conj(vhat), conj(uhat)))``."""

    physical: SpectralDatum
    mirror: SpectralDatum

    @property
    def hat_constants(self) -> tuple[complex, complex]:
        """Constants ``(uhat, vhat)`` of the paired solution at ``-lam``."""
        return self.mirror.v0.conjugate(), -self.mirror.u0.conjugate()

    def hat_solution(self, t, x):
        uh, vh = self.hat_constants
        return vacuum_solution(-self.physical.lam, uh, vh, t, x)


def make_boundary(kind: str, alpha: float | None = None, beta: float | None = None) -> BoundaryCondition:
    kind = kind.lower()
    if kind == "dirichlet":
        return Dirichlet()
    if kind == "robin":
        if alpha is None:
            raise ValueError("robin boundary needs alpha")
        return Robin(float(alpha))
    if kind == "new":
        if alpha is None or beta is None:
            raise ValueError("new boundary needs alpha and beta")
        return New(float(alpha), float(beta))
    raise ValueError(f"unknown boundary kind {kind!r}")


def boundary_matrix(bc: BoundaryCondition, u_at_0, lam):
    """``K0`` / ``G0`` / identity at boundary value ``u_at_0``; ``M(lam) M(-lam) = I``."""
    return bc.matrix(u_at_0, lam)


def defect_matrix(alpha: float, beta: float, u, lam):
    """Defect matrix ``G_{0,alpha}`` (upper sign choice, ``+i Omega`` in the (1,1) entry)."""
    om = omega(beta, u)
    lam = complex(lam)
    a = np.array([[alpha + 1j * om, 1j * u], [1j * np.conj(u), alpha - 1j * om]], dtype=complex)
    return IDENTITY + a / (2 * lam)


def defect_factorization_check(bc: New, u_at_0, lam) -> float:
    """Max-norm discrepancy of ``((2 lam - i|beta|)^2 - alpha^2) K0 = 4 lam^2 G_a G_-a``
    together with the commutator of the two defect matrices."""
    lam = complex(lam)
    k0 = bc.matrix(u_at_0, lam)
    ga = defect_matrix(bc.alpha, bc.beta, u_at_0, lam)
    gb = defect_matrix(-bc.alpha, bc.beta, u_at_0, lam)
    lhs = bc.prefactor_den(lam) * k0
    rhs = 4 * lam**2 * (ga @ gb)
    return float(max(np.max(np.abs(lhs - rhs)), np.max(np.abs(ga @ gb - gb @ ga))))


def _check_physical(bc: BoundaryCondition, lam: complex):
    if lam.real == 0 or lam.imag == 0:
        raise DomainError(f"excluded spectral parameter {lam}: on the real or imaginary axis")
    if bc.excluded(lam):
        raise DomainError(f"excluded spectral parameter {lam}: boundary pole set")


def mirror_datum(bc: BoundaryCondition, physical: SpectralDatum, ratio_scale: complex = 1.0) -> MirrorPair:
    """Pair ``physical`` with its mirror datum.

    The paired solution at ``-lam`` has constants ``(uhat, vhat) = (r u, v)`` with
    ``r`` the boundary pairing factor, which makes ``psihat(t, 0) = K0(lam) psi(t, 0)``
    exactly.  ``ratio_scale`` multiplies ``r`` (used only as a negative control).
    """
    lam = physical.lam
    _check_physical(bc, lam)
    r = bc.pairing_factor(lam) * ratio_scale
    uh, vh = r * physical.u0, physical.v0
    if uh == 0 and vh == 0:
        raise DomainError("degenerate mirror constants")
    mirror = SpectralDatum(-lam.conjugate(), -vh.conjugate(), uh.conjugate())
    return MirrorPair(physical, mirror)


def build_boundary_chain(
    bc: BoundaryCondition,
    solitons: Sequence[SolitonParameters],
    ratio_scale: complex = 1.0,
) -> DressingChain:
    """Chain ``[lam_1..lam_N, -conj(lam_1)..-conj(lam_N)]`` preserving ``bc``.

    ``(x1, phi1)`` of each soliton fix the weight of its pole in the full
    2N-pole scattering data, ``C_j = 2 eta_j exp(2 eta_j x_j + i phi_j)``.
    """
    lams = [s.lam for s in solitons]
    for lam in lams:
        _check_physical(bc, lam)
    poles = lams + [-lam.conjugate() for lam in lams]
    for i, a in enumerate(poles):
        for b in poles[:i]:
            if abs(a - b) <= 1e-12 * max(1.0, abs(a)):
                raise DomainError(f"duplicate spectral parameter {a}")
    physical = []
    for j, s in enumerate(solitons):
        lam = lams[j]
        num = np.prod([lam - p.conjugate() for p in poles])
        den = np.prod([lam - p for k, p in enumerate(poles) if k != j])
        ratio = -soliton_to_weight(s.eta, s.x1, s.phi1) * den / num  # v_j / u_j
        physical.append(SpectralDatum(lam, 1.0, complex(ratio)))
    mirrors = [mirror_datum(bc, d, ratio_scale).mirror for d in physical]
    return DressingChain(physical + mirrors)


def mirror_pairs(chain: DressingChain) -> list[MirrorPair]:
    n = len(chain) // 2
    return [MirrorPair(chain.data[j], chain.data[n + j]) for j in range(n)]


def dressed_omega(bc: New, chain: DressingChain, t):
    """``Omega`` of the dressed solution at ``x = 0`` on its continuous branch.

    Read from the dressed boundary matrix, ``K1_11 = i|beta| - 2 (Sigma_1)_11 = i Omega``.
    It equals ``+-sqrt(beta^2 - |u(t,0)|^2)`` and changes sign where ``|u(t,0)|``
    reaches ``|beta|``.
    """
    sigma1 = evaluate_chain(chain, t, 0.0).sigma1
    return abs(bc.beta) - 2 * sigma1[..., 0, 0].imag


def boundary_residual(
    bc: BoundaryCondition, chain: DressingChain, t, h: float = DEFAULT_STEP, branch: str = "continuous"
):
    """Pointwise ``|LHS - RHS|`` of the boundary condition at ``x = 0``.

    For the new boundary ``branch`` selects ``Omega``: ``"continuous"`` takes its sign
    from :func:`dressed_omega`, ``"principal"`` uses the nonnegative root throughout.
    Derivatives are Richardson-extrapolated central differences, since the residual
    is amplified by ``1/|Omega|`` near sign changes of ``Omega``.
    """
    t = np.asarray(t, dtype=float)
    u = dressed_u(chain, t, 0.0)
    if isinstance(bc, Dirichlet):
        return np.abs(u)
    ux = richardson_diff(lambda s: dressed_u(chain, t, s), np.zeros_like(t), h)
    if isinstance(bc, Robin):
        return np.abs(ux - bc.alpha * u)
    ut = richardson_diff(lambda s: dressed_u(chain, s, 0.0), t, h)
    om = bc.omega(u)
    if branch == "continuous":
        om = np.where(dressed_omega(bc, chain, t) < 0, -om, om)
    elif branch != "principal":
        raise ValueError(f"unknown Omega branch {branch!r}")
    rhs = (1j * ut - u * om**2 + u * np.abs(u) ** 2 - u * bc.alpha**2) / (2 * om)
    return np.abs(ux - rhs)


def sample_lambdas(n: int, avoid: Sequence[complex], radius: float = 2.0, margin: float = 0.1) -> np.ndarray:
    """``n`` points on a circle, off the real and imaginary axes and away from ``avoid``."""
    out = []
    offset = 0.0
    while len(out) < n:
        offset += 0.37
        angles = offset + 2 * np.pi * np.arange(4 * n) / (4 * n)
        out = []
        for a in angles:
            z = radius * np.exp(1j * a)
            if min(abs(z.real), abs(z.imag)) < 0.05:
                continue
            if any(abs(z - p) < margin for p in avoid):
                continue
            out.append(z)
            if len(out) == n:
                break
        if offset > 10:
            raise DomainError("could not place lambda samples away from poles")
    return np.array(out)


@dataclass
class BoundaryStructureReport:
    degree: int
    coefficients: np.ndarray  # index = power of lam
    discrepancies: dict
    omega_sign: float = 1.0

    def max_discrepancy(self) -> float:
        return max(self.discrepancies.values())


def _conjugated_boundary(bc, chain, t, lams):
    ev = evaluate_chain(chain, t, 0.0)
    u0 = 0.0  # zero seed
    if isinstance(bc, New):
        k0 = bc.numerator(u0, lams) / 4
    else:
        k0 = np.zeros(lams.shape + (2, 2), dtype=complex)
        k0[..., 0, 0] = 1j * bc.alpha - 2 * lams
        k0[..., 1, 1] = 1j * bc.alpha + 2 * lams
    d_plus = dressing_matrix(chain, t, 0.0, lams, ev)
    d_minus = dressing_matrix(chain, t, 0.0, -lams, ev)
    return d_minus @ k0 @ np.linalg.inv(d_plus), ev


def dressed_boundary_matrix_check(
    bc: BoundaryCondition, chain: DressingChain, t: float, lambda_samples=None, n_samples: int = 12
) -> BoundaryStructureReport:
    """Fit ``K_N(lam) = D(-lam) K0(lam) D(lam)^-1`` at ``x = 0`` by a matrix polynomial
    and compare its coefficients with the boundary matrix of the dressed solution."""
    if isinstance(bc, Dirichlet):
        raise ValueError("structure check applies to the Robin and new boundaries")
    degree = 2 if isinstance(bc, New) else 1
    fit_degree = degree + 2
    if lambda_samples is None:
        avoid = list(chain.lams) + list(np.conj(chain.lams))
        if isinstance(bc, New):
            b = abs(bc.beta)
            avoid += [(1j * b + bc.alpha) / 2, (1j * b - bc.alpha) / 2]
        lambda_samples = sample_lambdas(max(n_samples, 2 * (degree + 2)), avoid)
    lams = np.asarray(lambda_samples, dtype=complex)
    m, ev = _conjugated_boundary(bc, chain, t, lams)
    if not np.all(np.isfinite(m)):
        raise DomainError("singular dressing matrix at a lambda sample")
    vander = np.vander(lams, fit_degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vander, m.reshape(len(lams), 4), rcond=None)
    coef = coef.reshape(fit_degree + 1, 2, 2)
    u = complex(ev.dressed_u)
    disc = {"higher_order": float(np.max(np.abs(coef[degree + 1 :])))}
    if isinstance(bc, New):
        c = (bc.alpha**2 + bc.beta**2) / 4
        om = float(bc.omega(u))
        disc["leading"] = float(np.max(np.abs(coef[2] - IDENTITY)))
        disc["constant"] = float(np.max(np.abs(coef[0] + c * IDENTITY)))
        disc["k1_offdiag"] = float(max(abs(coef[1][0, 1] - 1j * u), abs(coef[1][1, 0] - 1j * np.conj(u))))
        sign = 1.0 if coef[1][0, 0].imag >= 0 else -1.0
        disc["k1_diag"] = float(max(abs(coef[1][0, 0] - 1j * sign * om), abs(coef[1][1, 1] + 1j * sign * om)))
        target = lams**4 - (bc.alpha**2 - bc.beta**2) / 2 * lams**2 + (bc.alpha**2 + bc.beta**2) ** 2 / 16
        disc["determinant"] = float(np.max(np.abs(np.linalg.det(m) - target)))
        anchor = bc.anchor()
        kernel = dressing_matrix(chain, t, 0.0, anchor.lambda0, ev) @ anchor.seed_kernel
        kn = sum(coef[p] * anchor.lambda0**p for p in range(degree + 1))
        disc["kernel_vector"] = float(np.linalg.norm(kn @ kernel) / np.linalg.norm(kernel))
    else:
        const = coef[0]
        disc["constant_offdiag"] = float(max(abs(const[0, 1]), abs(const[1, 0])))
        # either global sign of i*alpha*I is accepted
        disc["constant_diag"] = float(
            min(
                max(abs(const[0, 0] - 1j * bc.alpha), abs(const[1, 1] - 1j * bc.alpha)),
                max(abs(const[0, 0] + 1j * bc.alpha), abs(const[1, 1] + 1j * bc.alpha)),
            )
        )
        lin = coef[1]
        disc["linear"] = float(
            min(np.max(np.abs(lin - 2 * np.diag([1, -1]))), np.max(np.abs(lin + 2 * np.diag([1, -1]))))
        )
        disc["determinant"] = float(np.max(np.abs(np.linalg.det(m) - (-4 * lams**2 - bc.alpha**2))))
    sign = 1.0
    if isinstance(bc, New):
        sign = 1.0 if coef[1][0, 0].imag >= 0 else -1.0
    return BoundaryStructureReport(degree, coef, disc, sign)


def pairing_consistency(bc: BoundaryCondition, pair: MirrorPair, t) -> float:
    """Max over ``t`` of ``|psihat(t,0) - K0(lam) psi(t,0)| / |psi(t,0)|``."""
    t = np.asarray(t, dtype=float)
    psi = pair.physical.solution(t, 0.0)
    k0 = bc.matrix(0.0, pair.physical.lam)
    lhs = pair.hat_solution(t, 0.0)
    rhs = psi @ np.swapaxes(k0, -1, -2)
    return float(np.max(np.linalg.norm(lhs - rhs, axis=-1) / np.linalg.norm(psi, axis=-1)))
