import numpy as np
import pytest

from nlsdress.boundary import (
    Dirichlet,
    New,
    Robin,
    boundary_matrix,
    boundary_residual,
    build_boundary_chain,
    defect_factorization_check,
    dressed_boundary_matrix_check,
    dressed_omega,
    make_boundary,
    mirror_datum,
    mirror_pairs,
    pairing_consistency,
)
from nlsdress.core import SolitonParameters
from nlsdress.darboux import SpectralDatum, dressed_u
from nlsdress.errors import DomainError
from nlsdress.presets import PRESETS
from nlsdress.verification import random_lambdas, track_peak

NEW = New(1.0, 2.0)


def test_new_matrix_at_zero_seed():
    lam = 0.3 + 0.7j
    den = (2 * lam - 2j) ** 2 - 1
    expected = np.diag([(4 * lam**2 + 8j * lam - 5) / den, (4 * lam**2 - 8j * lam - 5) / den])
    np.testing.assert_allclose(boundary_matrix(NEW, 0.0, lam), expected, rtol=1e-14)


@pytest.mark.parametrize("bc", [NEW, New(-0.7, -1.3), Robin(1.5), Robin(-2.0), Dirichlet()])
def test_inverse_property(bc, rng):
    beta = abs(getattr(bc, "beta", 1.0))
    for lam in random_lambdas(rng, 20):
        u = 0.0
        if isinstance(bc, New):
            u = beta * rng.uniform(0, 0.99) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        prod = boundary_matrix(bc, u, lam) @ boundary_matrix(bc, u, -lam)
        assert np.max(np.abs(prod - np.eye(2))) < 1e-12


def test_robin_zero_alpha_is_minus_sigma3():
    for lam in (0.5 + 1j, -2 + 0.1j, 3.0):
        np.testing.assert_allclose(boundary_matrix(Robin(0.0), 0.0, lam), np.diag([-1, 1]), atol=1e-15)


def test_dirichlet_matrix_is_identity():
    np.testing.assert_array_equal(boundary_matrix(Dirichlet(), 0.3, 1 + 1j), np.eye(2))


def test_omega_branch_violation():
    with pytest.raises(DomainError, match="Omega branch violation"):
        boundary_matrix(NEW, 2.1, 1 + 1j)
    # the tolerance admits rounding just past |u| = |beta|
    boundary_matrix(NEW, 2.0 + 1e-12, 1 + 1j)


@pytest.mark.parametrize("bc, lam", [(NEW, 0.5 + 1j), (NEW, -0.5 + 1j), (Robin(1.0), -0.5j)])
def test_prefactor_pole(bc, lam):
    with pytest.raises(DomainError, match="prefactor pole"):
        boundary_matrix(bc, 0.0, lam)


def test_defect_factorization_example():
    assert defect_factorization_check(NEW, 0.0, 1.0) < 1e-12


def test_defect_factorization_random(rng):
    for _ in range(20):
        bc = New(rng.uniform(0.2, 2) * rng.choice([-1, 1]), rng.uniform(0.2, 2) * rng.choice([-1, 1]))
        u = abs(bc.beta) * rng.uniform(0, 0.99) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        lam = random_lambdas(rng, 1, [bc.lambda0, -bc.lambda0, np.conj(bc.lambda0), -np.conj(bc.lambda0)])[0]
        assert defect_factorization_check(bc, u, lam) < 1e-12


def test_new_requires_nonzero_parameters():
    with pytest.raises(ValueError):
        New(0.0, 1.0)
    with pytest.raises(ValueError):
        New(1.0, 0.0)


def test_make_boundary():
    assert make_boundary("dirichlet") == Dirichlet()
    assert make_boundary("Robin", 2) == Robin(2.0)
    assert make_boundary("new", 1, 2) == NEW
    with pytest.raises(ValueError):
        make_boundary("robin")
    with pytest.raises(ValueError):
        make_boundary("neumann")


@pytest.mark.parametrize(
    "bc, ratio",
    [
        (Dirichlet(), 1.0),
        (Robin(1.0), (-7 + 4j) / 13),
        (NEW, (-13 + 16j) / 3),
    ],
)
def test_mirror_pairing_factor(bc, ratio):
    lam = 1 + 1j
    u, v = (1, 2) if isinstance(bc, Dirichlet) else (1, 1)
    pair = mirror_datum(bc, SpectralDatum(lam, u, v))
    assert pair.mirror.lam == -np.conj(lam)
    uh, vh = pair.hat_constants
    assert abs(uh / vh - ratio * u / v) < 1e-14
    ts = np.random.default_rng(3).uniform(-2, 2, 5)
    assert pairing_consistency(bc, pair, ts) < 1e-10


@pytest.mark.parametrize("lam", [1j, 2.0 + 0j, 0.5 + 1j, -0.5 + 1j])
def test_excluded_spectral_parameters(lam):
    with pytest.raises(DomainError):
        mirror_datum(NEW, SpectralDatum(lam, 1, 1))


def test_robin_excluded_pole():
    with pytest.raises(DomainError, match="excluded"):
        build_boundary_chain(Robin(-2.0), [SolitonParameters(0.0, 1.0)])


def test_duplicate_mirror_poles():
    with pytest.raises(DomainError, match="duplicate"):
        build_boundary_chain(Robin(1.0), [SolitonParameters(1, 1), SolitonParameters(-1, 1)])


@pytest.mark.parametrize("name, length", [("fig-dir2", 2), ("fig-new2", 2), ("fig-new4", 4), ("fig-new6", 6)])
def test_preset_chain_lengths(preset_chains, name, length):
    chain = preset_chains[name]
    assert len(chain) == length
    n = length // 2
    np.testing.assert_allclose(chain.lams[n:], -np.conj(chain.lams[:n]))


def test_pairing_consistency_on_presets(preset_chains):
    ts = np.random.default_rng(5).uniform(0, 10, 5)
    for name, p in PRESETS.items():
        for pair in mirror_pairs(preset_chains[name]):
            assert pairing_consistency(p.boundary, pair, ts) < 1e-10


def test_dirichlet_boundary_value(preset_chains):
    assert np.max(boundary_residual(Dirichlet(), preset_chains["fig-dir2"], np.array([0.0, 1.0, 5.0]))) < 1e-8


@pytest.mark.parametrize("name", ["fig-new2", "fig-new4", "fig-new6"])
def test_new_boundary_residual(preset_chains, name):
    assert np.max(boundary_residual(NEW, preset_chains[name], np.linspace(0, 10, 50))) < 1e-6


@pytest.mark.parametrize("alpha", [2.0, -0.5])
def test_robin_boundary_residual(alpha):
    bc = Robin(alpha)
    chain = build_boundary_chain(bc, [SolitonParameters(1, 1, 4, 0)])
    assert np.max(boundary_residual(bc, chain, np.linspace(0, 10, 50))) < 1e-6


def test_omega_is_continuous_branch(preset_chains):
    t = np.linspace(0, 10, 400)
    for name in ("fig-new2", "fig-new4", "fig-new6"):
        chain = preset_chains[name]
        om = dressed_omega(NEW, chain, t)
        u = dressed_u(chain, t, 0.0)
        assert np.max(np.abs(om**2 + np.abs(u) ** 2 - 4.0)) < 1e-10
        assert np.min(om) < 0 < np.max(om)


def test_principal_omega_branch_fails_after_sign_change(preset_chains):
    # Omega of the dressed solution passes through zero; the principal root breaks the condition there
    t = np.linspace(0, 10, 50)
    chain = preset_chains["fig-new2"]
    assert np.max(boundary_residual(NEW, chain, t, branch="principal")) > 1.0
    assert np.max(boundary_residual(NEW, chain, t, branch="continuous")) < 1e-6


def test_omega_real_along_solutions(preset_chains):
    t = np.linspace(0, 12, 2000)
    for name in ("fig-new2", "fig-new4", "fig-new6"):
        assert np.min(4.0 - np.abs(dressed_u(preset_chains[name], t, 0.0)) ** 2) >= -1e-9


def test_broken_pairing_violates_boundary():
    chain = build_boundary_chain(NEW, PRESETS["fig-new2"].solitons, ratio_scale=1.01)
    assert np.max(boundary_residual(NEW, chain, np.linspace(0, 10, 50))) > 1e-2


@pytest.mark.parametrize("name", ["fig-new2", "fig-new4", "fig-new6"])
@pytest.mark.parametrize("t", [0.0, 1.0, 2.7])
def test_new_structure(preset_chains, name, t):
    rep = dressed_boundary_matrix_check(NEW, preset_chains[name], t)
    assert rep.degree == 2
    assert rep.max_discrepancy() < 1e-8
    np.testing.assert_allclose(rep.coefficients[0], -(1 + 4) / 4 * np.eye(2), atol=1e-8)


def test_new_structure_negative_beta():
    bc = New(-0.7, -1.3)
    chain = build_boundary_chain(bc, [SolitonParameters(0.8, 0.6, 3, 0.5), SolitonParameters(-0.4, 0.9, 6, 1)])
    for t in (0.0, 1.5):
        assert dressed_boundary_matrix_check(bc, chain, t).max_discrepancy() < 1e-8


@pytest.mark.parametrize("alpha", [2.0, 1.0, -0.5])
def test_robin_structure(alpha):
    bc = Robin(alpha)
    chain = build_boundary_chain(bc, [SolitonParameters(1, 1, 4, 0), SolitonParameters(-0.5, 0.5, 7, 1)])
    rep = dressed_boundary_matrix_check(bc, chain, 0.0)
    assert rep.degree == 1
    assert rep.max_discrepancy() < 1e-10


def test_structure_check_rejects_dirichlet(preset_chains):
    with pytest.raises(ValueError):
        dressed_boundary_matrix_check(Dirichlet(), preset_chains["fig-dir2"], 0.0)


@pytest.mark.parametrize("name", ["fig-dir2", "fig-new2"])
def test_reflection_equal_amplitude_opposite_velocity(preset_chains, name):
    chain = preset_chains[name]
    incoming = [track_peak(chain, t, 0.0, 49.0) for t in (-6.0, -4.0)]
    outgoing = [track_peak(chain, t, 0.0, 49.0) for t in (4.0, 6.0)]
    for _, height in incoming + outgoing:
        assert abs(height - 2.0) < 1e-6
    assert abs((incoming[1][0] - incoming[0][0]) / 2 - (-4.0)) < 1e-6
    assert abs((outgoing[1][0] - outgoing[0][0]) / 2 - 4.0) < 1e-6


@pytest.mark.parametrize("name", ["fig-dir2", "fig-new2", "fig-new6"])
def test_decay_at_boundary(preset_chains, name):
    vals = [abs(dressed_u(preset_chains[name], t, 0.0)) for t in (20.0, 40.0, 80.0)]
    assert vals[-1] < 1e-3
    assert all(b < a or a < 1e-12 for a, b in zip(vals, vals[1:]))
