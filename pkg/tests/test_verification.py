import json
import math

import numpy as np
import pytest

from nlsdress.boundary import Robin, build_boundary_chain
from nlsdress.core import SolitonParameters
from nlsdress.darboux import DressingChain, SpectralDatum, dressed_u
from nlsdress.errors import DomainError
from nlsdress.presets import PRESETS, get_preset
from nlsdress.verification import (
    Grid,
    decay_ok,
    determinant_quotient_oracle,
    dressing_limits_check,
    full_report,
    pde_residual,
    pde_residual_sweep,
    random_lambdas,
)


def soliton_chain():
    lam = 1 + 1j
    return DressingChain([SpectralDatum(lam, 1, -2 * math.exp(10) / (lam - np.conj(lam)))])


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(0, 1, 1, 0, 1, 5)
    with pytest.raises(ValueError):
        Grid(1, 0, 5, 0, 1, 5)
    g = Grid(0, 1, 3, -1, 1, 5)
    tt, xx = g.mesh()
    assert tt.shape == (3, 5) and tt[1, 0] == 0.5 and xx[0, 1] == -0.5


def test_zero_chain_residual():
    assert pde_residual_sweep(DressingChain([]), Grid(0, 1, 5, 0, 1, 5)) == 0.0


def test_one_soliton_residual():
    assert pde_residual_sweep(soliton_chain(), Grid(0, 5, 30, 0, 15, 30)) < 1e-6


def test_two_pair_residual(preset_chains):
    assert pde_residual_sweep(preset_chains["fig-new4"], Grid(0, 6, 40, 0, 15, 40), 1e-3) < 1e-5


@pytest.mark.parametrize("grid, h", [(Grid(0, 1, 3, 0, 1, 3), 0.02), (Grid(0, 1, 3, 0, 60, 3), 1e-3)])
def test_sweep_guards(grid, h):
    with pytest.raises(DomainError):
        pde_residual_sweep(soliton_chain(), grid, h)


def test_residual_fourth_order(preset_chains):
    t, x = np.meshgrid(np.linspace(0, 2, 5), np.linspace(2, 8, 7))
    for chain in (soliton_chain(), preset_chains["fig-new2"]):
        coarse = np.max(pde_residual(chain, t, x, 0.08))
        fine = np.max(pde_residual(chain, t, x, 0.04))
        assert 12 <= coarse / fine <= 20


@pytest.mark.parametrize("datum", [SpectralDatum(1j, 1, 1), SpectralDatum(1 + 1j, 1, 3 - 2j)])
def test_dressing_limits(datum):
    assert dressing_limits_check(datum) < 1e-10


def test_dressing_limits_precondition():
    with pytest.raises(DomainError):
        dressing_limits_check(SpectralDatum(1j, 1, 0))


@pytest.mark.parametrize("lam, u0, v0", [(1j, 1, 1), (1 + 1j, 1, 3 - 2j), (-0.3 + 0.5j, 2j, 0.1)])
def test_quotient_oracle_single_pole(lam, u0, v0):
    chain = DressingChain([SpectralDatum(lam, u0, v0)])
    for t, x in [(0.0, 0.0), (0.4, -1.0), (-1.0, 2.0)]:
        assert abs(determinant_quotient_oracle(chain, t, x) - dressed_u(chain, t, x)) < 1e-12


def test_quotient_oracle_three_pairs(preset_chains, rng):
    chain = preset_chains["fig-new6"]
    for _ in range(10):
        t, x = rng.uniform(0, 8), rng.uniform(0, 25)
        u = complex(dressed_u(chain, t, x))
        if abs(u) > 1e-12:
            assert abs(determinant_quotient_oracle(chain, t, x) - u) / abs(u) < 1e-8


def test_quotient_oracle_empty_chain():
    assert determinant_quotient_oracle(DressingChain([]), 0.0, 0.0) == 0


def test_quotient_oracle_degenerate():
    chain = DressingChain([SpectralDatum(1j, 1, 1), SpectralDatum(-1j, -1, 1)])
    with pytest.raises(DomainError, match="singular"):
        determinant_quotient_oracle(chain, 0.3, 0.2)
    with pytest.raises(DomainError, match="duplicate"):
        DressingChain([SpectralDatum(1j, 1, 1), SpectralDatum(1j, 1, 2)])


def test_random_lambdas_respect_exclusions(rng):
    avoid = [1 + 1j, -0.5 - 1j]
    lams = random_lambdas(rng, 200, avoid)
    assert np.all((np.abs(lams) >= 0.5) & (np.abs(lams) <= 3))
    assert np.all(np.minimum(np.abs(lams.real), np.abs(lams.imag)) >= 0.05)
    assert all(np.min(np.abs(lams - p)) >= 0.1 for p in avoid)


@pytest.mark.parametrize(
    "samples, ok",
    [
        ([(20, 1e-3), (40, 1e-5), (80, 1e-8)], True),
        ([(20, 1e-3), (40, 1e-2), (80, 1e-8)], False),
        ([(20, 1e-14), (40, 3e-14), (80, 1e-15)], True),
        ([(20, 0.5), (40, 0.2), (80, 0.01)], False),
    ],
)
def test_decay_ok(samples, ok):
    assert decay_ok(samples) is ok


def test_report_dirichlet():
    p = get_preset("fig-dir2")
    rep = full_report(p.boundary, p.solitons, p.grid)
    assert rep.max_boundary_residual < 1e-8
    assert rep.omega_min is None
    assert rep.passed


def test_report_new_one_pair():
    p = get_preset("fig-new2")
    rep = full_report(p.boundary, p.solitons, p.grid)
    assert rep.passed
    assert rep.max_pde_residual < 1e-6
    assert rep.structural and max(rep.structural.values()) < 1e-8
    assert rep.omega_min > 0


def test_report_robin():
    rep = full_report(Robin(2.0), [SolitonParameters(1, 1, 4, 0)], Grid(0, 3, 30, 0, 15, 30))
    assert rep.passed, {k: c for k, c in rep.checks.items() if not c.passed}


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_report_presets_pass(name):
    p = PRESETS[name]
    rep = full_report(p.boundary, p.solitons, p.grid)
    assert rep.passed, {k: c for k, c in rep.checks.items() if not c.passed}
    assert all(math.isfinite(c.value) for c in rep.checks.values())
    assert rep.metadata["grid"] == p.grid.as_dict()


def test_breather_decay_uses_envelope():
    p = PRESETS["fig-new4"]
    rep = full_report(p.boundary, p.solitons, p.grid)
    t80 = rep.decay_samples[-1][1]
    assert t80 >= abs(dressed_u(build_boundary_chain(p.boundary, p.solitons), 80.0, 0.0))


def test_report_json_flat_and_deterministic():
    p = PRESETS["fig-new2"]
    a = full_report(p.boundary, p.solitons, p.grid, seed=7).to_json()
    b = full_report(p.boundary, p.solitons, p.grid, seed=7).to_json()
    assert a == b
    doc = json.loads(a)
    for entry in doc.values():
        assert set(entry) == {"value", "tolerance", "pass"}


def test_report_negative_control_fails():
    p = PRESETS["fig-new2"]
    rep = full_report(p.boundary, p.solitons, p.grid, ratio_scale=1.01)
    assert not rep.passed
    assert rep.max_boundary_residual > 1e-2
    assert not rep.checks["boundary_residual"].passed


def test_report_negative_control_leaves_omega_domain():
    p = PRESETS["fig-new4"]
    with pytest.raises(DomainError, match="Omega branch violation"):
        full_report(p.boundary, p.solitons, p.grid, ratio_scale=1.01)
