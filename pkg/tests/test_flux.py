import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from chainflux.errors import InadmissibleCase, IsingPoint, NotGaugeInvariant, QuadratureNotConverged
from chainflux.fermi import FermiSpec
from chainflux.flux import (
    entropy_lower_bound,
    fermi_dirac_c_min,
    flux_sweep,
    h_norm,
    heat_flux,
    heat_flux_gauge,
    heat_flux_xy,
    kink_points,
    mu_identity_check,
    refined_value,
)
from chainflux.model import ModelSpec, symbol_algebra
from chainflux.spectral import eigenvalue_functions
from chainflux import fermi

from conftest import GOLDEN, grid, models, random_admissible, xy

SUZUKI = ModelSpec(nu=2, c2=[0.3, 0.2], c3_0=0.4, c3=[0.5, 0.15], beta_L=1, beta_R=2)
FULLRANGE = ModelSpec(nu=1, c0=[0.2], c1=[0.3], c2=[0.25], c3_0=0.5, c3=[0.4], beta_L=1, beta_R=2)
CASE3 = ModelSpec(nu=1, c0=[1], beta_L=1, beta_R=2)


def test_equal_betas_no_flux():
    rep = heat_flux(xy(0.3, 0.5, 1, 1))
    assert abs(rep.J) <= 1e-10 and rep.sigma == 0


def test_xy_matches_closed_form():
    rep = heat_flux(xy(0.3, 0.5))
    assert rep.J == pytest.approx(heat_flux_xy(0.3, 0.5, 1, 2), abs=1e-10)
    assert rep.closed_form_J == pytest.approx(rep.J, abs=1e-10)


@pytest.mark.parametrize("name,model", [("xy", xy(0.3, 0.5)), ("suzuki2", SUZUKI),
                                        ("fullrange1", FULLRANGE), ("case3", CASE3)])
def test_golden_trapezoid_values(name, model):
    assert heat_flux(model).J == pytest.approx(GOLDEN["flux"][name], abs=1e-9)


def test_xy_closed_form_golden():
    assert heat_flux_xy(0.3, 0.5, 1, 2) == pytest.approx(GOLDEN["xy_closed"], abs=1e-9)


def test_closed_form_basic_properties():
    assert heat_flux_xy(0.3, 0.5, 1.5, 1.5) == 0
    assert heat_flux_xy(0.3, 0.5, 1, 2) > 0


@pytest.mark.parametrize("gamma", [0.5, -0.5])
def test_ising_point_rejected(gamma):
    with pytest.raises(IsingPoint):
        heat_flux_xy(gamma, 0.0, 1, 2)


@pytest.mark.parametrize("model", [xy(0.3, 0.5), SUZUKI])
def test_gauge_path_agrees(model):
    assert heat_flux_gauge(model).J == pytest.approx(heat_flux(model).J, abs=1e-10)


def test_gauge_path_equal_betas():
    assert abs(heat_flux_gauge(SUZUKI.with_betas(2, 2)).J) <= 1e-12


def test_gauge_path_needs_vanishing_u0():
    with pytest.raises(NotGaugeInvariant):
        heat_flux_gauge(FULLRANGE)


@pytest.mark.parametrize("model", [xy(F(1, 2), 0), ModelSpec(nu=1, c0=[F(1, 2)], c1=[F(3, 10)], c2=[F(2, 5)])])
def test_inadmissible_cases(model):
    with pytest.raises(InadmissibleCase):
        heat_flux(model)
    with pytest.raises(InadmissibleCase):
        entropy_lower_bound(model, 0.1)


def test_sigma_is_exact_product():
    for m in (xy(0.3, 0.5), SUZUKI, FULLRANGE, CASE3):
        rep = heat_flux(m)
        assert rep.sigma == (m.beta_R - m.beta_L) * rep.J
        assert rep.quad_error <= 1e-10


def test_unreachable_tolerance_reported():
    with pytest.raises(QuadratureNotConverged):
        heat_flux(SUZUKI, quad_tol=1e-30)


@given(models(max_nu=3, admissible=True))
def test_swap_antisymmetry(m):
    a = heat_flux(m)
    b = heat_flux(m.with_betas(m.beta_R, m.beta_L))
    assert b.J == pytest.approx(-a.J, abs=1e-12)
    assert b.sigma == pytest.approx(a.sigma, abs=1e-12)


@given(models(max_nu=3, admissible=True))
def test_positive_flux_fermi_dirac(m):
    assert heat_flux(m).J > 0


def test_positive_flux_custom_monotone(rng):
    for _ in range(5):
        m = random_admissible(rng, fermi=FermiSpec.tanh_scale(0.8))
        assert heat_flux(m).J > 0


@given(models(max_nu=3, admissible=True))
def test_integrand_bounded(m):
    b = eigenvalue_functions(m)
    a = symbol_algebra(m)
    k = grid(257) + 1e-3
    e = b.e_plus(k)
    de = np.nan_to_num(b.de_plus(k))
    kern = fermi.delta_kernel(m.fermi, m.beta_L, m.beta_R, e)
    bound = h_norm(m) * (a.u0p.to_float().norm1() + sum(p.to_float().norm1() for p in a.up))
    assert np.all(np.abs(e * de * kern) <= bound + 1e-12)


@given(models(max_nu=3, admissible=True))
def test_refinement_within_error(m):
    rep = heat_flux(m)
    assert abs(refined_value(m, rep) - rep.J) <= rep.quad_error


def test_kinks_cover_zeros_of_band_slope():
    m = SUZUKI
    a = symbol_algebra(m)
    b = eigenvalue_functions(m)
    k = np.linspace(-math.pi, math.pi, 20001)
    s = np.sign(np.nan_to_num(b.de_plus(k)))
    flips = k[1:][s[1:] * s[:-1] < 0]
    kinks = np.array(kink_points(a))
    for x in flips:
        assert np.min(np.abs(kinks - x)) < 1e-3


def test_entropy_bound_zero_delta():
    m = xy(0.3, 0.5, 1.5, 1.5)
    assert entropy_lower_bound(m, 0.1) == 0 and heat_flux(m).sigma == 0


def test_entropy_bound_holds_xy():
    m = xy(0.3, 0.5)
    assert heat_flux(m).sigma >= entropy_lower_bound(m, fermi_dirac_c_min(m)) > 0


def test_entropy_bound_scales_with_delta_squared():
    m1, m2 = xy(0.3, 0.5, 1.25, 1.75), xy(0.3, 0.5, 1.0, 2.0)
    assert entropy_lower_bound(m2, 0.05) == pytest.approx(4 * entropy_lower_bound(m1, 0.05), rel=1e-12)


def test_mu_identities_trivial_model():
    assert mu_identity_check(ModelSpec(nu=2, c3_0=1)) == (0.0, 0.0)


def test_mu_identities_xy():
    assert max(mu_identity_check(xy(0.3, 0.5))) <= 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_mu_identities_random_range3(seed):
    m = random_admissible(np.random.default_rng(seed), nu=3, zero_prob=0.0)
    assert max(mu_identity_check(m)) <= 1e-11


def test_sweep_single_point():
    rows = flux_sweep(SUZUKI, [(1, 2)])
    assert len(rows) == 1 and rows[0].report.J == heat_flux(SUZUKI).J


def test_sweep_diagonal_zero():
    rows = flux_sweep(SUZUKI, [(b, b) for b in (0.5, 1, 2, 3)])
    assert all(abs(r.report.J) <= 1e-12 for r in rows)


def test_sweep_monotone_in_beta_R():
    rows = flux_sweep(xy(0.3, 0.5), [(1, b) for b in np.linspace(1, 3, 21)])
    js = [r.report.J for r in rows]
    assert all(y >= x for x, y in zip(js, js[1:]))


def test_sweep_over_models_reports_inadmissible_rows():
    rows = flux_sweep(SUZUKI, models=[xy(0.3, 0.5), xy(F(1, 2), 0)])
    assert rows[0].report is not None
    assert rows[1].report is None and "Case 1" in rows[1].error


def test_conical_zero_of_u_with_dispersive_u0():
    # u vanishes at k = +-pi/2 while u0 does not: e+ has a corner there
    m = ModelSpec(nu=2, c0=[F(7, 10), F(9, 20)], c1=[0, 0], c2=[0, F(1, 10)], c3_0=F(-9, 10),
                  c3=[F(-3, 5), F(-9, 20)], beta_L=0.25, beta_R=1.9)
    b = eigenvalue_functions(m)
    k = np.array([math.pi / 2])
    assert b.abs_u(k)[0] < 1e-15
    rep = heat_flux(m)
    assert rep.J > 0 and rep.subinterval_count < 1000
    # midpoint grid: the jumps of e+' at +-pi/2 fall on cell boundaries
    kk = grid(1_000_000) + math.pi / 1_000_000
    e, de = b.e_plus(kk), np.nan_to_num(b.de_plus(kk))
    delta = fermi.eval(FermiSpec.fermi_dirac(), 1.9 * e) - fermi.eval(FermiSpec.fermi_dirac(), 0.25 * e)
    assert rep.J == pytest.approx(0.5 * np.mean(e * np.abs(de) * delta), abs=1e-9)
