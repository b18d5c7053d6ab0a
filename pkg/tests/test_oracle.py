import numpy as np
import pytest
from fractions import Fraction

from chainflux import config
from chainflux.errors import ConfigTooSmall, EigenNotConverged, NonCommuting, WindowTooShort
from chainflux.fermi import FermiSpec
from chainflux.model import ModelSpec
from chainflux.oracle import (LEFT, RIGHT, SAMPLE, LatticeConfig, LatticeOperator, Propagator, build_decoupled,
                              build_hamiltonian, eigh, evolved_two_point, flux_observable, gamma, gamma_vector,
                              initial_two_point, instantaneous_flux, max_group_velocity, ness_flux,
                              transit_guard, two_point_value)
from chainflux.pfaffian import quasifree_correlator

from conftest import GOLDEN, random_model, xy
from fock import Fock

XY = config.fixture("xy")


def setup(m, N, x_L=0, x_R=0, **kw):
    cfg = LatticeConfig.for_model(m, N, x_L, x_R, **kw)
    H = build_hamiltonian(m, cfg)
    H0, D0 = build_decoupled(m, cfg, H)
    T0 = initial_two_point(H0, D0, cfg.fermi, labels=cfg.regions())
    return cfg, H, H0, D0, T0


def test_config_regions():
    cfg = LatticeConfig(N=4, x_L=-1, x_R=2)
    assert cfg.n_sites == 9
    lab = cfg.regions()
    assert list(lab[:9]) == [LEFT] * 3 + [SAMPLE] * 4 + [RIGHT] * 2
    assert np.array_equal(lab[:9], lab[9:])
    with pytest.raises(ValueError):
        LatticeConfig(N=4, x_L=1, x_R=0)


@pytest.mark.parametrize("seed", range(5))
def test_hamiltonian_symmetries(seed):
    m = random_model(np.random.default_rng(seed))
    cfg, H, *_ = setup(m, 3 * m.nu + 2)
    M = H.matrix
    assert np.max(np.abs(M - M.conj().T)) <= 1e-14
    assert np.max(np.abs(gamma(M) + M)) <= 1e-14
    # each Pauli block is banded Toeplitz of width nu
    for h in H.pauli_blocks():
        i, j = np.nonzero(np.abs(h) > 0)
        assert np.all(np.abs(i - j) <= m.nu)
        for d in range(-m.nu, m.nu + 1):
            assert np.ptp(np.diagonal(h, d)) == 0


def test_field_only_model_is_diagonal():
    m = ModelSpec(nu=1, c0=[0], c1=[0], c2=[0], c3_0=Fraction(3, 4), c3=[0], beta_L=1, beta_R=2)
    _, H, *_ = setup(m, 2)
    n = 5
    assert np.allclose(H.matrix, np.diag([0.75] * n + [-0.75] * n))


def test_hopping_entries_match_symbol():
    # XY: h3 has c30 on the diagonal and c31 on the first off-diagonals
    _, H, *_ = setup(XY, 3)
    h0, h1, h2, h3 = H.pauli_blocks()
    assert np.allclose(np.diag(h3), 0.5) and np.allclose(np.diagonal(h3, 1), 0.5)
    assert np.allclose(h0, 0) and np.allclose(h1, 0)
    assert np.allclose(np.diagonal(h2, 1), -np.diagonal(h2, -1))


def test_too_small():
    with pytest.raises(ConfigTooSmall):
        build_hamiltonian(XY, LatticeConfig(N=3, x_L=-1, x_R=1))
    build_hamiltonian(XY, LatticeConfig(N=4, x_L=-1, x_R=1))


def test_decoupling_only_cuts_junctions():
    cfg, H, H0, D0, _ = setup(config.fixture("suzuki2"), 10, -2, 1)
    diff = H.matrix - H0.matrix
    x = np.concatenate([cfg.sites(), cfg.sites()])
    i, j = np.nonzero(np.abs(diff) > 0)
    assert i.size > 0
    # every removed coupling straddles a junction and spans at most nu sites
    lab = cfg.regions()
    assert np.all(lab[i] != lab[j]) and np.all(np.abs(x[i] - x[j]) <= 2)
    assert np.allclose(np.diag(D0.matrix)[lab == LEFT], 1.0)
    assert np.allclose(np.diag(D0.matrix)[lab == SAMPLE], 1.5)
    assert np.allclose(np.diag(D0.matrix)[lab == RIGHT], 2.0)


def test_equal_betas_give_scalar_inverse_temperature():
    cfg, H, H0, D0, T0 = setup(XY.with_betas(1.3, 1.3), 6)
    assert np.allclose(D0.matrix, 1.3 * np.eye(26))


def test_infinite_temperature_state_is_half():
    m = XY.with_betas(0.0, 0.0)
    cfg = LatticeConfig(N=5, beta_L=0, beta_S=0, beta_R=0)
    H = build_hamiltonian(m, cfg)
    H0, D0 = build_decoupled(m, cfg, H)
    T0 = initial_two_point(H0, D0, FermiSpec.fermi_dirac())
    assert np.allclose(T0.matrix, 0.5 * np.eye(22), atol=1e-14)


def test_equilibrium_state_is_fermi_function_of_h():
    # with a single temperature and no cut the state is rho(beta H), checked against numpy
    m = config.fixture("fullrange1")
    cfg = LatticeConfig(N=6, beta_L=0.7, beta_S=0.7, beta_R=0.7)
    H = build_hamiltonian(m, cfg)
    T = initial_two_point(H, LatticeOperator(0.7 * np.eye(26), 6), FermiSpec.fermi_dirac()).matrix
    w, V = np.linalg.eigh(H.matrix)
    assert np.max(np.abs(T - (V / (1 + np.exp(-0.7 * w))) @ V.conj().T)) < 1e-12


@pytest.mark.parametrize("name", ["xy", "suzuki2", "fullrange1", "case6"])
def test_initial_state_invariants(name):
    *_, T0 = setup(config.fixture(name), 8, -1, 1)
    T = T0.matrix
    assert np.max(np.abs(T - T.conj().T)) <= 1e-12
    assert np.max(np.abs(gamma(T) - (np.eye(len(T)) - T))) <= 1e-12
    w = np.linalg.eigvalsh(T)
    assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12


def test_blockwise_matches_full_decomposition():
    cfg, H, H0, D0, T0 = setup(config.fixture("fullrange1"), 8, -1, 2)
    full = initial_two_point(H0, D0, cfg.fermi).matrix
    assert np.max(np.abs(full - T0.matrix)) < 1e-12


def test_non_commuting_is_rejected():
    cfg, H, H0, D0, _ = setup(XY, 6)
    with pytest.raises(NonCommuting):
        initial_two_point(H, D0, cfg.fermi)


def test_eigh_reports_non_convergence(monkeypatch):
    from chainflux import kernels

    monkeypatch.setattr(kernels, "jacobi_eigh", lambda M, tol: (np.zeros(len(M)), np.eye(len(M)), 60, 1.0))
    with pytest.raises(EigenNotConverged):
        eigh(np.array([[0, 1], [1, 0]], dtype=complex))


@pytest.mark.parametrize("name", ["xy", "suzuki2", "fullrange1"])
def test_flux_observable_structure(name):
    m = config.fixture(name)
    cfg, H, H0, *_ = setup(m, 10, -1, 1)
    x = np.concatenate([cfg.sites(), cfg.sites()])
    for side in "LR":
        P = flux_observable(H, cfg, side).matrix
        assert np.max(np.abs(P - P.conj().T)) <= 1e-14
        assert np.max(np.abs(gamma(P) + P)) <= 1e-14
        assert abs(np.trace(P)) <= 1e-14
        i, j = np.nonzero(np.abs(P) > 1e-15)
        edge = cfg.x_L if side == "L" else cfg.x_R
        assert np.all(np.abs(x[i] - edge) <= 2 * m.nu + 1) and np.all(np.abs(x[j] - edge) <= 2 * m.nu + 1)
        assert np.allclose(flux_observable(H0, cfg, side).matrix, 0)


def test_flux_vanishes_at_infinite_temperature():
    cfg, H, *_ = setup(XY, 8)
    half = LatticeOperator(0.5 * np.eye(34), 8)
    Phi = flux_observable(H, cfg)
    for t in (0.0, 1.0, 3.7):
        assert abs(instantaneous_flux(half, H, Phi, t)) < 1e-14


def test_lattice_flux_golden():
    cfg, H, H0, D0, T0 = setup(XY, 8)
    Phi = flux_observable(H, cfg)
    assert instantaneous_flux(T0, H, Phi, 0.0) == pytest.approx(GOLDEN["xy_lattice_flux_N8_t0"], abs=1e-14)
    assert instantaneous_flux(T0, H, Phi, 1.0) == pytest.approx(GOLDEN["xy_lattice_flux_N8_t1"], abs=1e-12)


def test_propagator_is_unitary_and_preserves_trace():
    cfg, H, *_ = setup(config.fixture("suzuki2"), 8)
    prop = Propagator(H)
    U = prop.unitary(2.3)
    assert np.max(np.abs(U @ U.conj().T - np.eye(len(U)))) <= 1e-12
    assert np.max(np.abs(prop.unitary(2.3) @ prop.unitary(-2.3) - np.eye(len(U)))) <= 1e-12
    Phi = flux_observable(H, cfg).matrix
    assert abs(np.trace(prop.evolve(Phi, 1.7))) <= 1e-13
    assert np.allclose(prop.evolve(Phi, 0.0), Phi, atol=1e-13)


def test_evolved_state_keeps_invariants():
    cfg, H, H0, D0, T0 = setup(config.fixture("fullrange1"), 8, -1, 1)
    T = evolved_two_point(Propagator(H), T0.matrix, 3.0)
    assert np.max(np.abs(gamma(T) - (np.eye(len(T)) - T))) <= 1e-12
    w = np.linalg.eigvalsh(T)
    assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12


def test_transit_guard_and_window():
    cfg = LatticeConfig.for_model(XY, 20)
    v = max_group_velocity(XY)
    assert transit_guard(XY, cfg) == pytest.approx(0.8 * 19 / v)
    with pytest.raises(WindowTooShort):
        ness_flux(XY, LatticeConfig.for_model(XY, 20, t_max=1.0))
    with pytest.raises(ConfigTooSmall):
        ness_flux(XY, LatticeConfig.for_model(XY, 20, t_max=100.0))


def test_xy_group_velocity():
    # XY band e(k) = sqrt((1/2 + 1/2 cos k)^2 + (0.3 sin k)^2) up to the symbol normalization
    k = np.linspace(-np.pi, np.pi, 200001)
    e = np.sqrt((0.5 + np.cos(k)) ** 2 + (0.6 * np.sin(k)) ** 2)
    assert max_group_velocity(XY) == pytest.approx(np.max(np.abs(np.gradient(e, k))), rel=1e-4)


def test_equilibrium_run_has_no_flux():
    m = XY.with_betas(1.5, 1.5)
    res = ness_flux(m, LatticeConfig.for_model(m, 60))
    assert abs(res.J_avg) < 1e-3 and abs(res.J_R_avg) < 1e-3


def test_left_and_right_fluxes_balance():
    res = ness_flux(XY, LatticeConfig.for_model(XY, 60))
    assert res.J_avg > 0
    assert abs(res.J_avg + res.J_R_avg) <= 3 * (res.J_std + res.J_R_std) + 0.02 * res.J_avg
    J, s, JR = res
    assert (J, s, JR) == (res.J_avg, res.J_std, res.J_R_avg)


def test_doubling_the_lattice_keeps_the_plateau():
    small = ness_flux(XY, LatticeConfig.for_model(XY, 40))
    big = ness_flux(XY, LatticeConfig.for_model(XY, 80, t_max=small.t_max))
    assert np.max(np.abs(small.J_series - big.J_series)) < 1e-8


# Many-body checks on a 2^L dimensional Fock space.

def fock_setup(m, N, x_L=0, x_R=0):
    cfg, H, H0, D0, T0 = setup(m, N, x_L, x_R)
    return cfg, H, H0, D0, T0, Fock(cfg.n_sites)


def expect(rho, X):
    return complex(np.trace(rho @ X))


@pytest.mark.parametrize("name, N, x_L, x_R", [("xy", 3, 0, 0), ("fullrange1", 4, -1, 1), ("suzuki2", 4, 0, 0)])
def test_two_point_operator_matches_gibbs_state(name, N, x_L, x_R):
    cfg, H, H0, D0, T0, fk = fock_setup(config.fixture(name), N, x_L, x_R)
    rho = fk.gibbs(D0.matrix @ H0.matrix)
    dim = 2 * cfg.n_sites
    left = [(rho @ g.conj().T).T for g in fk.gens]
    gram = np.array([[np.sum(left[i] * fk.gens[j]) for j in range(dim)] for i in range(dim)])
    assert np.max(np.abs(gram - T0.matrix)) < 1e-10


@pytest.mark.parametrize("t", [0.0, 1.3])
def test_four_point_function_is_a_pfaffian(t, rng):
    m = config.fixture("fullrange1")
    cfg, H, H0, D0, T0, fk = fock_setup(m, 4, -1, 1)
    rho = fk.evolve_state(fk.gibbs(D0.matrix @ H0.matrix), H.matrix, t)
    T = evolved_two_point(Propagator(H), T0.matrix, t)
    dim = 2 * cfg.n_sites
    for _ in range(3):
        Fs = [rng.normal(size=dim) + 1j * rng.normal(size=dim) for _ in range(4)]
        ops = [fk.B(F) for F in Fs]
        direct = expect(rho, ops[0] @ ops[1] @ ops[2] @ ops[3])
        wick = quasifree_correlator(lambda i, j: two_point_value(T, Fs[i], Fs[j]), 4)
        assert abs(direct - wick) < 1e-10 * max(1.0, abs(direct))
        assert abs(expect(rho, ops[0] @ ops[1] @ ops[2])) < 1e-12
        assert abs(expect(rho, ops[0] @ ops[1]) - two_point_value(T, Fs[0], Fs[1])) < 1e-10


def test_field_adjoint_is_conjugation(rng):
    fk = Fock(3)
    F = rng.normal(size=6) + 1j * rng.normal(size=6)
    assert np.allclose(fk.B(F).conj().T, fk.B(gamma_vector(F)))
    G = rng.normal(size=6) + 1j * rng.normal(size=6)
    anti = fk.B(F).conj().T @ fk.B(G) + fk.B(G) @ fk.B(F).conj().T
    assert np.allclose(anti, np.vdot(F, G) * np.eye(8))


@pytest.mark.parametrize("name, N, x_L, x_R", [("xy", 4, 0, 0), ("fullrange1", 4, -1, 1)])
@pytest.mark.parametrize("side", "LR")
def test_flux_is_energy_loss_rate_of_reservoir(side, name, N, x_L, x_R):
    """-d/dt <K_res> = -<i[K, K_res]> in the many-body state equals the one-particle formula.

    The sample is at least nu sites wide so the reservoirs only exchange energy through it.
    """
    cfg, H, H0, D0, T0, fk = fock_setup(config.fixture(name), N, x_L, x_R)
    lab = cfg.regions()
    q = (lab == (LEFT if side == "L" else RIGHT)).astype(float)
    K = fk.second_quantize(H.matrix) / 2
    K_res = fk.second_quantize(q[:, None] * H.matrix * q[None, :]) / 2
    rate = 1j * (K @ K_res - K_res @ K)
    Phi = flux_observable(H, cfg, side)
    rho0 = fk.gibbs(D0.matrix @ H0.matrix)
    for t in (0.0, 0.8, 2.1):
        rho = fk.evolve_state(rho0, H.matrix, t)
        many_body = -expect(rho, rate)
        assert abs(many_body.imag) < 1e-12
        assert many_body.real == pytest.approx(instantaneous_flux(T0, H, Phi, t), abs=1e-11)
