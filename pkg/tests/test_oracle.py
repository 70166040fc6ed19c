import warnings

import numpy as np
import pytest

from openosc import BathSpec, compare, evolve_exact, make_system, sample_bath
from openosc.errors import DimensionCapError, DomainError
from openosc.oracle import propagator_blocks
from openosc.scenarios import fig1_system


def _weak(eps=+1, T=1.0):
    return make_system(
        1.0,
        BathSpec(statistics=eps, alpha=0.01, gamma=10.0, temperature=T),
        BathSpec(statistics=eps, alpha=0.01, gamma=10.0, temperature=T),
    )


def test_sample_bath_reproduces_the_truncated_coupling_sum():
    bath = BathSpec(statistics=+1, alpha=0.01, gamma=10.0, temperature=1.0)
    w, a = sample_bath(bath, 400, 200.0)
    assert w.shape == a.shape == (400,)
    assert w[0] == pytest.approx(0.25, rel=1e-12)  # midpoint of the first cell
    # midpoint rule telescopes to the truncated continuum integral
    target = (bath.alpha * bath.gamma / np.pi) * np.arctan(200.0 / bath.gamma)
    assert np.sum(a**2 / w) == pytest.approx(target, rel=1e-7)
    with pytest.raises(DomainError):
        sample_bath(bath, 0, 200.0)
    with pytest.raises(DomainError):
        sample_bath(bath, 10, -1.0)


def test_oracle_input_validation():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mixed = fig1_system()
    with pytest.raises(DomainError):
        evolve_exact(mixed, [0.0, 1.0], 0.0)
    with pytest.raises(DomainError):
        evolve_exact(_weak(eps=-1), [0.0, 1.0], 0.0)  # fermionic needs opt-in
    with pytest.raises(DimensionCapError):
        evolve_exact(_weak(), [0.0, 1.0], 0.0, n_modes=1001)
    with pytest.raises(DomainError):
        evolve_exact(_weak(), [-1.0, 1.0], 0.0)
    with pytest.raises(DomainError):
        evolve_exact(_weak(), [0.0, 1.0], -0.2)


def test_fermionic_comb_behind_the_flag():
    spec = _weak(eps=-1, T=0.5)
    res = evolve_exact(spec, np.linspace(0.0, 2.0, 21), 0.1, n_modes=100,
                       allow_fermionic=True)
    assert np.isfinite(res.n).all()
    assert res.n[0] == pytest.approx(0.1, abs=1e-10)


def test_recurrence_horizon_warns():
    spec = _weak()
    with pytest.warns(UserWarning, match="recurrence"):
        evolve_exact(spec, [1.0], 0.0, n_modes=20, w_max=200.0)


def test_initial_value_and_determinism():
    spec = _weak()
    t = np.linspace(0.0, 2.0, 11)
    a = evolve_exact(spec, t, 0.3, n_modes=80)
    b = evolve_exact(spec, t, 0.3, n_modes=80)
    assert a.n[0] == pytest.approx(0.3, abs=1e-10)
    assert np.array_equal(a.n, b.n)
    assert a.recurrence_time == pytest.approx(2 * np.pi * 80 / a.w_max, rel=1e-12)


def test_counter_rotating_terms_excite_the_vacuum():
    # at T = 0 from an empty oscillator: the excitation-conserving variant
    # stays empty, the full coupling does not
    spec = _weak(T=0.0)
    t = np.linspace(0.0, 5.0, 26)
    rwa = evolve_exact(spec, t, 0.0, n_modes=150, rwa=True)
    full = evolve_exact(spec, t, 0.0, n_modes=150)
    assert np.abs(rwa.n).max() < 1e-12
    assert full.n[5:].min() > 1e-5


def test_excitation_conserving_variant_never_amplifies():
    spec = _weak(T=0.0)
    t = np.linspace(0.0, 5.0, 26)
    res = evolve_exact(spec, t, 1.0, n_modes=150, rwa=True)
    assert res.n.max() <= 1.0 + 1e-10
    assert res.n[-1] < 1.0  # occupation leaks into the bath


def test_propagator_blocks_are_symplectic():
    spec = _weak()
    Txx, Txp, Tpx, Tpp, wm = propagator_blocks(spec, 0.0, n_modes=15)
    n = wm.size
    assert np.allclose(Txx, np.eye(n), atol=1e-12)
    assert np.allclose(Tpp, np.eye(n), atol=1e-12)
    assert np.abs(Txp).max() < 1e-12 and np.abs(Tpx).max() < 1e-12
    Txx, Txp, Tpx, Tpp, _ = propagator_blocks(spec, 0.7, n_modes=15)
    # phase-space volume and Poisson brackets are preserved
    assert np.allclose(Txx @ Tpp.T - Txp @ Tpx.T, np.eye(n), atol=1e-10)
    assert np.allclose(Txx @ Txp.T, (Txx @ Txp.T).T, atol=1e-10)
    assert np.allclose(Tpx @ Tpp.T, (Tpx @ Tpp.T).T, atol=1e-10)


def test_comb_self_convergence(weak_case):
    spec, _, traj, oracle400 = weak_case
    oracle800 = evolve_exact(spec, oracle400.t, 0.0, n_modes=800, w_max=200.0)
    assert np.abs(oracle400.n - oracle800.n).max() < 1e-6
    rep = compare(traj.t, traj.occupations[0], oracle800.t, oracle800.n)
    assert rep.max_abs_dev < 0.03


def test_compare_reports_the_overlap():
    t = np.linspace(0.0, 10.0, 101)
    r = compare(t, np.sin(t), t[:51], np.sin(t[:51]) + 0.01)
    assert r.overlap == (0.0, 5.0)
    assert r.max_abs_dev == pytest.approx(0.01, rel=1e-6)
    assert r.mean_abs_dev == pytest.approx(0.01, rel=1e-6)
    with pytest.raises(DomainError):
        compare([0.0, 1.0], [0.0, 0.0], [2.0, 3.0], [0.0, 0.0])
