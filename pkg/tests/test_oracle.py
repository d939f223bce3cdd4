import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from conftest import band_grid
from ptfano import (
    OutOfBandError,
    SingularSystemError,
    assemble,
    build_generic,
    build_model_a,
    build_model_b,
    build_model_b_pt,
    build_model_c,
    resonances_a,
    resonances_b,
    solve_scattering,
)
from ptfano.oracle import full_pivot_solve, lead_residuals


@pytest.mark.parametrize("model,shape,window", [
    (build_model_b_pt(0.5, 0.4, 0.5, 0.05, 0.1), (7, 7), (-1, 1)),
    (build_model_a(0.5, 0.3, 0.5, 0.1), (8, 8), (-1, 2)),
    (build_model_c(0.5, 0.3, 0.2, 0.1), (8, 8), (-1, 2)),
])
def test_system_size(model, shape, window):
    sys_ = assemble(model, 0.3)
    assert sys_.matrix.shape == shape
    assert sys_.window == window
    assert len(sys_.unknowns) == shape[0]
    assert sys_.unknowns[:2] == ("r", "t")
    assert np.all(np.isfinite(sys_.matrix))


def test_assemble_out_of_band():
    with pytest.raises(OutOfBandError):
        assemble(build_model_a(0.5, 0.3, 0.5, 0.1), 1.0)


def test_perfect_transmission_b():
    o = solve_scattering(build_model_b_pt(0.5, 0.4, 0.5, 0.05, 0.0), 0.5)
    assert abs(o.t - 1) < 1e-12
    assert abs(o.r) < 1e-12


def test_reflection_root_a():
    m = build_model_a(0.5, 0.3, 0.5, 0.1)
    w = resonances_a(m).perfect_reflection[1]
    assert w == pytest.approx(0.4696662, abs=1e-7)
    assert abs(solve_scattering(m, w).t) <= 1e-10


def test_model_c_transmission_exceeds_one():
    o = solve_scattering(build_model_c(0.5, 0.3, 0.2, 0.1), 0.2)
    # frozen from the direct solve; the closed form must agree to 1e-9
    assert o.T == pytest.approx(2.0253164556962, abs=1e-9)
    assert o.R == pytest.approx(0.0435238988088654, abs=1e-9)


@pytest.mark.parametrize("omega", band_grid(steps=41))
def test_decoupled_defects_give_free_chain(omega):
    for m in (build_model_a(0.5, 0.0, 0.5, 0.1), build_model_c(0.5, 0.0, 0.2, 0.1),
              build_model_b(0.5, 0.0, 0.0, 0.5, 0.2, 0.05, 0.3, 0.2)):
        o = solve_scattering(m, omega)
        assert abs(o.t - 1) < 1e-12 and abs(o.r) < 1e-12


def _random_models(rng, n):
    out = []
    for _ in range(n):
        J = rng.uniform(0.2, 1.0) * rng.choice([1, -1])
        kind = rng.integers(4)
        E, g = rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)
        if kind == 0:
            out.append(build_model_a(J, rng.uniform(0, 1), E, g))
        elif kind == 1:
            out.append(build_model_b(J, *rng.uniform(0, 1, 2), *rng.uniform(-1, 1, 2), *rng.uniform(-0.5, 0.5, 2),
                                     rng.uniform(0, 1)))
        elif kind == 2:
            out.append(build_model_c(J, rng.uniform(0, 1), E, g))
        else:
            nd = int(rng.integers(1, 4))
            onsite = rng.uniform(-1, 1, nd) + 1j * rng.uniform(-0.3, 0.3, nd)
            att = [(int(rng.integers(nd)), int(rng.integers(-2, 3)), rng.uniform(0.1, 1)) for _ in range(nd + 1)]
            att += [(d, int(rng.integers(-2, 3)), 0.3) for d in range(nd)]
            out.append(build_generic(J, onsite, att, [(0, nd - 1, 0.2)] if nd > 1 else []))
    return out


def test_window_independence():
    rng = np.random.default_rng(7)
    for m in _random_models(rng, 10):
        w = 2 * abs(m.J) * rng.uniform(-0.95, 0.95)
        a = solve_scattering(m, w)
        b = solve_scattering(m, w, pad=5)
        assert b.window == (a.window[0] - 5, a.window[1] + 5)
        assert abs(a.t - b.t) < 1e-12 and abs(a.r - b.r) < 1e-12


def test_lead_matching_exact():
    rng = np.random.default_rng(11)
    for m in _random_models(rng, 10):
        w = 2 * abs(m.J) * rng.uniform(-0.95, 0.95)
        o = solve_scattering(m, w)
        assert max(lead_residuals(m, o)) <= 1e-12


def test_residual_recorded():
    o = solve_scattering(build_model_c(0.5, 0.3, 0.2, 0.1), 0.3)
    assert o.residual_norm < 1e-14
    assert 1 <= o.condition_estimate < 1e12


def test_full_pivot_solve_matches_numpy():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    b = rng.normal(size=9) + 0j
    assert np.allclose(full_pivot_solve(M, b), np.linalg.solve(M, b), atol=1e-12)


def test_bound_state_is_singular():
    # identical Hermitian defects: d1 - d2 decouples at E_d - J_perp
    m = build_model_b_pt(0.5, 0.4, 0.5, 0.0, 0.2)
    with pytest.raises(SingularSystemError) as info:
        solve_scattering(m, 0.3)
    assert info.value.nearest_mode == pytest.approx(0.3)
    assert info.value.condition > 1e12


def test_effective_potential_pole_is_regular():
    m = build_model_b_pt(0.5, 0.4, 0.5, 0.05, 0.1)
    o = solve_scattering(m, 0.5 + np.sqrt(0.0075))
    assert o.T < 1e-20
    assert o.condition_estimate < 1e6


def _locate_zero(model, w0, half=1e-6):
    res = minimize_scalar(lambda w: abs(solve_scattering(model, w).t), bounds=(w0 - half, w0 + half),
                          method="bounded", options={"xatol": 1e-14})
    return res.x, res.fun


@pytest.mark.parametrize("model,roots", [
    (build_model_a(0.5, 0.3, 0.5, 0.1), resonances_a),
    (build_model_a(0.5, 0.3, 0.5, 0.0), resonances_a),
    (build_model_b_pt(0.5, 0.4, 0.5, 0.05, 0.1), resonances_b),
    (build_model_b_pt(0.5, 0.4, 0.5, 0.0, 0.2), resonances_b),
])
def test_oracle_reproduces_roots(model, roots):
    rs = roots(model)
    assert rs.perfect_reflection
    for w in rs.perfect_reflection:
        x, fun = _locate_zero(model, w)
        assert fun <= 1e-8
        assert abs(x - w) < 1e-6
