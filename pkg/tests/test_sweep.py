import math

import numpy as np
import pytest

from conftest import FIG5
from ptfano import (
    InvalidModelError,
    SweepSpec,
    build_generic,
    build_model_a,
    build_model_b,
    build_model_b_pt,
    build_model_c,
    conservation_audit,
    detect_phase_jumps,
    run_sweep,
    run_sweep_axis,
)
from ptfano.presets import PRESETS, preset_model
from ptfano.sweep import SweepRow


def test_spec_defaults():
    spec = SweepSpec(build_model_a(0.5, 0.3, 0.5, 0.1))
    assert spec.steps == 2001
    assert spec.omega_min == pytest.approx(-(1 - 1e-6)) and spec.omega_max == pytest.approx(1 - 1e-6)


@pytest.mark.parametrize("kw", [dict(omega_min=-1.0), dict(omega_max=1.2), dict(steps=1),
                                dict(omega_min=0.3, omega_max=0.1), dict(vary=("J_perp", (0.1,)))])
def test_spec_validation(kw):
    with pytest.raises(InvalidModelError):
        SweepSpec(build_model_a(0.5, 0.3, 0.5, 0.1), **kw)


def test_rows_sorted_and_phase_consistent():
    res = run_sweep(SweepSpec(build_model_c(0.5, 0.3, 0.2, 0.1), steps=801))
    ws = [r.omega for r in res.rows]
    assert ws == sorted(ws)
    for r in res.rows:
        m = (r.phase_unwrapped - r.phase_wrapped) / (2 * math.pi)
        assert abs(m - round(m)) < 1e-12
        assert r.sum == pytest.approx(r.T + r.R)


def _jumps(name, steps=2001):
    spec = SweepSpec(preset_model(name), steps=steps, vary=PRESETS[name][2])
    return [res.jumps for res in run_sweep_axis(spec)]


def test_fig3_structure():
    spec = SweepSpec(build_model_a(0.5, 0.3, 0.5, 0.0), vary=("gamma", (0.0, 0.1, 0.2)))
    r0, r1, r2 = run_sweep_axis(spec)
    assert [r.axis for r in (r0, r1, r2)] == [("gamma", 0.0), ("gamma", 0.1), ("gamma", 0.2)]
    assert [len(r.jumps) for r in (r0, r1, r2)] == [1, 2, 0]
    assert r0.jumps[0].omega_lo <= 0.14 <= r0.jumps[0].omega_hi
    assert r1.jumps[0].sign == -r1.jumps[1].sign
    assert min(r.T for r in r2.rows) > 1e-6


def test_fig4c_structure():
    weak, strong = _jumps("fig4c")
    assert weak == ()
    assert len(strong) == 2
    for j, w in zip(strong, (0.5 - math.sqrt(0.0075), 0.5 + math.sqrt(0.0075))):
        assert j.omega_lo <= w <= j.omega_hi


def test_fig2b_single_jump():
    (jumps,) = _jumps("fig2a")
    assert len(jumps) == 1
    assert jumps[0].omega_at_min == pytest.approx(0.5, abs=1e-6)


def test_fig5_imbalance():
    for params in FIG5.values():
        res = run_sweep(SweepSpec(build_model_b(*params)))
        assert max(abs(r.sum - 1) for r in res.rows) > 1e-3
    assert any(max(max(r.T, r.R) for r in run_sweep(SweepSpec(build_model_b(*p))).rows) > 1
               for p in FIG5.values())


@pytest.mark.parametrize("name", ["fig2a", "fig2c", "fig3", "fig4", "fig4c", "fig6"])
def test_grid_refinement_stable(name):
    coarse, fine = _jumps(name, 2001), _jumps(name, 4002)
    step = 2 / 2000
    for c, f in zip(coarse, fine):
        assert len(c) == len(f)
        for a, b in zip(c, f):
            assert a.sign == b.sign
            assert abs(a.omega_at_min - b.omega_at_min) < step


def test_jump_brackets_contain_dip():
    for res in run_sweep_axis(SweepSpec(preset_model("fig3"), vary=PRESETS["fig3"][2])):
        tmax = max(abs(r.t) for r in res.rows)
        for j in res.jumps:
            assert j.omega_lo <= j.omega_at_min <= j.omega_hi
            assert j.min_abs_t < 1e-3 * tmax


def _rows(phases, ts):
    return [SweepRow(float(i), 0.0, abs(t) ** 2, 0.0, 0.0, p, p, (), t) for i, (p, t) in enumerate(zip(phases, ts))]


def test_detector_needs_dip():
    # fast phase motion without a transmission zero is not a jump
    rows = _rows([0.0, 2.0, 2.1], [1, 0.9, 0.9])
    assert detect_phase_jumps(rows) == ()
    rows = _rows([0.0, 3.0, 3.1], [1, 1e-5, 0.9])
    (j,) = detect_phase_jumps(rows)
    assert j.sign == 1 and j.jump == math.pi


def test_oracle_sweep_both():
    res = run_sweep(SweepSpec(build_model_c(0.5, 0.3, 0.2, 0.1), steps=201, use_oracle=True))
    assert res.source == "both"
    assert res.max_oracle_deviation < 1e-9
    assert not any("oracle-mismatch" in r.flags for r in res.rows)


def test_generic_sweep_uses_oracle():
    m = build_generic(0.5, [0.2 + 0.05j, -0.1], [(0, 0, 0.3), (1, 2, 0.3)], [(0, 1, 0.1)])
    res = run_sweep(SweepSpec(m, steps=101))
    assert res.source == "oracle"
    assert all(math.isfinite(r.T) for r in res.rows)


def test_sweep_flags_bound_state_row_without_aborting():
    m = build_model_b_pt(0.5, 0.4, 0.5, 0.0, 0.2)
    res = run_sweep(SweepSpec(m, omega_min=0.2, omega_max=0.4, steps=3, use_oracle=True))
    mid = res.rows[1]
    assert mid.omega == pytest.approx(0.3, abs=1e-15)
    assert "bound-state" in mid.flags and "oracle-singular" in mid.flags
    assert mid.T == pytest.approx(0.5870967741935484)


def test_conservation_audit_examples():
    grid = np.linspace(-0.999, 0.999, 2001)
    for g in (0.0, 0.1, 0.18, 0.2, 0.5, 0.95):
        dev, _ = conservation_audit(build_model_a(0.5, 0.3, 0.5, g), grid)
        assert dev <= 1e-10
    dev, _ = conservation_audit(build_model_b_pt(0.5, 0.4, 0.5, 0.05, 0.1), grid, cross_check=True)
    assert dev <= 1e-10
    dev, at = conservation_audit(build_model_c(0.5, 0.3, 0.2, 0.1), grid)
    assert dev > 0.5
    assert abs(at - 0.2) < 0.2


def test_conservation_audit_generic():
    m = build_generic(0.5, [0.2, -0.1], [(0, 0, 0.3), (1, 2, 0.3)], [(0, 1, 0.1)])
    dev, _ = conservation_audit(m, np.linspace(-0.9, 0.9, 51))
    assert dev < 1e-12
