"""Frequency sweeps, phase unwrapping, pi-jump detection and R+T audits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import analytic, oracle
from .errors import InvalidModelError, ScatteringError
from .model import SWEEPABLE, ScatteringModel, with_param

EDGE_MARGIN = 1e-6
DEFAULT_STEPS = 2001
# oracle/closed-form disagreement above this marks the row
MISMATCH_TOL = 1e-9


@dataclass(frozen=True)
class SweepSpec:
    model: ScatteringModel
    omega_min: float | None = None
    omega_max: float | None = None
    steps: int = DEFAULT_STEPS
    use_oracle: bool = False
    vary: tuple[str, tuple[float, ...]] | None = None

    def __post_init__(self):
        edge = 2 * abs(self.model.J)
        lo = -edge * (1 - EDGE_MARGIN) if self.omega_min is None else float(self.omega_min)
        hi = edge * (1 - EDGE_MARGIN) if self.omega_max is None else float(self.omega_max)
        if not (-edge < lo < hi < edge):
            raise InvalidModelError(f"sweep range [{lo}, {hi}] must lie strictly inside (-{edge}, {edge})")
        if int(self.steps) < 2:
            raise InvalidModelError("a sweep needs at least 2 steps")
        object.__setattr__(self, "omega_min", lo)
        object.__setattr__(self, "omega_max", hi)
        object.__setattr__(self, "steps", int(self.steps))
        if self.vary is not None:
            name, values = self.vary
            if self.model.variant not in SWEEPABLE or name not in SWEEPABLE[self.model.variant]:
                raise InvalidModelError(f"cannot vary {name!r} on variant {self.model.variant}")
            object.__setattr__(self, "vary", (name, tuple(float(v) for v in values)))

    def grid(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.steps)


@dataclass(frozen=True)
class SweepRow:
    omega: float
    k: float
    T: float
    R: float
    sum: float
    phase_wrapped: float
    phase_unwrapped: float
    flags: tuple[str, ...]
    t: complex = field(default=complex("nan"), repr=False)


@dataclass(frozen=True)
class PhaseJump:
    omega_lo: float
    omega_hi: float
    sign: int
    min_abs_t: float
    omega_at_min: float

    @property
    def jump(self) -> float:
        return self.sign * math.pi


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    jumps: tuple[PhaseJump, ...]
    source: str
    axis: tuple[str, float] | None = None
    max_oracle_deviation: float | None = None


def _evaluator(model: ScatteringModel):
    """``omega -> complex t`` using the closed form when one exists."""
    if model.variant in ("A", "B", "C"):
        return lambda w: analytic.amplitudes(model, w).t
    return lambda w: oracle.solve_scattering(model, w).t


def _row(model: ScatteringModel, w: float, use_oracle: bool):
    closed = model.variant in ("A", "B", "C")
    flags: list[str] = []
    t = r = complex("nan")
    k = math.nan
    dev = None
    if closed:
        try:
            sol = analytic.amplitudes(model, w)
            t, r, k = sol.t, sol.r, sol.k
            flags.extend(sol.flags)
        except ScatteringError as exc:
            flags.append(type(exc).__name__)
    if use_oracle or not closed:
        try:
            o = oracle.solve_scattering(model, w)
            if closed:
                dev = max(abs(o.t - t), abs(o.r - r))
                if not dev <= MISMATCH_TOL:
                    flags.append("oracle-mismatch")
            else:
                t, r, k = o.t, o.r, o.k
        except ScatteringError as exc:
            flags.append("oracle-singular" if closed else "singular")
            if not closed:
                k = math.nan
    return w, k, t, r, tuple(flags), dev


def _assemble_rows(raw) -> tuple[SweepRow, ...]:
    ts = np.array([x[2] for x in raw], complex)
    defined = np.isfinite(ts) & (ts != 0)
    wrapped = np.full(len(ts), math.nan)
    wrapped[defined] = np.angle(ts[defined])
    unwrapped = np.full(len(ts), math.nan)
    unwrapped[defined] = np.unwrap(wrapped[defined])
    rows = []
    for (w, k, t, r, flags, _dev), pw, pu in zip(raw, wrapped, unwrapped):
        T, R = abs(t) ** 2, abs(r) ** 2
        if t == 0:
            flags = flags + ("zero",)
        rows.append(SweepRow(float(w), float(k), T, R, T + R, float(pw), float(pu), flags, complex(t)))
    return tuple(rows)


def detect_phase_jumps(rows, refine=None) -> tuple[PhaseJump, ...]:
    """Find +-pi jumps of the unwrapped phase that sit on a dip of ``|t|``.

    A jump needs ``|delta sigma| > pi/2`` between consecutive rows with a
    defined phase, and the local minimum of ``|t|`` in that bracket below
    ``1e-3 * max|t|``. ``refine``, an ``omega -> t`` callable, sharpens the
    local minimum by bounded minimisation; without it only the grid values
    count.
    """
    pts = [(row.omega, row.phase_unwrapped, abs(row.t)) for row in rows
           if math.isfinite(row.phase_unwrapped)]
    if len(pts) < 2:
        return ()
    tmax = max(p[2] for p in pts)
    jumps = []
    for (w0, p0, a0), (w1, p1, a1) in zip(pts, pts[1:]):
        dp = p1 - p0
        if abs(dp) <= math.pi / 2:
            continue
        best, at = (a0, w0) if a0 <= a1 else (a1, w1)
        if refine is not None:
            res = minimize_scalar(lambda w: abs(refine(w)), bounds=(w0, w1), method="bounded",
                                  options={"xatol": 1e-13 * max(1.0, abs(w0))})
            if res.fun < best:
                best, at = float(res.fun), float(res.x)
        if best < 1e-3 * tmax:
            jumps.append(PhaseJump(w0, w1, 1 if dp > 0 else -1, best, at))
    return tuple(jumps)


def run_sweep(spec: SweepSpec, model: ScatteringModel | None = None,
              axis: tuple[str, float] | None = None) -> SweepResult:
    """Evaluate one frequency sweep (``spec.vary`` is ignored; see ``run_sweep_axis``).

    Rows are computed independently and kept in grid order. Failures are
    recorded as row flags; the sweep itself never aborts.
    """
    model = model or spec.model
    closed = model.variant in ("A", "B", "C")
    raw = [_row(model, float(w), spec.use_oracle) for w in spec.grid()]
    rows = _assemble_rows(raw)
    devs = [x[5] for x in raw if x[5] is not None and "pole" not in x[4] and "bound-state" not in x[4]]
    source = "both" if closed and spec.use_oracle else ("analytic" if closed else "oracle")
    ev = _evaluator(model)

    def safe(w):
        try:
            return ev(w)
        except ScatteringError:
            return complex("inf")

    jumps = detect_phase_jumps(rows, refine=safe)
    return SweepResult(rows, jumps, source, axis, max(devs) if devs else None)


def run_sweep_axis(spec: SweepSpec) -> list[SweepResult]:
    """One ``SweepResult`` per value of the secondary axis (or a single one without it)."""
    if spec.vary is None:
        return [run_sweep(spec)]
    name, values = spec.vary
    return [run_sweep(spec, with_param(spec.model, name, v), (name, v)) for v in values]


def _usable(flags) -> bool:
    return not any(f in flags for f in ("pole", "bound-state", "zero", "singular", "oracle-singular"))


def conservation_audit(model: ScatteringModel, omega_grid, cross_check: bool = False) -> tuple[float, float]:
    """Largest ``|R + T - 1|`` over the grid and where it occurs.

    Closed-form amplitudes are used when available; with ``cross_check`` the
    oracle is evaluated as well and the larger deviation of the two wins.
    Flagged rows are skipped.
    """
    worst, at = -1.0, math.nan
    closed = model.variant in ("A", "B", "C")
    for w in omega_grid:
        w = float(w)
        vals = []
        if closed:
            try:
                sol = analytic.amplitudes(model, w)
            except ScatteringError:
                continue
            if not _usable(sol.flags):
                continue
            vals.append(sol.T + sol.R)
        if cross_check or not closed:
            try:
                o = oracle.solve_scattering(model, w)
            except ScatteringError:
                continue
            vals.append(o.T + o.R)
        for v in vals:
            d = abs(v - 1.0)
            if d > worst:
                worst, at = d, w
    return max(worst, 0.0), at
