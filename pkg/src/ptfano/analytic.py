"""Closed-form effective potentials, amplitudes and resonance conditions.

Every effective potential is carried internally as a ``(num, den)`` pair so
that amplitudes stay finite at its poles: the amplitudes are rational in the
potential and are evaluated with the denominator multiplied through.

When a defect combination decouples from the chain (identical defects coupled
symmetrically, or a defect with no links at all) the shared factor is cancelled
before evaluation. Exactly at that factor's zero the isolated block hosts a
bound state in the continuum; the transmitted amplitude is still unique and is
reported as the continuous value, with a ``bound-state`` flag.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError, UnsupportedAnalysisError
from .model import PT_TOL, ScatteringModel, check_pt_symmetry, wavenumber

POLE_TOL = 1e-300
# |factor| below this (relative to the energy scale) marks a flagged row
FLAG_TOL = 1e-12


@dataclass(frozen=True)
class EffectivePotential:
    value: complex
    is_real_certified: bool


@dataclass(frozen=True)
class FanoParameters:
    alpha_k: float
    q: float = 0.0


@dataclass(frozen=True)
class ScatteringSolution:
    """Amplitudes for unit incoming amplitude ``I = 1``."""

    omega: float
    k: float
    t: complex
    r: complex
    B1: complex
    B2: complex
    flags: tuple[str, ...] = ()

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    @property
    def phase_sigma(self) -> float:
        return cmath.phase(self.t)


@dataclass(frozen=True)
class ResonanceSet:
    perfect_reflection: tuple[float, ...]
    perfect_transmission: tuple[float, ...]
    critical_gamma: float | None
    discriminant: float
    degenerate: bool = False
    out_of_band: tuple[float, ...] = ()


def _require(model: ScatteringModel, variant: str) -> None:
    if model.variant != variant:
        raise UnsupportedAnalysisError(f"expected a variant-{variant} model, got {model.variant}")


def _scale(model: ScatteringModel, omega: float) -> float:
    d = model.defects
    vals = [abs(model.J), abs(omega)] + [abs(e) for e in d.onsite] + [abs(c) for *_, c in d.attachments]
    return max(vals)


# ---------------------------------------------------------------------------
# effective potentials as (num, den, cancelled factor)

def _parts_a(model: ScatteringModel, omega: float):
    _require(model, "A")
    Jp = model.defects.attachments[0][2]
    e1, e2 = model.defects.onsite
    a1, a2 = omega - e1, omega - e2
    if Jp == 0.0:
        return 0j, 1 + 0j, None
    if abs(a1 - a2) <= PT_TOL:
        # identical defects: the antisymmetric combination decouples
        return complex(2 * Jp * Jp), a1, a1
    return Jp * Jp * (a1 + a2), a1 * a2, None


def _parts_b(model: ScatteringModel, omega: float):
    _require(model, "B")
    d = model.defects
    J1 = d.couplings_of(0).get(0, 0.0)
    J2 = d.couplings_of(1).get(0, 0.0)
    Jq = d.internal_couplings[0][2] if d.internal_couplings else 0.0
    e1, e2 = d.onsite
    a1, a2 = omega - e1, omega - e2
    if J1 == 0.0 and J2 == 0.0:
        return 0j, 1 + 0j, None
    if Jq == 0.0 and J2 == 0.0:
        return complex(J1 * J1), a1, a2
    if Jq == 0.0 and J1 == 0.0:
        return complex(J2 * J2), a2, a1
    if abs(e1 - e2) <= PT_TOL:
        for s in (1.0, -1.0):
            if abs(J2 - s * J1) <= PT_TOL:
                # (a + s Jq)(a - s Jq) in the denominator, (a + s Jq) shared
                return complex(2 * J1 * J1), a1 - s * Jq, a1 + s * Jq
    num = a1 * J2 * J2 + a2 * J1 * J1 + 2 * J1 * J2 * Jq
    den = a1 * a2 - Jq * Jq
    return num, den, None


def _pt_real_b(model: ScatteringModel, omega: float) -> float:
    p = model.defects
    Jp = p.couplings_of(0)[0]
    Jq = p.internal_couplings[0][2]
    E, g = p.onsite[0].real, p.onsite[0].imag
    x = omega - E
    return 2 * Jp * Jp * (x + Jq) / (x * x + g * g - Jq * Jq)


def _c_coupling(model: ScatteringModel) -> float:
    return model.defects.couplings_of(0)[0]


def effective_potential_a(model: ScatteringModel, omega: float) -> EffectivePotential:
    """``F_d = 2 J_par^2 (w - E_d) / ((w - E_d)^2 + gamma^2)`` for balanced model A."""
    _require(model, "A")
    e1 = model.defects.onsite[0]
    Jp = model.defects.attachments[0][2]
    pt = check_pt_symmetry(model).is_pt_symmetric
    if pt:
        x, g = omega - e1.real, e1.imag
        den = x * x + g * g
        if den < POLE_TOL:
            raise PoleError(f"F_d has a pole at omega={omega} (gamma = 0)")
        return EffectivePotential(complex(2 * Jp * Jp * x / den), True)
    num, den, _ = _parts_a(model, omega)
    if abs(den) < POLE_TOL:
        raise PoleError(f"F_d has a pole at omega={omega}")
    return EffectivePotential(num / den, False)


def effective_potential_b(model: ScatteringModel, omega: float) -> EffectivePotential:
    """General complex effective potential of model B; real when balanced."""
    _require(model, "B")
    pt = check_pt_symmetry(model).is_pt_symmetric
    p = model.defects
    J1 = p.couplings_of(0).get(0, 0.0)
    J2 = p.couplings_of(1).get(0, 0.0)
    Jq = p.internal_couplings[0][2] if p.internal_couplings else 0.0
    a1, a2 = omega - p.onsite[0], omega - p.onsite[1]
    den = a1 * a2 - Jq * Jq
    if abs(den) < POLE_TOL:
        raise PoleError(f"effective potential of model B has a pole at omega={omega}")
    if pt:
        return EffectivePotential(complex(_pt_real_b(model, omega)), True)
    num = a1 * J2 * J2 + a2 * J1 * J1 + 2 * J1 * J2 * Jq
    return EffectivePotential(num / den, False)


def effective_potential_c(model: ScatteringModel, omega: float) -> EffectivePotential:
    """``G_d = J_perp^2 / (w - E_d - i gamma)``; never real once gamma != 0."""
    _require(model, "C")
    Jq = _c_coupling(model)
    a1 = omega - model.defects.onsite[0]
    if abs(a1) < POLE_TOL:
        if Jq == 0.0:
            return EffectivePotential(0j, True)
        raise PoleError(f"G_d has a pole at omega={omega}")
    val = Jq * Jq / a1
    return EffectivePotential(val, val.imag == 0.0)


def effective_potential(model: ScatteringModel, omega: float) -> EffectivePotential:
    return {"A": effective_potential_a, "B": effective_potential_b,
            "C": effective_potential_c}[_closed(model)](model, omega)


# ---------------------------------------------------------------------------
# amplitudes

def _flags(den: complex, cancelled: complex | None, scale: float) -> tuple[str, ...]:
    out = []
    if abs(den) <= FLAG_TOL * scale:
        out.append("pole")
    if cancelled is not None and abs(cancelled) <= FLAG_TOL * scale:
        out.append("bound-state")
    return tuple(out)


def _defect_amplitudes(model: ScatteringModel, omega: float, k: float, t: complex, r: complex):
    """Recover defect amplitudes from the stationary equations by least squares.

    Rows are the defect equations plus the chain equations at attached sites;
    the system is consistent, so this is exact away from bound states and the
    minimum-norm choice at them.
    """
    J = model.J
    d = model.defects
    ns = d.attached_sites()
    lo, hi = min(ns), max(ns)

    def A(n):
        if n <= lo:
            return cmath.exp(1j * k * n) + r * cmath.exp(-1j * k * n)
        if n >= hi:
            return t * cmath.exp(1j * k * n)
        raise ValueError("interior chain sites are not used by closed-form variants")

    nd = len(d.sites)
    rows, rhs = [], []
    for j in range(nd):
        row = np.zeros(nd, complex)
        row[j] = omega - d.onsite[j]
        for i1, i2, c in d.internal_couplings:
            if i1 == j:
                row[i2] -= c
            elif i2 == j:
                row[i1] -= c
        rows.append(row)
        rhs.append(sum(c * A(n) for (dd, n, c) in d.attachments if dd == j))
    for n in ns:
        row = np.zeros(nd, complex)
        for dd, nn, c in d.attachments:
            if nn == n:
                row[dd] += c
        rows.append(row)
        rhs.append(omega * A(n) - J * (A(n - 1) + A(n + 1)))
    sol = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    return complex(sol[0]), complex(sol[1])


def amplitudes_a(model: ScatteringModel, omega: float) -> ScatteringSolution:
    """Transmission/reflection of model A through its effective potential on sites 0, 1."""
    _require(model, "A")
    J = model.J
    k = wavenumber(J, omega)
    s, e = math.sin(k), cmath.exp(1j * k)
    num, den, cancelled = _parts_a(model, omega)
    D = num * (1 + e) + 1j * J * s * den
    t = 1j * s * (num + J * den) / D
    r = -num * (1 + e + 1j * e * s) / D
    B1, B2 = _defect_amplitudes(model, omega, k, t, r)
    return ScatteringSolution(omega, k, t, r, B1, B2, _flags(den, cancelled, _scale(model, omega)))


def amplitudes_b(model: ScatteringModel, omega: float) -> ScatteringSolution:
    """Model B via the general complex effective potential on site 0 (any gain/loss)."""
    _require(model, "B")
    J = model.J
    k = wavenumber(J, omega)
    s = math.sin(k)
    num, den, cancelled = _parts_b(model, omega)
    D = num + 2j * J * s * den
    t = 2j * J * s * den / D
    # single attachment site: A_0 = 1 + r must equal t
    r = -num / D
    B1, B2 = _defect_amplitudes(model, omega, k, t, r)
    return ScatteringSolution(omega, k, t, r, B1, B2, _flags(den, cancelled, _scale(model, omega)))


def amplitudes_c(model: ScatteringModel, omega: float) -> ScatteringSolution:
    """Model C, with ``G`` and its partner ``J_perp^2 / (w - e_2)`` multiplied through."""
    _require(model, "C")
    J = model.J
    k = wavenumber(J, omega)
    s, e = math.sin(k), cmath.exp(1j * k)
    em = 1 / e
    Jq = _c_coupling(model)
    a1, a2 = omega - model.defects.onsite[0], omega - model.defects.onsite[1]
    if Jq == 0.0:
        t, r, flags = 1 + 0j, 0j, ()
    else:
        q = Jq * Jq
        D = (q - J * em * a1) * (q - J * em * a2) - J * J * a1 * a2
        t = em * (-2j * J * J * s) * a1 * a2 / D
        r = (J * J * a1 * a2 - (q - J * e * a1) * (q - J * em * a2)) / D
        flags = _flags(min(abs(a1), abs(a2)), None, _scale(model, omega))
    B1, B2 = _defect_amplitudes(model, omega, k, t, r) if Jq != 0.0 else (0j, 0j)
    return ScatteringSolution(omega, k, t, r, B1, B2, flags)


def _closed(model: ScatteringModel) -> str:
    if model.variant not in ("A", "B", "C"):
        raise UnsupportedAnalysisError("closed forms exist only for variants A, B and C")
    return model.variant


def amplitudes(model: ScatteringModel, omega: float) -> ScatteringSolution:
    return {"A": amplitudes_a, "B": amplitudes_b, "C": amplitudes_c}[_closed(model)](model, omega)


# ---------------------------------------------------------------------------
# Hermitian reference formulas

def fano_single(J: float, J1: float, E_d1: float, omega: float) -> tuple[float, FanoParameters]:
    """Single side-coupled level: transmission and its Fano parametrisation (q = 0)."""
    k = wavenumber(J, omega)
    s = math.sin(k)
    x = omega - E_d1
    if J1 == 0.0:
        return 1.0, FanoParameters(math.copysign(math.inf, x), 0.0)
    w = J1 * J1 / (2 * J * s)
    T = x * x / (x * x + w * w)
    return T, FanoParameters(2 * J * s * x / (J1 * J1), 0.0)


def fano_formula(p: FanoParameters) -> float:
    """``(alpha + q)^2 / (alpha^2 + 1)``."""
    if math.isinf(p.alpha_k):
        return 1.0
    return (p.alpha_k + p.q) ** 2 / (p.alpha_k ** 2 + 1)


def fano_double(J: float, J_par: float, E_d: float, J_perp: float, omega: float) -> float:
    """Two identical Hermitian defects on one site, linked by ``J_perp``."""
    k = wavenumber(J, omega)
    s = math.sin(k)
    y = omega - E_d - J_perp
    w = J_par * J_par / (J * s)
    if y == 0.0 and w == 0.0:
        return 1.0
    return y * y / (y * y + w * w)


def transmission_b_pt(J: float, J_par: float, E_d: float, gamma: float, J_perp: float, omega: float) -> float:
    """Balanced model B transmission written in terms of gamma^2 only."""
    s = math.sin(wavenumber(J, omega))
    x = omega - E_d
    u = (x * x + gamma * gamma - J_perp * J_perp) ** 2
    v = (J_par * J_par / (J * s) * (x + J_perp)) ** 2
    return u / (u + v)


def reflection_b_pt(J: float, J_par: float, E_d: float, gamma: float, J_perp: float, omega: float) -> float:
    s = math.sin(wavenumber(J, omega))
    x = omega - E_d
    u = (x * x + gamma * gamma - J_perp * J_perp) ** 2
    v = (J_par * J_par / (J * s) * (x + J_perp)) ** 2
    return v / (u + v)


# ---------------------------------------------------------------------------
# resonance conditions

def _out_of_band(model: ScatteringModel, roots) -> tuple[float, ...]:
    edge = 2 * abs(model.J)
    return tuple(w for w in roots if abs(w) >= edge)


def resonances_a(model: ScatteringModel) -> ResonanceSet:
    """Perfect reflection where ``F_d + J = 0``, perfect transmission where ``F_d = 0``.

    At ``gamma = 0`` the quadratic's second root ``E_d`` coincides with the
    cancelled bound-state factor and is not a zero of ``t``; it is dropped and
    there is no perfect transmission.
    """
    _require(model, "A")
    if not check_pt_symmetry(model).is_pt_symmetric:
        raise UnsupportedAnalysisError("resonance roots are derived for the balanced model A only")
    J = model.J
    Jp = model.defects.attachments[0][2]
    E, g = model.defects.onsite[0].real, model.defects.onsite[0].imag
    gc = Jp * Jp / abs(J)
    disc = Jp ** 4 - J * J * g * g
    refl: tuple[float, ...] = ()
    trans: tuple[float, ...] = ()
    degenerate = False
    if Jp != 0.0:
        if disc >= 0:
            sq = math.sqrt(disc)
            roots = sorted({E - (Jp * Jp + sq) / J, E - (Jp * Jp - sq) / J})
            degenerate = len(roots) == 1
            if g == 0.0:
                roots = [w for w in roots if w != E]
            refl = tuple(roots)
        if g != 0.0:
            trans = (E,)
    return ResonanceSet(refl, trans, gc, disc, degenerate, _out_of_band(model, refl + trans))


def resonances_b(model: ScatteringModel) -> ResonanceSet:
    """Zeros at ``E_d +- sqrt(J_perp^2 - gamma^2)``, unit transmission at ``E_d - J_perp``."""
    _require(model, "B")
    if not check_pt_symmetry(model).is_pt_symmetric:
        raise UnsupportedAnalysisError("closed-form roots exist only for the balanced model B")
    d = model.defects
    Jp = d.couplings_of(0)[0]
    Jq = d.internal_couplings[0][2]
    E, g = d.onsite[0].real, d.onsite[0].imag
    disc = Jq * Jq - g * g
    refl: tuple[float, ...] = ()
    trans: tuple[float, ...] = ()
    degenerate = False
    if Jp != 0.0:
        if disc >= 0:
            sq = math.sqrt(disc)
            roots = sorted({E - sq, E + sq})
            degenerate = len(roots) == 1
            if g == 0.0 and Jq != 0.0:
                roots = [w for w in roots if w != E - Jq]
            refl = tuple(roots)
        if g != 0.0:
            trans = (E - Jq,)
    return ResonanceSet(refl, trans, None, disc, degenerate, _out_of_band(model, refl + trans))


def resonances(model: ScatteringModel) -> ResonanceSet:
    if model.variant == "A":
        return resonances_a(model)
    if model.variant == "B":
        return resonances_b(model)
    raise UnsupportedAnalysisError(f"no closed-form resonance conditions for variant {model.variant}")
