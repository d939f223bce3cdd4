"""Lattice scattering models: a tight-binding chain with side-coupled defects.

Three closed-form variants are provided, plus a ``Generic`` tag for
arbitrary defect graphs that only the numerical oracle can solve.

* ``A``: two defects, each coupled to chain sites 0 and 1 with ``J_par``.
* ``B``: two defects coupled to site 0 only (``J1``, ``J2``), linked by ``J_perp``.
* ``C``: defect 1 on site 0, defect 2 on site 1, both with ``J_perp``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import InvalidModelError, OutOfBandError

PT_TOL = 1e-12
VARIANTS = ("A", "B", "C", "Generic")


@dataclass(frozen=True)
class ChainLead:
    J: float

    def __post_init__(self):
        J = float(self.J)
        if not math.isfinite(J) or J == 0.0:
            raise InvalidModelError(f"chain hopping must be finite and nonzero, got J={self.J!r}")
        object.__setattr__(self, "J", J)

    @property
    def band(self) -> tuple[float, float]:
        w = 2.0 * abs(self.J)
        return (-w, w)


@dataclass(frozen=True)
class DefectBlock:
    """Side-coupled defect sites.

    ``internal_couplings`` holds ``(i, j, c)`` with defect indices ``i != j``;
    ``attachments`` holds ``(defect index, chain site, c)``.
    """

    sites: tuple[str, ...]
    onsite: tuple[complex, ...]
    internal_couplings: tuple[tuple[int, int, float], ...] = ()
    attachments: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        sites = tuple(str(s) for s in self.sites)
        onsite = tuple(complex(e) for e in self.onsite)
        if len(sites) != len(onsite):
            raise InvalidModelError("one onsite energy per defect site is required")
        if not sites:
            raise InvalidModelError("defect block needs at least one site")
        nd = len(sites)
        internal = tuple((int(i), int(j), float(c)) for i, j, c in self.internal_couplings)
        attach = tuple((int(d), int(n), float(c)) for d, n, c in self.attachments)
        for e in onsite:
            if not (math.isfinite(e.real) and math.isfinite(e.imag)):
                raise InvalidModelError(f"non-finite onsite energy {e}")
        for i, j, c in internal:
            if not (0 <= i < nd and 0 <= j < nd) or i == j:
                raise InvalidModelError(f"bad internal coupling ({i}, {j})")
            if not math.isfinite(c):
                raise InvalidModelError("non-finite internal coupling")
        for d, _n, c in attach:
            if not 0 <= d < nd:
                raise InvalidModelError(f"attachment refers to unknown defect {d}")
            if not math.isfinite(c):
                raise InvalidModelError("non-finite attachment coupling")
        if not attach:
            raise InvalidModelError("defect block must attach to the chain somewhere")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "onsite", onsite)
        object.__setattr__(self, "internal_couplings", internal)
        object.__setattr__(self, "attachments", attach)

    def attached_sites(self) -> tuple[int, ...]:
        return tuple(sorted({n for _d, n, _c in self.attachments}))

    def couplings_of(self, defect: int) -> dict[int, float]:
        """Chain site -> summed coupling for one defect."""
        out: dict[int, float] = {}
        for d, n, c in self.attachments:
            if d == defect:
                out[n] = out.get(n, 0.0) + c
        return out


@dataclass(frozen=True)
class ScatteringModel:
    lead: ChainLead
    defects: DefectBlock
    variant: str = "Generic"
    # builder arguments, kept so sweeps can rebuild with one parameter changed
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidModelError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        _check_topology(self)

    @property
    def J(self) -> float:
        return self.lead.J


def _check_topology(model: ScatteringModel) -> None:
    v = model.variant
    if v == "Generic":
        return
    d = model.defects
    if len(d.sites) != 2:
        raise InvalidModelError(f"variant {v} needs exactly two defects")
    c0, c1 = d.couplings_of(0), d.couplings_of(1)
    if v == "A":
        ok = (set(c0) == {0, 1} and set(c1) == {0, 1}
              and len({c0[0], c0[1], c1[0], c1[1]}) == 1 and not d.internal_couplings)
    elif v == "B":
        ok = set(c0) <= {0} and set(c1) <= {0} and bool(c0 or c1)
    else:
        ok = (set(c0) == {0} and set(c1) == {1} and c0[0] == c1[1]
              and not d.internal_couplings)
    if not ok:
        raise InvalidModelError(f"attachment topology does not match variant {v}")


def _check_finite(**kw: float) -> None:
    for name, val in kw.items():
        if not math.isfinite(float(val)):
            raise InvalidModelError(f"{name} must be finite, got {val!r}")


def build_model_a(J: float, J_par: float, E_d: float, gamma: float) -> ScatteringModel:
    _check_finite(J=J, J_par=J_par, E_d=E_d, gamma=gamma)
    block = DefectBlock(
        sites=("d1", "d2"),
        onsite=(complex(E_d, gamma), complex(E_d, -gamma)),
        attachments=((0, 0, J_par), (0, 1, J_par), (1, 0, J_par), (1, 1, J_par)),
    )
    return ScatteringModel(ChainLead(J), block, "A",
                           dict(J=J, J_par=J_par, E_d=E_d, gamma=gamma))


def build_model_b(J: float, J1: float, J2: float, E_d1: float, E_d2: float,
                  gamma1: float, gamma2: float, J_perp: float) -> ScatteringModel:
    """Two defects on site 0. ``gamma2`` is stored as given: PT needs ``gamma2 == -gamma1``."""
    _check_finite(J=J, J1=J1, J2=J2, E_d1=E_d1, E_d2=E_d2,
                  gamma1=gamma1, gamma2=gamma2, J_perp=J_perp)
    block = DefectBlock(
        sites=("d1", "d2"),
        onsite=(complex(E_d1, gamma1), complex(E_d2, gamma2)),
        internal_couplings=((0, 1, J_perp),),
        attachments=((0, 0, J1), (1, 0, J2)),
    )
    return ScatteringModel(ChainLead(J), block, "B",
                           dict(J=J, J1=J1, J2=J2, E_d1=E_d1, E_d2=E_d2,
                                gamma1=gamma1, gamma2=gamma2, J_perp=J_perp))


def build_model_b_pt(J: float, J_par: float, E_d: float, gamma: float, J_perp: float) -> ScatteringModel:
    """Balanced variant B: ``J1 = J2 = J_par``, ``E_d1 = E_d2 = E_d``, ``gamma2 = -gamma``."""
    return build_model_b(J, J_par, J_par, E_d, E_d, gamma, -gamma, J_perp)


def build_model_c(J: float, J_perp: float, E_d: float, gamma: float) -> ScatteringModel:
    _check_finite(J=J, J_perp=J_perp, E_d=E_d, gamma=gamma)
    block = DefectBlock(
        sites=("d1", "d2"),
        onsite=(complex(E_d, gamma), complex(E_d, -gamma)),
        attachments=((0, 0, J_perp), (1, 1, J_perp)),
    )
    return ScatteringModel(ChainLead(J), block, "C",
                           dict(J=J, J_perp=J_perp, E_d=E_d, gamma=gamma))


def build_generic(J: float, onsite, attachments, internal_couplings=()) -> ScatteringModel:
    block = DefectBlock(
        sites=tuple(f"d{i + 1}" for i in range(len(onsite))),
        onsite=tuple(onsite),
        internal_couplings=tuple(internal_couplings),
        attachments=tuple(attachments),
    )
    return ScatteringModel(ChainLead(J), block, "Generic")


# parameter names accepted by ``with_param`` for each variant
SWEEPABLE = {
    "A": ("gamma", "J_par", "E_d"),
    "B": ("gamma", "J_perp", "J1", "J2", "E_d1", "E_d2", "gamma1", "gamma2"),
    "C": ("gamma", "J_perp", "E_d"),
}


def with_param(model: ScatteringModel, name: str, value: float) -> ScatteringModel:
    """Rebuild ``model`` with one builder parameter replaced.

    For variant B, ``gamma`` sets the balanced pair ``gamma1 = gamma``,
    ``gamma2 = -gamma``.
    """
    v = model.variant
    if v not in SWEEPABLE or name not in SWEEPABLE[v]:
        raise InvalidModelError(f"parameter {name!r} cannot be varied on variant {v}")
    p = dict(model.params)
    if v == "B" and name == "gamma":
        p["gamma1"], p["gamma2"] = value, -value
    else:
        p[name] = value
    builder = {"A": build_model_a, "B": build_model_b, "C": build_model_c}[v]
    return builder(**p)


@dataclass(frozen=True)
class PTSymmetryReport:
    is_pt_symmetric: bool
    violated_conditions: tuple[str, ...] = ()
    determined: bool = True


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= PT_TOL


def check_pt_symmetry(model: ScatteringModel) -> PTSymmetryReport:
    """Test the balanced gain/loss conditions for the model's mirror operation.

    Generic models have no defined parity operator, so the report is
    marked undetermined (and not symmetric).
    """
    if model.variant == "Generic":
        return PTSymmetryReport(False, ("undetermined",), determined=False)
    d = model.defects
    e1, e2 = d.onsite
    c0, c1 = d.couplings_of(0), d.couplings_of(1)
    bad = []
    if model.variant == "B":
        if not _close(c0.get(0, 0.0), c1.get(0, 0.0)):
            bad.append("coupling-balance")
    else:
        # A: all four links equal; C: d1-site0 equals d2-site1 (mirror between sites 0 and 1)
        vals = list(c0.values()) + list(c1.values())
        if max(vals) - min(vals) > PT_TOL:
            bad.append("coupling-balance")
    if not _close(e1.real, e2.real):
        bad.append("energy-balance")
    if not _close(e1.imag, -e2.imag):
        bad.append("gamma-balance")
    return PTSymmetryReport(not bad, tuple(bad))


def wavenumber(J: float, omega: float) -> float:
    """Positive wavenumber of a left-incident plane wave, ``omega = 2 J cos k``."""
    if J == 0:
        raise InvalidModelError("J must be nonzero")
    if not math.isfinite(omega) or abs(omega) >= 2.0 * abs(J):
        raise OutOfBandError(f"omega={omega!r} is not inside the open band (-{2 * abs(J)}, {2 * abs(J)})")
    return math.acos(omega / (2.0 * J))
