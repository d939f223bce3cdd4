"""Closed form vs. linear-solve agreement over a frequency grid."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import analytic, oracle
from .errors import ScatteringError
from .model import ScatteringModel


@dataclass
class CompareReport:
    omegas: list[float] = field(default_factory=list)
    dt: list[float] = field(default_factory=list)
    dr: list[float] = field(default_factory=list)
    excluded: list[tuple[float, str]] = field(default_factory=list)

    @property
    def max_dt(self) -> float:
        return max(self.dt, default=0.0)

    @property
    def max_dr(self) -> float:
        return max(self.dr, default=0.0)

    @property
    def max_deviation(self) -> float:
        return max(self.max_dt, self.max_dr)


def compare(model: ScatteringModel, omega_grid) -> CompareReport:
    """Per-frequency ``|t_a - t_o|`` and ``|r_a - r_o|``.

    Flagged closed-form rows (poles, bound states) and oracle failures are
    listed in ``excluded`` instead of entering the maxima.
    """
    rep = CompareReport()
    for w in omega_grid:
        w = float(w)
        try:
            a = analytic.amplitudes(model, w)
        except ScatteringError as exc:
            rep.excluded.append((w, f"analytic: {exc}"))
            continue
        if a.flags:
            rep.excluded.append((w, ",".join(a.flags)))
            continue
        try:
            o = oracle.solve_scattering(model, w)
        except ScatteringError as exc:
            rep.excluded.append((w, f"oracle: {exc}"))
            continue
        rep.omegas.append(w)
        rep.dt.append(abs(a.t - o.t))
        rep.dr.append(abs(a.r - o.r))
    return rep
