"""Direct boundary-matched solve of the stationary scattering equations.

Independent ground truth for the closed forms: works for any defect graph,
uses only the model description and the dispersion relation, and never
touches the ``analytic`` module.

Unknowns are ordered ``(r, t, A_nmin..A_nmax, B_1..B_nd)``. Rows are the bulk
chain equations on the window (with the plane-wave ansatz substituted just
outside it), the defect equations, and two lead-matching rows which, through
``w - J e^{-+ik} = J e^{+-ik}``, pin ``A_nmin`` and ``A_nmax`` to the ansatz.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import zgesc2, zgetc2

from .errors import ScatteringError, SingularSystemError
from .model import ScatteringModel, wavenumber

COND_LIMIT = 1e12
RESIDUAL_REL = 1e-10


@dataclass(frozen=True)
class LinearScatteringSystem:
    window: tuple[int, int]
    unknowns: tuple[str, ...]
    matrix: np.ndarray
    rhs: np.ndarray
    k: float
    omega: float


@dataclass(frozen=True)
class OracleSolution:
    omega: float
    k: float
    t: complex
    r: complex
    A: dict
    B: tuple[complex, ...]
    residual_norm: float
    condition_estimate: float
    window: tuple[int, int]

    @property
    def B1(self) -> complex:
        return self.B[0]

    @property
    def B2(self) -> complex:
        return self.B[1] if len(self.B) > 1 else 0j

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    @property
    def phase_sigma(self) -> float:
        return cmath.phase(self.t)


def default_window(model: ScatteringModel, pad: int = 0) -> tuple[int, int]:
    ns = model.defects.attached_sites()
    return min(ns) - 1 - pad, max(ns) + 1 + pad


def assemble(model: ScatteringModel, omega: float, window: tuple[int, int] | None = None,
             pad: int = 0) -> LinearScatteringSystem:
    J = model.J
    k = wavenumber(J, omega)
    d = model.defects
    lo, hi = window if window is not None else default_window(model, pad)
    ns = d.attached_sites()
    if lo > min(ns) - 1 or hi < max(ns) + 1:
        raise ValueError(f"window [{lo}, {hi}] must extend one site past every attachment")
    W = hi - lo + 1
    nd = len(d.sites)
    n = W + nd + 2
    M = np.zeros((n, n), complex)
    b = np.zeros(n, complex)
    col_r, col_t = 0, 1
    col_A = {site: 2 + i for i, site in enumerate(range(lo, hi + 1))}
    col_B = [2 + W + j for j in range(nd)]

    def plane(m):
        return cmath.exp(1j * k * m)

    for i, site in enumerate(range(lo, hi + 1)):
        row = i
        M[row, col_A[site]] = omega
        for m in (site - 1, site + 1):
            if m in col_A:
                M[row, col_A[m]] -= J
            elif m < lo:
                b[row] += J * plane(m)
                M[row, col_r] -= J / plane(m)
            else:
                M[row, col_t] -= J * plane(m)
        for dd, nn, c in d.attachments:
            if nn == site:
                M[row, col_B[dd]] -= c
    for j in range(nd):
        row = W + j
        M[row, col_B[j]] = omega - d.onsite[j]
        for dd, nn, c in d.attachments:
            if dd == j:
                M[row, col_A[nn]] -= c
        for i1, i2, c in d.internal_couplings:
            if i1 == j:
                M[row, col_B[i2]] -= c
            elif i2 == j:
                M[row, col_B[i1]] -= c
    row = W + nd
    M[row, col_A[lo]] = 1.0
    M[row, col_r] = -1 / plane(lo)
    b[row] = plane(lo)
    M[row + 1, col_A[hi]] = 1.0
    M[row + 1, col_t] = -plane(hi)

    unknowns = ("r", "t") + tuple(f"A{s}" for s in range(lo, hi + 1)) + tuple(f"B{j + 1}" for j in range(nd))
    return LinearScatteringSystem((lo, hi), unknowns, M, b, k, omega)


def defect_modes(model: ScatteringModel) -> np.ndarray:
    """Eigenfrequencies of the isolated defect block."""
    d = model.defects
    H = np.diag(np.array(d.onsite, complex))
    for i, j, c in d.internal_couplings:
        H[i, j] += c
        H[j, i] += c
    return np.linalg.eigvals(H)


def full_pivot_solve(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    """LU with complete pivoting (LAPACK getc2/gesc2)."""
    lu, ipiv, jpiv, _info = zgetc2(M)
    x, scale = zgesc2(lu, b.copy(), ipiv, jpiv)
    return x / scale


def solve_scattering(model: ScatteringModel, omega: float, window: tuple[int, int] | None = None,
                     pad: int = 0) -> OracleSolution:
    sys_ = assemble(model, omega, window, pad)
    M, b = sys_.matrix, sys_.rhs
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        modes = defect_modes(model)
        nearest = complex(modes[np.argmin(np.abs(modes - omega))])
        raise SingularSystemError(
            f"scattering system is singular at omega={omega} (condition {cond:.3g}); "
            f"nearest isolated defect mode {nearest:.6g}",
            omega, cond, nearest)
    x = full_pivot_solve(M, b)
    res = float(np.linalg.norm(M @ x - b))
    if res > RESIDUAL_REL * np.linalg.norm(M, 2) * max(np.linalg.norm(x), 1.0):
        raise ScatteringError(f"residual {res:.3g} too large at omega={omega}")
    lo, hi = sys_.window
    W = hi - lo + 1
    A = {site: complex(x[2 + i]) for i, site in enumerate(range(lo, hi + 1))}
    B = tuple(complex(v) for v in x[2 + W:])
    return OracleSolution(omega, sys_.k, complex(x[1]), complex(x[0]), A, B, res, cond, sys_.window)


def lead_residuals(model: ScatteringModel, sol: OracleSolution) -> tuple[float, float]:
    """Bulk-equation residuals one site outside the window, using the solved r and t."""
    J, w, k = model.J, sol.omega, sol.k
    lo, hi = sol.window

    def left(m):
        return cmath.exp(1j * k * m) + sol.r * cmath.exp(-1j * k * m)

    def right(m):
        return sol.t * cmath.exp(1j * k * m)

    res_l = w * left(lo - 1) - J * (left(lo - 2) + sol.A[lo])
    res_r = w * right(hi + 1) - J * (sol.A[hi] + right(hi + 2))
    return abs(res_l), abs(res_r)
