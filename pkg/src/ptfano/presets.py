"""Named parameter sets, keyed by CLI preset name.

Each entry is ``(variant, builder kwargs, optional (axis, values))``. Variant B
entries use the full non-balanced parameter list.
"""

from __future__ import annotations

from .model import ScatteringModel, build_model_a, build_model_b, build_model_c


def _b(J1, J2, E1, E2, g1, g2, Jq, J=0.5):
    return dict(J=J, J1=J1, J2=J2, E_d1=E1, E_d2=E2, gamma1=g1, gamma2=g2, J_perp=Jq)


PRESETS: dict[str, tuple[str, dict, tuple[str, tuple[float, ...]] | None]] = {
    "fig2a": ("B", _b(0.4, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0), None),
    "fig2c": ("B", _b(0.4, 0.4, 0.5, 0.5, 0.0, 0.0, 0.0), ("J_perp", (0.0, 0.2))),
    "fig2e": ("A", dict(J=0.5, J_par=0.3, E_d=0.5, gamma=0.0), None),
    "fig3": ("A", dict(J=0.5, J_par=0.3, E_d=0.5, gamma=0.0), ("gamma", (0.0, 0.1, 0.2))),
    "fig4": ("B", _b(0.4, 0.4, 0.5, 0.5, 0.0, 0.0, 0.0), ("gamma", (0.0, 0.05, 0.1))),
    "fig4c": ("B", _b(0.4, 0.4, 0.5, 0.5, 0.05, -0.05, 0.0), ("J_perp", (0.02, 0.1))),
    "fig5a": ("B", _b(0.4, 0.4, 0.4, 0.4, 0.05, -0.15, 0.0), None),
    "fig5b": ("B", _b(0.4, 0.4, 0.4, -0.5, 0.05, -0.05, 0.0), None),
    "fig5c": ("B", _b(0.4, 0.6, 0.4, 0.4, 0.05, -0.05, 0.0), None),
    "fig5d": ("B", _b(0.4, 0.6, 0.4, -0.5, 0.05, -0.15, 0.0), None),
    "fig6": ("C", dict(J=0.5, J_perp=0.3, E_d=0.2, gamma=0.0), ("gamma", (0.0, 0.1))),
}

BUILDERS = {"A": build_model_a, "B": build_model_b, "C": build_model_c}


def preset_model(name: str) -> ScatteringModel:
    variant, params, _ = PRESETS[name]
    return BUILDERS[variant](**params)
