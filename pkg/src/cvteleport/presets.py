"""Hard-coded parameter sets reproducing the reference fidelity figures."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .imperfections import ImperfectionConfig
from .optimize import Objective

DEFAULT_KAPPA_GRID = (0.1, 3.0, 0.05)


@dataclass(frozen=True)
class CurveSpec:
    label: str
    order: int
    imperfections: ImperfectionConfig
    objective: Objective


@dataclass(frozen=True)
class InsetSpec:
    """Optimal-envelope inset: which curve and at which coupling."""

    label: str
    kappa: float


@dataclass(frozen=True)
class FigurePreset:
    name: str
    title: str
    curves: Tuple[CurveSpec, ...]
    kappa_grid: Tuple[float, float, float] = DEFAULT_KAPPA_GRID
    inset: Optional[InsetSpec] = None


def _coherent(**kw):
    return CurveSpec(objective=Objective("coherent"), **kw)


def _qubit(**kw):
    return CurveSpec(objective=Objective("qubit"), **kw)


_S_LABELS = ((1.0, "s1.00"), (0.5, "s0.50"), (0.25, "s0.25"), (0.1, "s0.10"))

FIGURES = {
    "fig1": FigurePreset(
        name="fig1",
        title="Coherent-state fidelity vs coupling, no squeezing, no losses",
        curves=tuple(
            _coherent(label=f"N{n}", order=n, imperfections=ImperfectionConfig())
            for n in (0, 1, 2, 3)
        ),
        inset=InsetSpec("N3", 2.0),
    ),
    "fig2a": FigurePreset(
        name="fig2a",
        title="Coherent-state fidelity vs coupling for squeezed light",
        curves=tuple(
            _coherent(label=lab, order=3, imperfections=ImperfectionConfig(s=s))
            for s, lab in _S_LABELS
        ),
        inset=InsetSpec("s0.10", 2.0),
    ),
    "fig2b": FigurePreset(
        name="fig2b",
        title="Coherent-state fidelity vs coupling with decay and loss",
        curves=tuple(
            _coherent(label=lab, order=3,
                      imperfections=ImperfectionConfig(s=s, beta=0.1, epsilon=0.1))
            for s, lab in _S_LABELS
        ),
    ),
    "fig3a": FigurePreset(
        name="fig3a",
        title="Qubit fidelity vs coupling for squeezed light",
        curves=tuple(
            _qubit(label=lab, order=3, imperfections=ImperfectionConfig(s=s))
            for s, lab in _S_LABELS[1:]
        ),
        inset=InsetSpec("s0.10", 2.0),
    ),
    "fig3b": FigurePreset(
        name="fig3b",
        title="Qubit fidelity vs coupling with decay and loss",
        curves=(
            _qubit(label="s0.10", order=3,
                   imperfections=ImperfectionConfig(s=0.1, beta=0.1, epsilon=0.1)),
        ),
    ),
}
