"""Simulator and optimizer for multimode light-to-atom quantum teleportation."""

from .errors import (CVTeleportError, DomainError, InfeasibleError,
                     NumericError, RepresentationError, StructuralError)
from .gaussian import (BasisLayout, DiagonalState, Moments, QuadExpansion,
                       gaussian_coherent_fidelity, symplectic_defect,
                       to_shot_units, variance_of)
from .imperfections import (ImperfectionConfig, LossPlacement,
                            apply_atomic_decay, apply_light_loss,
                            initial_state, loss_ancillas_needed)
from .merit import (QubitChannelParams, average_coherent_fidelity,
                    coherent_fidelity, qubit_average_fidelity,
                    qubit_fidelity_oracle, qubit_sigma2)
from .modes import (DEFAULT_OMEGA_T, Envelope, Polarity, TemporalModeId,
                    gram_matrix, mode_normalization, mode_overlap,
                    sample_envelope, shifted_legendre)
from .optimize import (Objective, OptimResult, QuadraticForm, kappa_sweep,
                       minimize_on_sphere, noise_quadratic_form,
                       optimize_point)
from .presets import FIGURES, CurveSpec, FigurePreset, InsetSpec
from .protocol import (FinalState, PayloadLayout, ProtocolParams,
                       bell_observable_expansions, feedback_coefficient_f,
                       fidelity_ceiling, final_atomic_state)
from .scattering import (ScatteringMap, alpha_coupling, atomic_output_variance,
                         build_scattering_map)

__version__ = "0.1.0"

__all__ = [
    "CVTeleportError", "DomainError", "InfeasibleError", "NumericError",
    "RepresentationError", "StructuralError",
    "BasisLayout", "DiagonalState", "Moments", "QuadExpansion",
    "gaussian_coherent_fidelity", "symplectic_defect", "to_shot_units",
    "variance_of",
    "ImperfectionConfig", "LossPlacement", "apply_atomic_decay",
    "apply_light_loss", "initial_state", "loss_ancillas_needed",
    "QubitChannelParams", "average_coherent_fidelity", "coherent_fidelity",
    "qubit_average_fidelity", "qubit_fidelity_oracle", "qubit_sigma2",
    "DEFAULT_OMEGA_T", "Envelope", "Polarity", "TemporalModeId",
    "gram_matrix", "mode_normalization", "mode_overlap", "sample_envelope",
    "shifted_legendre",
    "Objective", "OptimResult", "QuadraticForm", "kappa_sweep",
    "minimize_on_sphere", "noise_quadratic_form", "optimize_point",
    "FIGURES", "CurveSpec", "FigurePreset", "InsetSpec",
    "FinalState", "PayloadLayout", "ProtocolParams",
    "bell_observable_expansions", "feedback_coefficient_f", "fidelity_ceiling",
    "final_atomic_state",
    "ScatteringMap", "alpha_coupling", "atomic_output_variance",
    "build_scattering_map",
    "__version__",
]
