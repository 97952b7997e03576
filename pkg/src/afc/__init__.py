"""Atomic-frequency-comb quantum memory toolkit.

Analytic efficiency model, linearized Maxwell-Bloch storage solver,
multi-temporal-mode analysis, material capacity planning, and a CLI that
emits figure-ready CSV/JSON data with rendered plots.
"""

from .comb import (CombParams, CombConfigError, DiscretizedComb,
                   QuadratureError, comb_density, comb_ft, discretize_comb,
                   effective_depth, finesse_of)
from .analytic import (EfficiencyPoint, dephasing_amplitude,
                       efficiency_backward, efficiency_forward,
                       figure2_curves, figure3_curves, optimal_finesse,
                       output_amplitude, output_phase, transmitted_amplitude)
from .solver import (AtomicState, ConvergenceReport, FieldEnvelope,
                     GaussianPulseSpec, SimConfig, SimResult, SolverError,
                     calibrate_coupling, convergence_study, default_input,
                     excitation_norm, flip_to_backward, forward_echo,
                     gaussian_pulse, propagate_backward, propagate_forward,
                     simulate_storage)
from .multimode import (CapacityError, CrosstalkReport, ModeTrain,
                        make_mode_train, matched_filter_efficiencies,
                        mode_capacity, run_mode_train)
from .capacity import (CapacityReport, MaterialSpec, PlanningError,
                       crib_equivalent_depth, material_presets, plan_memory,
                       preset)

__version__ = "0.1.0"

__all__ = [
    "CombParams", "CombConfigError", "DiscretizedComb", "QuadratureError",
    "comb_density", "comb_ft", "discretize_comb", "effective_depth",
    "finesse_of",
    "EfficiencyPoint", "dephasing_amplitude", "efficiency_backward",
    "efficiency_forward", "figure2_curves", "figure3_curves",
    "optimal_finesse", "output_amplitude", "output_phase",
    "transmitted_amplitude",
    "AtomicState", "ConvergenceReport", "FieldEnvelope", "GaussianPulseSpec",
    "SimConfig", "SimResult", "SolverError", "calibrate_coupling",
    "convergence_study", "default_input", "excitation_norm",
    "flip_to_backward", "forward_echo", "gaussian_pulse",
    "propagate_backward", "propagate_forward", "simulate_storage",
    "CapacityError", "CrosstalkReport", "ModeTrain", "make_mode_train",
    "matched_filter_efficiencies", "mode_capacity", "run_mode_train",
    "CapacityReport", "MaterialSpec", "PlanningError",
    "crib_equivalent_depth", "material_presets", "plan_memory", "preset",
]
