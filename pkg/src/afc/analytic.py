"""Closed-form predictions for AFC storage.

Transmission, backward-retrieval amplitude and efficiency, the forward-echo
efficiency bound, the optimal finesse for a given depth, and the output
phase law.  All functions are pure; the solver module cross-checks them
numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .comb import LN2, CombParams, effective_depth


@dataclass(frozen=True)
class EfficiencyPoint:
    """One (depth, finesse) -> efficiency sample."""

    d: float
    F: float
    eta: float
    mode: str = "backward"  # "backward" | "forward"

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"efficiency {self.eta} outside [0, 1]")


def transmitted_amplitude(d_tilde: float) -> float:
    """Amplitude transmission exp(-d_tilde / 2) through effective depth d_tilde."""
    if d_tilde < 0:
        raise ValueError("effective depth must be non-negative")
    return math.exp(-0.5 * d_tilde)


def dephasing_amplitude(finesse: float) -> float:
    """Amplitude decay from the finite line width over one rephasing period.

    Equals exp(-pi^2 / (4 ln 2 F^2)): the comb FT evaluated one temporal
    period after absorption, relative to its value at zero delay.
    """
    return math.exp(-math.pi ** 2 / (4.0 * LN2 * finesse ** 2))


def output_amplitude(params: CombParams) -> complex:
    """Backward-retrieval field amplitude ratio E_out / E_in.

    -exp(-i 2 pi delta0/delta) * (1 - exp(-d_tilde)) * dephasing, with the
    effective depth computed from the peak depth and finesse.
    """
    d_tilde = effective_depth(params.peak_depth, params.finesse)
    phase = np.exp(-2j * math.pi * params.delta0 / params.delta)
    return complex(-phase * (1.0 - math.exp(-d_tilde))
                   * dephasing_amplitude(params.finesse))


def efficiency_backward(d: float, finesse: float) -> float:
    """Backward-retrieval efficiency (1 - e^{-d_tilde})^2 * dephasing^2."""
    d_tilde = effective_depth(d, finesse)
    return ((1.0 - math.exp(-d_tilde)) ** 2
            * dephasing_amplitude(finesse) ** 2)


def efficiency_forward(d_tilde: float, finesse: float | None = None) -> float:
    """Forward-echo efficiency (d_tilde e^{-d_tilde/2})^2.

    Without the optional ``finesse``, returns the depth-only factor whose
    maximum is about 0.54 at d_tilde = 2 (the forward re-absorption bound).
    With ``finesse``, the line-width dephasing factor is applied as well.
    """
    if d_tilde < 0:
        raise ValueError("effective depth must be non-negative")
    eta = (d_tilde * math.exp(-0.5 * d_tilde)) ** 2
    if finesse is not None:
        eta *= dephasing_amplitude(finesse) ** 2
    return eta


def optimal_finesse(d: float, bracket: tuple[float, float] = (1.0, 100.0),
                    step: float = 0.001) -> tuple[float, float]:
    """Finesse maximizing the backward efficiency at fixed peak depth.

    Dense scan over the bracket at the given step (default locates the
    optimum to well under 0.01 in F).  Returns (F*, eta*).
    """
    if d <= 0:
        raise ValueError("peak depth must be positive")
    grid = np.arange(bracket[0], bracket[1] + step, step)
    d_tilde = (d / grid) * math.sqrt(math.pi / (4.0 * LN2))
    eta = (1.0 - np.exp(-d_tilde)) ** 2 * np.exp(
        -math.pi ** 2 / (2.0 * LN2 * grid ** 2))
    i = int(np.argmax(eta))
    return float(grid[i]), float(eta[i])


def output_phase(delta0: float, delta: float) -> float:
    """Phase of the retrieved field: pi - 2 pi delta0/delta, wrapped to (-pi, pi]."""
    if delta <= 0:
        raise ValueError("line separation must be positive")
    phi = math.pi - 2.0 * math.pi * delta0 / delta
    wrapped = math.remainder(phi, 2.0 * math.pi)
    # remainder() maps the branch point to -pi; use the (+pi] convention.
    if wrapped <= -math.pi:
        wrapped = math.pi
    return wrapped


def figure2_curves(depths, finesses=(4.0, 6.0, 10.0)):
    """Backward efficiency vs depth for several finesse values.

    Returns a dict mapping finesse -> efficiency array over ``depths``.
    """
    depths = np.asarray(depths, dtype=float)
    return {F: np.array([efficiency_backward(d, F) for d in depths])
            for F in finesses}


def figure3_curves(finesses, depths=(5.0, 10.0, 20.0, 40.0)):
    """Backward efficiency vs finesse for several depth values."""
    finesses = np.asarray(finesses, dtype=float)
    return {d: np.array([efficiency_backward(d, F) for F in finesses])
            for d in depths}
