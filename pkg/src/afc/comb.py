"""Atomic frequency comb: spectral density, Fourier transform, discretization.

The comb is a periodic train of Gaussian absorption lines (separation
``delta``, line standard deviation ``gamma_tilde``) under an overall
envelope of scale ``big_gamma``, optionally offset from the field carrier
by ``delta0``.  All frequencies are angular (rad/s) internally; the CLI
converts from Hz.

The density is normalized so that the maximum of the central line is 1;
the absolute scale of the density never leaves this module (the solver's
coupling constant is calibrated against the peak optical depth instead).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LN2 = math.log(2.0)
# FWHM of a unit-sigma Gaussian.
FWHM_SIGMA = math.sqrt(8.0 * LN2)
# Relative size below which terms of the infinite line sum are dropped.
TERM_CUTOFF = 1e-16


class CombConfigError(ValueError):
    """Raised for comb parameters that cannot describe a usable AFC."""


@dataclass(frozen=True)
class CombParams:
    """AFC spectral-density parameters.

    Parameters
    ----------
    delta : float
        Line separation (rad/s).
    gamma_tilde : float
        Gaussian line standard deviation (rad/s); the FWHM line width is
        ``sqrt(8 ln 2) * gamma_tilde``.
    big_gamma : float
        Overall envelope width scale (rad/s).  Standard deviation for the
        Gaussian envelope; full width for the square envelope.
    delta0 : float
        Comb-center offset relative to the field carrier (rad/s).
    peak_depth : float
        Peak optical depth d = alpha*L at a line center (dimensionless).
    envelope : str
        ``"gaussian"`` (default) or ``"square"``.
    """

    delta: float
    gamma_tilde: float
    big_gamma: float
    delta0: float = 0.0
    peak_depth: float = 0.0
    envelope: str = "gaussian"

    def __post_init__(self):
        if self.delta <= 0 or self.gamma_tilde <= 0 or self.big_gamma <= 0:
            raise CombConfigError(
                "delta, gamma_tilde and big_gamma must all be positive"
            )
        if self.peak_depth < 0:
            raise CombConfigError("peak_depth must be non-negative")
        if self.envelope not in ("gaussian", "square"):
            raise CombConfigError(f"unknown envelope shape {self.envelope!r}")
        if self.finesse <= 1.0:
            raise CombConfigError(
                f"finesse {self.finesse:.3f} <= 1: comb lines are not resolved"
            )

    @property
    def fwhm(self) -> float:
        """FWHM line width gamma (rad/s)."""
        return FWHM_SIGMA * self.gamma_tilde

    @property
    def finesse(self) -> float:
        """Line separation over FWHM line width."""
        return self.delta / self.fwhm

    @property
    def well_separated(self) -> bool:
        """True in the working regime: envelope >> separation >> line width."""
        return (self.big_gamma >= 10.0 * self.delta
                and self.delta >= 10.0 * self.gamma_tilde)

    @classmethod
    def from_finesse(cls, delta: float, finesse: float, big_gamma: float,
                     delta0: float = 0.0, peak_depth: float = 0.0,
                     envelope: str = "gaussian") -> "CombParams":
        """Build parameters from the finesse instead of the line width."""
        if finesse <= 0:
            raise CombConfigError("finesse must be positive")
        gamma_tilde = delta / (FWHM_SIGMA * finesse)
        return cls(delta=delta, gamma_tilde=gamma_tilde, big_gamma=big_gamma,
                   delta0=delta0, peak_depth=peak_depth, envelope=envelope)


def finesse_of(params: CombParams) -> float:
    """Comb finesse F = delta / (sqrt(8 ln 2) * gamma_tilde)."""
    return params.finesse


def effective_depth(peak_depth: float, finesse: float) -> float:
    """Effective absorption depth seen by a pulse spanning many lines.

    The comb-averaged depth is the peak depth reduced by the duty cycle of
    the Gaussian lines: ``(d/F) * sqrt(pi / (4 ln 2))``.
    """
    if peak_depth < 0:
        raise ValueError("peak_depth must be non-negative")
    if finesse <= 0:
        raise ValueError("finesse must be positive")
    return (peak_depth / finesse) * math.sqrt(math.pi / (4.0 * LN2))


def _envelope(detuning, params: CombParams):
    """Envelope factor at absolute detuning (already offset by delta0)."""
    if params.envelope == "gaussian":
        return np.exp(-0.5 * (detuning / params.big_gamma) ** 2)
    # Square envelope: big_gamma is the full width.
    return np.where(np.abs(detuning) <= 0.5 * params.big_gamma, 1.0, 0.0)


def comb_density(delta_detuning, params: CombParams):
    """Normalized comb spectral density n(delta).

    Evaluates ``envelope(x) * sum_j exp(-(x - j*delta)^2 / (2 gamma_tilde^2))``
    with ``x = delta_detuning - delta0``.  The line sum is truncated where
    terms fall below 1e-16 of the maximum.  Accepts scalars or arrays.
    """
    x = np.asarray(delta_detuning, dtype=float) - params.delta0
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    # Terms beyond reach * gamma_tilde from a line center are < TERM_CUTOFF.
    reach = math.sqrt(-2.0 * math.log(TERM_CUTOFF))
    half_span = int(math.ceil(reach * params.gamma_tilde / params.delta)) + 1
    j_center = np.rint(x / params.delta)
    total = np.zeros_like(x)
    for dj in range(-half_span, half_span + 1):
        centers = (j_center + dj) * params.delta
        total += np.exp(-0.5 * ((x - centers) / params.gamma_tilde) ** 2)
    out = _envelope(x, params) * total
    return float(out[0]) if scalar else out


class QuadratureError(RuntimeError):
    """Raised when the numerical Fourier transform misses its error budget."""


def _comb_ft_analytic(t, params: CombParams):
    """Closed-form FT of the Gaussian-envelope comb (Poisson summation).

    n_tilde(t) = (2 pi gamma_tilde Gamma / Delta)
                 * sum_n exp(-t_n^2 gt^2 / 2) exp(-(t - t_n)^2 Gamma^2 / 2)
                 * exp(-i delta0 t),   t_n = 2 pi n / Delta.

    Exact for the Gaussian envelope; the line-width decay is sampled at the
    temporal line centers, which is the exact Poisson-summation result.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    gt, gg, dd = params.gamma_tilde, params.big_gamma, params.delta
    period = 2.0 * math.pi / dd
    reach_t = math.sqrt(-2.0 * math.log(TERM_CUTOFF))
    # Temporal peaks within reach of any requested t, bounded by the
    # global 1/gamma_tilde decay.
    n_lo = int(np.floor((t.min() - reach_t / gg) / period)) - 1
    n_hi = int(np.ceil((t.max() + reach_t / gg) / period)) + 1
    n_max_global = int(math.ceil(reach_t / (gt * period))) + 1
    n_lo = max(n_lo, -n_max_global)
    n_hi = min(n_hi, n_max_global)
    total = np.zeros(t.shape, dtype=float)
    for n in range(n_lo, n_hi + 1):
        tn = n * period
        total += math.exp(-0.5 * (gt * tn) ** 2) * np.exp(
            -0.5 * (gg * (t - tn)) ** 2)
    const = 2.0 * math.pi * gt * gg / dd
    return const * total * np.exp(-1j * params.delta0 * t)


def _comb_ft_quadrature(t, params: CombParams, rel_tol: float = 1e-8):
    """Dense-grid FT of the comb density with a step-halving error check."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    # Square support ends exactly at +-Gamma/2; putting the grid endpoints
    # there keeps the discontinuity fixed under step halving.
    band = (6.0 * params.big_gamma if params.envelope == "gaussian"
            else 0.5 * params.big_gamma)
    # Resolve both the narrow lines and the fastest oscillation.
    t_max = float(np.abs(t).max())
    step = params.gamma_tilde / 12.0
    if t_max > 0:
        step = min(step, math.pi / (8.0 * t_max))
    npts = int(math.ceil(2.0 * band / step)) + 1

    def integrate(n):
        grid = np.linspace(params.delta0 - band, params.delta0 + band, n)
        dens = comb_density(grid, params)
        phases = np.exp(-1j * np.outer(t, grid))
        return np.trapezoid(phases * dens, grid, axis=1)

    coarse = integrate(npts)
    fine = integrate(2 * npts - 1)
    scale = abs(integrate(1001)[0]) if t_max == 0 else None
    n0 = float(np.abs(_comb_ft_analytic(np.array([0.0]), params))[0]) \
        if params.envelope == "gaussian" else float(np.abs(fine).max())
    err = float(np.abs(fine - coarse).max())
    if err > rel_tol * n0:
        raise QuadratureError(
            f"FT quadrature error estimate {err:.3e} exceeds "
            f"{rel_tol:.1e} of n_tilde(0) = {n0:.3e}")
    return fine


def comb_ft(t, params: CombParams, method: str = "analytic"):
    """Fourier transform of the comb density, integral over detuning of
    n(delta) exp(-i delta t).

    ``method="analytic"`` uses the exact closed form (Gaussian envelope
    only); ``method="quadrature"`` integrates the density numerically over
    +-6 envelope widths and reports failure if the step-halving error
    estimate exceeds 1e-8 of the t=0 value.
    """
    scalar = np.ndim(t) == 0
    if method == "analytic":
        if params.envelope != "gaussian":
            raise ValueError(
                "closed-form FT is only available for the gaussian envelope")
        out = _comb_ft_analytic(t, params)
    elif method == "quadrature":
        out = _comb_ft_quadrature(t, params)
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(out[0]) if scalar else out


@dataclass
class DiscretizedComb:
    """Detuning-bin discretization of the comb for the propagation solver.

    ``weights`` are quadrature weights for integrals of the normalized
    density against smooth functions of detuning; their sum approximates
    the integral of the density over the retained band.  ``coupling`` is
    the calibrated light-atom constant (see ``solver.calibrate_coupling``);
    it is zero until calibration.
    """

    detunings: np.ndarray
    weights: np.ndarray
    length: float = 1.0
    coupling: float = 0.0
    params: CombParams | None = field(default=None, repr=False)
    n_peaks: int = 0
    nodes_per_peak: int = 0

    def __post_init__(self):
        if np.any(self.weights < 0):
            raise CombConfigError("quadrature weights must be non-negative")
        if np.any(np.diff(self.detunings) <= 0):
            raise CombConfigError("detunings must be strictly increasing")


def discretize_comb(params: CombParams, length: float = 1.0,
                    nodes_per_peak: int = 7,
                    peak_cutoff: float = 1e-3) -> DiscretizedComb:
    """Per-line Gauss-Hermite discretization of the comb density.

    Lines whose envelope weight falls below ``peak_cutoff`` times the
    maximum are dropped; each retained line gets ``nodes_per_peak``
    Gauss-Hermite nodes (spanning roughly +-4 line widths) whose weights
    carry the envelope factor.
    """
    if nodes_per_peak < 7:
        raise CombConfigError("nodes_per_peak must be at least 7")
    if not 0.0 < peak_cutoff <= 1.0:
        raise CombConfigError("peak_cutoff must be in (0, 1]")

    if params.envelope == "gaussian":
        j_max = int(math.floor(
            params.big_gamma * math.sqrt(-2.0 * math.log(peak_cutoff))
            / params.delta))
    else:
        j_max = int(math.floor(0.5 * params.big_gamma / params.delta))
    js = np.arange(-j_max, j_max + 1)
    centers = params.delta0 + js * params.delta
    keep = _envelope(centers - params.delta0, params) >= peak_cutoff
    centers = centers[keep]
    if centers.size < 3:
        raise CombConfigError(
            f"only {centers.size} comb lines retained; a meaningful comb "
            "needs at least 3 (widen the envelope or lower the cutoff)")

    # Gauss-Hermite for integrals of exp(-x^2) f(x); substituting
    # delta = c_j + sqrt(2) gamma_tilde x turns each unit-amplitude line
    # into this form with an extra factor sqrt(2) gamma_tilde.
    x, v = np.polynomial.hermite.hermgauss(nodes_per_peak)
    scale = math.sqrt(2.0) * params.gamma_tilde
    detunings = (centers[:, None] + scale * x[None, :]).ravel()
    weights = (scale * v[None, :]
               * _envelope(detunings.reshape(centers.size, -1)
                           - params.delta0, params)).ravel()
    order = np.argsort(detunings)
    detunings = detunings[order]
    weights = weights[order]
    # Square-envelope edges can zero out nodes; drop them.
    nz = weights > 0
    detunings, weights = detunings[nz], weights[nz]

    return DiscretizedComb(detunings=detunings, weights=weights,
                           length=length, params=params,
                           n_peaks=int(centers.size),
                           nodes_per_peak=nodes_per_peak)
