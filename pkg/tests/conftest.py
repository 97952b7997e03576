"""Shared fixtures: expensive solver runs are computed once per session."""

import math
import time
from types import SimpleNamespace

import pytest

from afc.comb import CombParams
from afc.multimode import make_mode_train, run_mode_train
from afc.solver import SimConfig, default_input, simulate_storage

TWO_PI = 2.0 * math.pi

# Reference desk-scale comb: separation 100 kHz, envelope 30x separation
# keeps the default probe (bandwidth 6x separation) inside the working
# band while the line count stays moderate.
STD_DELTA = TWO_PI * 100e3
STD_RATIO = 30.0

GRID_DEPTHS = (5.0, 10.0, 20.0, 40.0)
GRID_FINESSES = (4.0, 6.0, 10.0)


def std_params(d: float, finesse: float, delta0: float = 0.0) -> CombParams:
    return CombParams.from_finesse(delta=STD_DELTA, finesse=finesse,
                                   big_gamma=STD_RATIO * STD_DELTA,
                                   delta0=delta0, peak_depth=d)


def run_storage(d: float, finesse: float, delta0: float = 0.0,
                **cfg_kwargs):
    params = std_params(d, finesse, delta0)
    inp = default_input(params)
    return params, inp, simulate_storage(params, inp,
                                         SimConfig(**cfg_kwargs))


@pytest.fixture(scope="session")
def grid_runs():
    """Storage results over the full depth x finesse reference grid."""
    start = time.monotonic()
    runs = {(d, F): run_storage(d, F)
            for F in GRID_FINESSES for d in GRID_DEPTHS}
    return SimpleNamespace(runs=runs, elapsed=time.monotonic() - start)


@pytest.fixture(scope="session")
def std_run(grid_runs):
    """The deep high-finesse reference run (d = 40, F = 10)."""
    return grid_runs.runs[(40.0, 10.0)]


@pytest.fixture(scope="session")
def offset_runs():
    """Storage runs with the comb center offset by fractions of the spacing."""
    return {frac: run_storage(40.0, 10.0, delta0=frac * STD_DELTA)
            for frac in (0.25, 0.5, 1.0)}


@pytest.fixture(scope="session")
def spin_loss_run():
    """The reference run repeated with a 0.7 amplitude loss at the flip."""
    return run_storage(40.0, 10.0, spin_loss=0.7)


@pytest.fixture(scope="session")
def eu_scaled():
    """Desk-scale analogue of the europium design: 60 peaks, 10 modes."""
    big_gamma = TWO_PI * 1.2e6
    delta = TWO_PI * 20e3
    params = CombParams.from_finesse(delta=delta, finesse=10.0,
                                     big_gamma=big_gamma, peak_depth=40.0)
    train = make_mode_train(10, big_gamma, delta)
    result, report = run_mode_train(params, train, SimConfig())
    return params, train, result, report
