"""eittool - simulate the mechanical analog of EIT for resonators coupled to a spin ensemble."""

import os
import math

# fmt: off
__project__ = 'eittool'
__version__ = '0.1.0'
# fmt: on

VERSION = __project__ + "-" + __version__

script_dir = os.path.dirname(__file__)

# SI physical constants
MU_0 = 4.0 * math.pi * 1e-7
BOHR_MAGNETON = 9.27401e-24
HBAR = 1.054572e-34
G_FACTOR = 2.0

# default physical scales
DEFAULT_OMEGA_SCALE = 1.0e6
NM3 = 1.0e-27
DEFAULT_VOLUME_NM3 = 4.0 * math.pi / 3.0 * 1.0e3
DEFAULT_VOLUME = DEFAULT_VOLUME_NM3 * NM3

# numerical tolerances
DEGENERACY_TOL = 1e-9
ROOT_CLUSTER_TOL = 1e-7
STABILITY_TOL = 1e-12
WINDOW_TOL = 1e-6
DEFAULT_GRID_POINTS = 3001
DIVERGENCE_LIMIT = 1e12

# time-domain oracle
MIN_ORACLE_GAMMA = 1e-4
SETTLE_FACTOR = 8.0
RUN_FACTOR = 10.0
MIN_WINDOW_PERIODS = 5
STEPS_PER_FASTEST_PERIOD = 20

# exact diagonalization
EXACT_MAX_SPINS = 8
EXACT_DIM_BUDGET = 200000
DEFAULT_BOSON_CUTOFF = 7

from .exceptions import *
from .helpers import (
    colour_freq_str,
    colour_flag_str,
    colour_label_str,
    colour_value_str,
    FREQ_COLOUR,
    LABEL_COLOUR,
)
from .model import (
    TipGeometry,
    StaticFieldParams,
    OscillatorParams,
    SystemParams,
    MaterialParams,
    tip_field,
    tip_field_params,
    dipole_dipole_energy,
    to_dimensionless,
    susceptibility_prefactor,
    stability_margin,
)
from .response import (
    SpectrumPoint,
    Spectrum,
    xi,
    lineshape,
    lineshape_single,
    lineshape_double,
    lineshape_double_degenerate,
    resonator_amplitudes,
    chi,
    refractive_index,
    dchi_domega,
    group_velocity,
    scan_spectrum,
)
from .modes import (
    ModeSet,
    PeakInfo,
    WindowInfo,
    undamped_polynomial,
    dynamical_matrix,
    characteristic_determinant,
    eigenfrequencies,
    find_peaks,
    find_windows,
)
from .langevin import (
    Trajectory,
    LangevinIntegrator,
    rk4_step,
    integrate_langevin,
    steady_state_amplitude,
    timedomain_amplitude,
)
from .exactmodel import ExactModel, exact_spectrum, bosonization_error
from .runconfig import RunConfig, PRESETS, load_config
from .runner import EitRunner, run_spectrum, run_modes, run_validate
