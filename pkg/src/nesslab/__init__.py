"""Davies weak-coupling generators, steady states and entropy production
for small quantum systems between two thermal reservoirs."""
from .analysis import (
    CommutantReport,
    StationaryStates,
    ThermoReport,
    commutant,
    energy_flux,
    entropy_production_single,
    entropy_production_total,
    kernel_dimension,
    ness,
    stationary_states,
    theorem_check,
)
from .lindblad import SuperOperator, apply, davies_generator, evolve, total_generator
from .models import ModelSpec, builtin_model, gibbs, single_spin, xy_anisotropic, xy_two_spin
from .reservoir import Envelope, LambShift, ReservoirSpec, check_effective_coupling, h, lamb_shift
from .spectral import SpectralDecomposition, decompose, jump_operators

__version__ = "0.1.0"
