"""Quantum-dimension systems: the harmonic oscillator with a dimension operator."""

from .core import (
    BasisLabel,
    BlockOperator,
    DimRange,
    EnergyConvention,
    QDBasis,
    StateVector,
    apply,
    commutator_norm,
    dimension_operator,
    enumerate_basis,
    expectation,
    identity_operator,
    ladder,
)
from .dynamics import Propagator, Trajectory, dimension_variance, evolve, hopping_interaction
from .oscillator import EnergyLevel, energy_of, level_degeneracy, oscillator_hamiltonian, z1
from .symmetry import (
    Multiplet,
    SymmetryReport,
    random_unitary,
    spectrum_multiplets,
    symmetry_report,
    verify_unitary_mixing,
)
from .thermo import (
    ThermalCurve,
    ThermalPoint,
    brute_force_thermal,
    dim_vs_energy_curve,
    partition_closed,
    thermal_point,
)

__version__ = "0.1.0"

__all__ = [
    "Propagator",
    "Trajectory",
    "dimension_variance",
    "evolve",
    "hopping_interaction",
    "EnergyLevel",
    "energy_of",
    "level_degeneracy",
    "oscillator_hamiltonian",
    "z1",
    "BasisLabel",
    "BlockOperator",
    "DimRange",
    "EnergyConvention",
    "QDBasis",
    "StateVector",
    "apply",
    "commutator_norm",
    "dimension_operator",
    "enumerate_basis",
    "expectation",
    "identity_operator",
    "ladder",
    "Multiplet",
    "SymmetryReport",
    "random_unitary",
    "spectrum_multiplets",
    "symmetry_report",
    "verify_unitary_mixing",
    "ThermalCurve",
    "ThermalPoint",
    "brute_force_thermal",
    "dim_vs_energy_curve",
    "partition_closed",
    "thermal_point",
]
