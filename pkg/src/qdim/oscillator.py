"""
The quantum-dimension harmonic oscillator (units hbar*omega = 1).

Energies are handled as exact integers ``2E``: a state |d; k> has
``2E = d + 2*sum(k)`` in the unshifted convention and ``2E = 2*sum(k)`` in
the shifted one. Level degeneracies come from composition counting and are
independent of any basis truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .core import BasisLabel, BlockOperator, DimRange, EnergyConvention, QDBasis

# below this beta the closed form loses digits to 1 - exp(-beta); use the series
SMALL_BETA = 1e-6


def energy_of(label: BasisLabel, convention: "EnergyConvention | str") -> int:
    """Exact twice-energy ``2E`` of a basis label."""
    convention = EnergyConvention.parse(convention)
    if convention is EnergyConvention.UNSHIFTED:
        return label.d + 2 * label.quanta
    return 2 * label.quanta


def sector_degeneracy(d: int, quanta: int) -> int:
    """Number of ways to put ``quanta`` bosons into ``d`` modes, C(n+d-1, d-1)."""
    if quanta < 0:
        return 0
    if d == 0:
        return 1 if quanta == 0 else 0
    return math.comb(quanta + d - 1, d - 1)


def compositions(n: int, d: int) -> Iterator[Tuple[int, ...]]:
    """Weak compositions of ``n`` into ``d`` parts, in lexicographic order."""
    if d == 0:
        if n == 0:
            yield ()
        return
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, d - 1):
            yield (first,) + rest


def quanta_for_level(d: int, twice_energy: int, convention: EnergyConvention) -> Optional[int]:
    """Total quanta a sector-d state needs to sit at ``2E``, or None if impossible."""
    excess = twice_energy - d if convention is EnergyConvention.UNSHIFTED else twice_energy
    if excess < 0 or excess % 2:
        return None
    return excess // 2


@dataclass(frozen=True)
class EnergyLevel:
    twice_energy: int
    multiplicity: int
    members: Tuple[BasisLabel, ...]
    convention: EnergyConvention = EnergyConvention.UNSHIFTED

    @property
    def energy(self) -> float:
        return self.twice_energy / 2

    def to_dict(self) -> dict:
        return {
            "twice_energy": self.twice_energy,
            "energy": self.energy,
            "multiplicity": self.multiplicity,
            "members": [str(m) for m in self.members],
            "convention": self.convention.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EnergyLevel":
        return cls(
            twice_energy=int(data["twice_energy"]),
            multiplicity=int(data["multiplicity"]),
            members=tuple(BasisLabel.parse(m) for m in data["members"]),
            convention=EnergyConvention.parse(data["convention"]),
        )


def level_degeneracy(
    dim_range: DimRange, twice_energy: int, convention: "EnergyConvention | str"
) -> EnergyLevel:
    """
    Exact multiplicity and members of the level at ``2E = twice_energy``.

    The count is the sum over sectors of C(n+d-1, d-1) with n the quanta that
    put sector d at this energy. Members are listed in basis order.
    """
    convention = EnergyConvention.parse(convention)
    if twice_energy < 0:
        raise ValueError(f"twice_energy must be >= 0, got {twice_energy}")
    count = 0
    members = []
    for d in dim_range.dims:
        n = quanta_for_level(d, twice_energy, convention)
        if n is None:
            continue
        count += sector_degeneracy(d, n)
        members.extend(BasisLabel(d, occ) for occ in compositions(n, d))
    if count != len(members):  # pragma: no cover - the two counts are the same identity
        raise AssertionError(f"composition count {count} != enumerated {len(members)}")
    return EnergyLevel(twice_energy, count, tuple(members), convention)


def oscillator_hamiltonian(basis: QDBasis) -> BlockOperator:
    """Free QD oscillator: block diagonal, diagonal in the occupation basis."""
    energies = basis.twice_energies / 2
    blocks = {(d, d): np.diag(energies[basis.sector_slice(d)]) for d in basis.sectors}
    return BlockOperator(basis, blocks, hermitian=True)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta > 0 or math.isnan(beta):
        raise ValueError(f"beta must be > 0, got {beta}")
    return beta


def z1(beta: float) -> float:
    """
    Partition function of one oscillator mode, ``exp(-beta/2) / (1 - exp(-beta))``.

    For ``beta < SMALL_BETA`` the Laurent series ``1/beta - beta/24 + 7 beta^3/5760``
    is used instead; its truncation error there is below 1e-25 relative.
    """
    beta = _check_beta(beta)
    if beta < SMALL_BETA:
        return 1.0 / beta - beta / 24.0 + 7.0 * beta ** 3 / 5760.0
    return math.exp(-beta / 2) / -math.expm1(-beta)


def single_mode_partition(beta: float, convention: "EnergyConvention | str") -> float:
    """Per-mode factor x so that the sector-d partition function is x**d."""
    convention = EnergyConvention.parse(convention)
    beta = _check_beta(beta)
    if convention is EnergyConvention.UNSHIFTED:
        return z1(beta)
    return 1.0 / -math.expm1(-beta)


def log_single_mode_partition(beta: float, convention: "EnergyConvention | str") -> float:
    convention = EnergyConvention.parse(convention)
    beta = _check_beta(beta)
    if beta > math.log(2):
        log_shifted = -math.log1p(-math.exp(-beta))
    else:
        log_shifted = -math.log(-math.expm1(-beta))
    if convention is EnergyConvention.UNSHIFTED:
        return log_shifted - beta / 2
    return log_shifted


def mode_energy(beta: float, convention: "EnergyConvention | str") -> float:
    """Thermal mean energy of a single mode, ``-d ln x / d beta``."""
    convention = EnergyConvention.parse(convention)
    beta = _check_beta(beta)
    if convention is EnergyConvention.UNSHIFTED:
        return 0.5 / math.tanh(beta / 2)
    return math.exp(-beta) / -math.expm1(-beta)
