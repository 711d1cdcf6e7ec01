"""
Canonical ensemble of the QD oscillator (k_B = 1, temperatures given as beta).

Every sector factorizes into d independent modes, so with the per-mode
factor x(beta) the partition function is ``Z = sum_d x**d``. The closed
forms here are evaluated in log space; ``brute_force_thermal`` sums the
Boltzmann weights of an explicit truncated basis and is kept as the
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import DimRange, EnergyConvention, QDBasis
from .oscillator import _check_beta, log_single_mode_partition, mode_energy

DEFAULT_BETA_MIN = 1e-2
DEFAULT_BETA_MAX = 50.0
DEFAULT_BETA_POINTS = 400


@dataclass(frozen=True)
class ThermalPoint:
    beta: float
    z: float
    mean_dim: float
    mean_energy: float

    def to_dict(self) -> dict:
        return {"beta": self.beta, "Z": self.z, "mean_energy": self.mean_energy, "mean_dim": self.mean_dim}

    @classmethod
    def from_dict(cls, data: dict) -> "ThermalPoint":
        return cls(float(data["beta"]), float(data["Z"]), float(data["mean_dim"]), float(data["mean_energy"]))


def _sector_log_weights(beta: float, dim_range: DimRange, convention: EnergyConvention):
    dims = np.arange(dim_range.n1, dim_range.n2 + 1, dtype=float)
    return dims, dims * log_single_mode_partition(beta, convention)


def log_partition_closed(
    beta: float, dim_range: DimRange, convention: "EnergyConvention | str" = EnergyConvention.UNSHIFTED
) -> float:
    convention = EnergyConvention.parse(convention)
    _, logw = _sector_log_weights(_check_beta(beta), dim_range, convention)
    return _logsumexp(logw)


def _logsumexp(logw: np.ndarray) -> float:
    # log1p over the subdominant terms keeps precision when one sector dominates
    top = int(np.argmax(logw))
    rest = np.delete(logw, top) - logw[top]
    return float(logw[top] + math.log1p(np.exp(rest).sum()))


def partition_closed(
    beta: float, dim_range: DimRange, convention: "EnergyConvention | str" = EnergyConvention.UNSHIFTED
) -> float:
    """``Z(beta) = sum_{d=n1}^{n2} x(beta)**d``."""
    return math.exp(log_partition_closed(beta, dim_range, convention))


def thermal_point(
    beta: float, dim_range: DimRange, convention: "EnergyConvention | str" = EnergyConvention.UNSHIFTED
) -> ThermalPoint:
    """
    Closed-form Z, <D> and <H0> at inverse temperature ``beta``.

    Each sector carries weight ``x**d / Z``. Since ``-d ln(x**d)/d beta = d * eps``
    with eps the single-mode mean energy, ``<H0> = <D> * eps(beta)``.
    """
    convention = EnergyConvention.parse(convention)
    beta = _check_beta(beta)
    dims, logw = _sector_log_weights(beta, dim_range, convention)
    w = np.exp(logw - logw.max())
    mean_dim = float((dims * w).sum() / w.sum())
    z = math.exp(_logsumexp(logw))
    return ThermalPoint(beta, z, mean_dim, mean_dim * mode_energy(beta, convention))


def brute_force_thermal(beta: float, basis: QDBasis) -> ThermalPoint:
    """Z, <D>, <H0> by direct Boltzmann summation over every state of ``basis``."""
    beta = _check_beta(beta)
    energies = basis.twice_energies / 2.0
    e0 = energies.min()
    w = np.exp(-beta * (energies - e0))
    total = w.sum()
    z = math.exp(-beta * e0) * total
    mean_dim = float((basis.dims * w).sum() / total)
    mean_energy = float((energies * w).sum() / total)
    return ThermalPoint(beta, float(z), mean_dim, mean_energy)


def default_beta_grid(
    beta_min: float = DEFAULT_BETA_MIN, beta_max: float = DEFAULT_BETA_MAX, points: int = DEFAULT_BETA_POINTS
) -> np.ndarray:
    """Log-spaced inverse temperatures, ascending."""
    if not 0 < beta_min < beta_max:
        raise ValueError(f"need 0 < beta_min < beta_max, got {beta_min}, {beta_max}")
    if points < 1:
        raise ValueError("need at least one grid point")
    return np.geomspace(beta_min, beta_max, points)


@dataclass(frozen=True)
class ThermalCurve:
    """Thermal points ordered by increasing mean energy (descending beta)."""

    dim_range: DimRange
    convention: EnergyConvention
    points: Tuple[ThermalPoint, ...]

    @property
    def betas(self) -> np.ndarray:
        return np.array([p.beta for p in self.points])

    @property
    def mean_dims(self) -> np.ndarray:
        return np.array([p.mean_dim for p in self.points])

    @property
    def mean_energies(self) -> np.ndarray:
        return np.array([p.mean_energy for p in self.points])

    @property
    def partition_values(self) -> np.ndarray:
        return np.array([p.z for p in self.points])

    def dim_at_energy(self, energy: "float | np.ndarray") -> "float | np.ndarray":
        """Effective dimension at a given mean energy, by linear interpolation along the curve."""
        return np.interp(energy, self.mean_energies, self.mean_dims)

    def to_dict(self) -> dict:
        return {
            "n1": self.dim_range.n1,
            "n2": self.dim_range.n2,
            "convention": self.convention.value,
            "points": [p.to_dict() for p in self.points],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ThermalCurve":
        return cls(
            DimRange(int(data["n1"]), int(data["n2"])),
            EnergyConvention.parse(data["convention"]),
            tuple(ThermalPoint.from_dict(p) for p in data["points"]),
        )


def dim_vs_energy_curve(
    dim_range: DimRange,
    convention: "EnergyConvention | str" = EnergyConvention.UNSHIFTED,
    beta_grid: Sequence[float] = None,
) -> ThermalCurve:
    """Effective dimension against mean energy, one point per beta."""
    convention = EnergyConvention.parse(convention)
    if beta_grid is None:
        beta_grid = default_beta_grid()
    betas = sorted((_check_beta(b) for b in beta_grid), reverse=True)
    if not betas:
        raise ValueError("beta_grid is empty")
    points = tuple(thermal_point(b, dim_range, convention) for b in betas)
    return ThermalCurve(dim_range, convention, points)
