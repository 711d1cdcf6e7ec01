"""
Dimension-changing dynamics.

An interaction with matrix elements between different sectors no longer
commutes with the dimension operator, so <D>(t) can move. Evolution is exact:
the Hermitian matrix is diagonalized once and ``exp(-iHt)`` is applied in
the eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .core import (
    BasisLabel,
    BlockOperator,
    QDBasis,
    StateVector,
    _check_same_basis,
    as_label,
)

MAX_MATRIX_SIZE = 4096
HERMITIAN_CHECK_TOL = 1e-10


def hopping_interaction(
    basis: QDBasis, g: complex, pairs: Iterable[Tuple["BasisLabel | str", "BasisLabel | str"]]
) -> BlockOperator:
    """
    Pairwise hopping: ``g |a><b| + conj(g) |b><a|`` summed over ``pairs``.

    Pairs may join different sectors. A pair listed twice adds twice.
    """
    mat = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for a, b in pairs:
        a, b = as_label(a), as_label(b)
        for lab in (a, b):
            if lab not in basis:
                raise ValueError(f"label |{lab}> is not in the basis")
        if a == b:
            raise ValueError(f"hopping pair joins |{a}> to itself")
        i, j = basis.index_of(a), basis.index_of(b)
        mat[i, j] += g
        mat[j, i] += np.conj(g)
    return BlockOperator.from_dense(basis, mat, hermitian=True)


class Propagator:
    """``exp(-i H t)`` for a fixed Hermitian ``H``, from one eigendecomposition."""

    def __init__(self, h: BlockOperator, max_size: int = MAX_MATRIX_SIZE):
        n = len(h.basis)
        if n > max_size:
            raise ValueError(f"basis has {n} states, above the dense-diagonalization guard {max_size}")
        if not h.hermitian or h.hermitian_defect() > HERMITIAN_CHECK_TOL:
            raise ValueError("time evolution needs a hermitian Hamiltonian")
        self.basis = h.basis
        self.energies, self.vectors = np.linalg.eigh(h.to_dense())

    def at(self, psi: StateVector, t: float) -> StateVector:
        _check_same_basis(self.basis, psi.basis)
        coeffs = self.vectors.conj().T @ psi.amps
        return StateVector(self.basis, self.vectors @ (np.exp(-1j * self.energies * t) * coeffs))


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: Tuple[StateVector, ...]
    mean_dim: np.ndarray
    norm: np.ndarray


def evolve(
    h: BlockOperator,
    psi0: StateVector,
    times: Sequence[float],
    max_size: int = MAX_MATRIX_SIZE,
) -> Trajectory:
    """
    Evolve ``psi0`` under ``h`` and record <D> and the norm at each time.

    ``times`` must be sorted and start at t >= 0.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1-d sequence")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted and nonnegative")
    if not psi0.is_normalized():
        raise ValueError("initial state is not normalized")
    prop = Propagator(h, max_size)
    dims = psi0.basis.dims
    states, mean_dim, norm = [], [], []
    for t in times:
        psi = prop.at(psi0, t)
        p = np.abs(psi.amps) ** 2
        states.append(psi)
        norm.append(np.sqrt(p.sum()))
        mean_dim.append(float(dims @ p))
    return Trajectory(times, tuple(states), np.array(mean_dim), np.array(norm))


def dimension_variance(psi: StateVector) -> float:
    """``<D^2> - <D>^2``: spread of the state over sectors."""
    if not psi.is_normalized():
        raise ValueError("state is not normalized")
    p = np.abs(psi.amps) ** 2
    dims = psi.basis.dims.astype(float)
    mean = dims @ p
    return max(float(dims ** 2 @ p - mean ** 2), 0.0)
