"""
Truncated direct-sum Hilbert spaces for quantum-dimension systems.

The full space is a direct sum of fixed-dimension sectors d = n1..n2. Each
sector is the Fock space of a d-mode oscillator, truncated to total quanta
``sum(k) <= cutoff_k`` so every energy level below the cutoff is complete.

Basis order is fixed: ascending d, then lexicographic occupation tuple.
Each sector occupies a contiguous slice of the global index range, which is
what lets operators be stored as dense per-sector blocks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Mapping, Tuple

import numpy as np

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10

BlockKey = Tuple[int, int]


class EnergyConvention(enum.Enum):
    """Vacuum offset of the fixed-d oscillators."""

    UNSHIFTED = "unshifted"  # sector ground at d/2
    SHIFTED = "shifted"  # every sector ground at 0

    @classmethod
    def parse(cls, value: "str | EnergyConvention") -> "EnergyConvention":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown energy convention {value!r}") from None


@dataclass(frozen=True)
class DimRange:
    """Allowed window of spatial dimensions ``n1 <= d <= n2``."""

    n1: int
    n2: int

    def __post_init__(self):
        for name in ("n1", "n2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {v!r}")
            if v < 0:
                raise ValueError(f"{name} must be >= 0, got {v}")
            object.__setattr__(self, name, int(v))
        if self.n1 > self.n2:
            raise ValueError(f"need n1 <= n2, got n1={self.n1}, n2={self.n2}")

    @property
    def dims(self) -> range:
        return range(self.n1, self.n2 + 1)

    def __len__(self) -> int:
        return self.n2 - self.n1 + 1

    def __contains__(self, d: int) -> bool:
        return self.n1 <= d <= self.n2


@dataclass(frozen=True, order=True)
class BasisLabel:
    """
    One occupation-basis ket ``|d; k1,...,kd>``.

    The wire syntax is ``"d;k1,k2,..."``, with ``"0;"`` for the d = 0 state.
    """

    d: int
    occ: Tuple[int, ...] = ()

    def __post_init__(self):
        occ = tuple(int(k) for k in self.occ)
        if self.d < 0:
            raise ValueError(f"dimension must be >= 0, got {self.d}")
        if len(occ) != self.d:
            raise ValueError(f"label in d={self.d} needs {self.d} occupations, got {len(occ)}")
        if any(k < 0 for k in occ):
            raise ValueError(f"occupations must be >= 0, got {occ}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "occ", occ)

    @property
    def quanta(self) -> int:
        return sum(self.occ)

    @classmethod
    def parse(cls, text: str) -> "BasisLabel":
        head, sep, tail = text.strip().partition(";")
        if not sep:
            raise ValueError(f"basis label {text!r} is missing ';'")
        try:
            d = int(head)
            occ = tuple(int(t) for t in tail.split(",")) if tail.strip() else ()
        except ValueError:
            raise ValueError(f"malformed basis label {text!r}") from None
        return cls(d, occ)

    def __str__(self) -> str:
        return f"{self.d};" + ",".join(str(k) for k in self.occ)


def _sector_occupations(d: int, cutoff_k: int) -> np.ndarray:
    """All length-d occupation rows with total <= cutoff_k, in lexicographic order."""
    occ = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros(1, dtype=np.int64)
    for _ in range(d):
        counts = cutoff_k - used + 1
        rows = np.repeat(np.arange(len(occ)), counts)
        starts = np.cumsum(counts) - counts
        vals = np.arange(counts.sum()) - np.repeat(starts, counts)
        occ = np.column_stack([occ[rows], vals])
        used = used[rows] + vals
    return occ


def sector_size(d: int, cutoff_k: int) -> int:
    """Number of sector-d states with at most ``cutoff_k`` quanta."""
    return math.comb(cutoff_k + d, d)


@dataclass(frozen=True)
class QDBasis:
    """
    Indexed, truncated enumeration of the direct-sum basis.

    Equality is by (dim_range, cutoff_k, convention), which fully determines
    the labels. Occupations are held as per-sector integer arrays; the
    ``labels`` tuple and the label -> index map are built on first use, so
    very large bases can be used for vectorized sums without materializing
    Python objects.
    """

    dim_range: DimRange
    cutoff_k: int
    convention: EnergyConvention = EnergyConvention.UNSHIFTED
    _occ: Dict[int, np.ndarray] = field(init=False, repr=False, compare=False)
    _offsets: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.cutoff_k < 0:
            raise ValueError(f"cutoff_k must be >= 0, got {self.cutoff_k}")
        object.__setattr__(self, "convention", EnergyConvention.parse(self.convention))
        occ, offsets, pos = {}, {}, 0
        for d in self.dim_range.dims:
            arr = _sector_occupations(d, self.cutoff_k)
            arr.setflags(write=False)
            occ[d] = arr
            offsets[d] = pos
            pos += len(arr)
        object.__setattr__(self, "_occ", occ)
        object.__setattr__(self, "_offsets", offsets)

    def __len__(self) -> int:
        return sum(len(a) for a in self._occ.values())

    @property
    def size(self) -> int:
        return len(self)

    @property
    def sectors(self) -> Tuple[int, ...]:
        return tuple(self.dim_range.dims)

    def sector_size(self, d: int) -> int:
        return len(self._occ[d])

    def sector_slice(self, d: int) -> slice:
        start = self._offsets[d]
        return slice(start, start + len(self._occ[d]))

    def sector_occupations(self, d: int) -> np.ndarray:
        """Read-only ``(n_states, d)`` array of occupations for sector d."""
        return self._occ[d]

    @cached_property
    def dims(self) -> np.ndarray:
        """Dimension d of every basis state, in basis order."""
        return np.concatenate([np.full(len(a), d, dtype=np.int64) for d, a in self._occ.items()])

    @cached_property
    def quanta(self) -> np.ndarray:
        """Total quanta of every basis state, in basis order."""
        return np.concatenate([a.sum(axis=1) for a in self._occ.values()])

    @cached_property
    def twice_energies(self) -> np.ndarray:
        """Exact 2E of every basis state under this basis' convention."""
        if self.convention is EnergyConvention.UNSHIFTED:
            return self.dims + 2 * self.quanta
        return 2 * self.quanta

    @cached_property
    def labels(self) -> Tuple[BasisLabel, ...]:
        return tuple(
            BasisLabel(d, tuple(row)) for d, arr in self._occ.items() for row in arr.tolist()
        )

    @cached_property
    def index(self) -> Dict[BasisLabel, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def label(self, i: int) -> BasisLabel:
        return self.labels[i]

    def index_of(self, label: "BasisLabel | str") -> int:
        if isinstance(label, str):
            label = BasisLabel.parse(label)
        try:
            return self.index[label]
        except KeyError:
            raise KeyError(f"label |{label}> is not in the basis") from None

    def __contains__(self, label: BasisLabel) -> bool:
        return label in self.index


def enumerate_basis(
    dim_range: DimRange,
    cutoff_k: int,
    convention: "EnergyConvention | str" = EnergyConvention.UNSHIFTED,
) -> QDBasis:
    """Build the truncated direct-sum basis for ``dim_range`` with at most ``cutoff_k`` quanta."""
    return QDBasis(dim_range, cutoff_k, EnergyConvention.parse(convention))


def _check_same_basis(a: QDBasis, b: QDBasis) -> None:
    if a is not b and a != b:
        raise ValueError("operands live on different bases")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a :class:`QDBasis`."""

    basis: QDBasis
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape != (len(self.basis),):
            raise ValueError(f"expected {len(self.basis)} amplitudes, got {amps.shape[0]}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis_state(cls, basis: QDBasis, label: "BasisLabel | str") -> "StateVector":
        amps = np.zeros(len(basis), dtype=np.complex128)
        amps[basis.index_of(label)] = 1.0
        return cls(basis, amps)

    @classmethod
    def superposition(
        cls, basis: QDBasis, coeffs: Mapping["BasisLabel | str", complex], normalize: bool = True
    ) -> "StateVector":
        """State from a ``{label: amplitude}`` mapping, normalized by default."""
        amps = np.zeros(len(basis), dtype=np.complex128)
        for lab, c in coeffs.items():
            amps[basis.index_of(lab)] += c
        psi = cls(basis, amps)
        return psi.normalize() if normalize else psi

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amps / n)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm ** 2 - 1.0) <= tol

    def sector_amplitudes(self, d: int) -> np.ndarray:
        return self.amps[self.basis.sector_slice(d)]

    def sector_weights(self) -> Dict[int, float]:
        """Probability of finding the state in each sector."""
        p = np.abs(self.amps) ** 2
        return {d: float(p[self.basis.sector_slice(d)].sum()) for d in self.basis.sectors}

    def inner(self, other: "StateVector") -> complex:
        _check_same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """
    Operator on a QD basis stored as dense per-sector blocks.

    ``blocks[(k, d)]`` maps sector d into sector k, with shape
    ``(sector_size(k), sector_size(d))``. Absent blocks are zero. When
    ``hermitian`` is set the constructor checks ``block(k, d) == block(d, k)^H``.
    """

    basis: QDBasis
    blocks: Mapping[BlockKey, np.ndarray]
    hermitian: bool = False

    def __post_init__(self):
        clean: Dict[BlockKey, np.ndarray] = {}
        for (k, d), blk in self.blocks.items():
            if k not in self.basis.dim_range or d not in self.basis.dim_range:
                raise ValueError(f"block ({k}, {d}) outside the basis dimension range")
            arr = np.array(blk, dtype=np.complex128)
            shape = (self.basis.sector_size(k), self.basis.sector_size(d))
            if arr.shape != shape:
                raise ValueError(f"block ({k}, {d}) has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            clean[(int(k), int(d))] = arr
        object.__setattr__(self, "blocks", clean)
        if self.hermitian:
            defect = self.hermitian_defect()
            if defect > HERMITIAN_TOL:
                raise ValueError(f"operator flagged hermitian but |M - M^H| = {defect:.3g}")

    def block(self, k: int, d: int) -> np.ndarray:
        blk = self.blocks.get((k, d))
        if blk is None:
            return np.zeros((self.basis.sector_size(k), self.basis.sector_size(d)), dtype=np.complex128)
        return blk

    def hermitian_defect(self) -> float:
        """Largest entry of ``|M - M^H|`` over all blocks."""
        worst = 0.0
        for (k, d), blk in self.blocks.items():
            diff = blk - self.block(d, k).conj().T
            if diff.size:
                worst = max(worst, float(np.abs(diff).max()))
        return worst

    @property
    def is_block_diagonal(self) -> bool:
        return all(k == d for k, d in self.blocks)

    @classmethod
    def from_dense(
        cls, basis: QDBasis, matrix: np.ndarray, hermitian: bool = False
    ) -> "BlockOperator":
        """Split a full matrix into sector blocks, dropping blocks that are exactly zero."""
        matrix = np.asarray(matrix)
        if matrix.shape != (len(basis), len(basis)):
            raise ValueError(f"matrix shape {matrix.shape} does not match basis size {len(basis)}")
        blocks = {}
        for k in basis.sectors:
            for d in basis.sectors:
                blk = matrix[basis.sector_slice(k), basis.sector_slice(d)]
                if np.any(blk != 0):
                    blocks[(k, d)] = blk
        return cls(basis, blocks, hermitian)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((len(self.basis), len(self.basis)), dtype=np.complex128)
        for (k, d), blk in self.blocks.items():
            out[self.basis.sector_slice(k), self.basis.sector_slice(d)] = blk
        return out

    def dagger(self) -> "BlockOperator":
        return BlockOperator(
            self.basis, {(d, k): blk.conj().T for (k, d), blk in self.blocks.items()}, self.hermitian
        )

    def _combine(self, other: "BlockOperator", sign: float) -> "BlockOperator":
        _check_same_basis(self.basis, other.basis)
        blocks = dict(self.blocks)
        for key, blk in other.blocks.items():
            blocks[key] = blocks[key] + sign * blk if key in blocks else sign * blk
        return BlockOperator(self.basis, blocks, self.hermitian and other.hermitian)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        return self._combine(other, 1.0)

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        return self._combine(other, -1.0)

    def __mul__(self, scalar: complex) -> "BlockOperator":
        herm = self.hermitian and np.imag(scalar) == 0
        return BlockOperator(self.basis, {k: scalar * b for k, b in self.blocks.items()}, herm)

    __rmul__ = __mul__

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        _check_same_basis(self.basis, other.basis)
        out: Dict[BlockKey, np.ndarray] = {}
        for (k, m), a in self.blocks.items():
            for (m2, d), b in other.blocks.items():
                if m != m2:
                    continue
                prod = a @ b
                out[(k, d)] = out[(k, d)] + prod if (k, d) in out else prod
        return BlockOperator(self.basis, out)


def identity_operator(basis: QDBasis) -> BlockOperator:
    return BlockOperator(
        basis, {(d, d): np.eye(basis.sector_size(d)) for d in basis.sectors}, hermitian=True
    )


def apply(op: BlockOperator, psi: StateVector) -> StateVector:
    """
    Act with ``op`` on ``psi``.

    Output amplitude in sector k collects ``block(k, d) @ amps_d`` over every
    stored block; missing blocks contribute nothing, so a block-diagonal
    operator never moves amplitude between sectors.
    """
    _check_same_basis(op.basis, psi.basis)
    basis = psi.basis
    out = np.zeros(len(basis), dtype=np.complex128)
    for (k, d), blk in op.blocks.items():
        out[basis.sector_slice(k)] += blk @ psi.amps[basis.sector_slice(d)]
    return StateVector(basis, out)


def dimension_operator(basis: QDBasis) -> BlockOperator:
    """The dimension observable: ``d * identity`` on sector d."""
    return BlockOperator(
        basis,
        {(d, d): d * np.eye(basis.sector_size(d)) for d in basis.sectors},
        hermitian=True,
    )


def expectation(op: BlockOperator, psi: StateVector) -> "complex | float":
    """
    ``<psi|op|psi>`` for a normalized state.

    Returns a float when ``op`` is flagged hermitian (the imaginary part is
    rounding noise there), a complex otherwise.
    """
    if not psi.is_normalized():
        raise ValueError(f"state is not normalized (norm^2 = {psi.norm ** 2:.12g})")
    val = complex(np.vdot(psi.amps, apply(op, psi).amps))
    return val.real if op.hermitian else val


def commutator_norm(a: BlockOperator, b: BlockOperator) -> float:
    """Frobenius norm of ``ab - ba``, accumulated block by block."""
    comm = a @ b - b @ a
    return math.sqrt(sum(float(np.sum(np.abs(blk) ** 2)) for blk in comm.blocks.values()))


def ladder(basis: QDBasis, d: int, i: int, kind: str) -> BlockOperator:
    """
    Creation or annihilation operator on mode ``i`` (1-based) of sector ``d``.

    Creation out of the truncated space maps to zero.
    """
    if d not in basis.dim_range:
        raise ValueError(f"sector d={d} not in {basis.dim_range}")
    if not 1 <= i <= d:
        raise ValueError(f"mode index {i} out of range 1..{d}")
    if kind not in ("create", "annihilate"):
        raise ValueError(f"kind must be 'create' or 'annihilate', got {kind!r}")
    occ = basis.sector_occupations(d)
    local = {tuple(row): j for j, row in enumerate(occ.tolist())}
    n = len(occ)
    mat = np.zeros((n, n))
    step = 1 if kind == "create" else -1
    for j, row in enumerate(occ.tolist()):
        k = row[i - 1]
        if kind == "annihilate" and k == 0:
            continue
        target = list(row)
        target[i - 1] = k + step
        dest = local.get(tuple(target))
        if dest is None:
            continue
        mat[dest, j] = math.sqrt(k + 1) if kind == "create" else math.sqrt(k)
    return BlockOperator(basis, {(d, d): mat})


def as_label(value: "BasisLabel | str") -> BasisLabel:
    return value if isinstance(value, BasisLabel) else BasisLabel.parse(value)

