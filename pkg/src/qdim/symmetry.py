"""
Degenerate multiplets and enhanced (cross-dimension) symmetry of the QD oscillator.

A multiplet is *enhanced* when its members span two or more sectors: the
degeneracy then cannot come from a product of fixed-d symmetry groups, and
any unitary mixing the members is a symmetry that changes dimension.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .core import BasisLabel, BlockOperator, DimRange, EnergyConvention, as_label
from .oscillator import level_degeneracy

UNITARY_TOL = 1e-10
INVARIANCE_TOL = 1e-9
CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class Multiplet:
    twice_energy: int
    members: Tuple[BasisLabel, ...]
    sector_histogram: Dict[int, int] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "sector_histogram", dict(sorted(Counter(m.d for m in self.members).items())))

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    @property
    def enhanced(self) -> bool:
        return len(self.sector_histogram) >= 2


def spectrum_multiplets(
    dim_range: DimRange, convention: "EnergyConvention | str", max_twice_energy: int
) -> List[Multiplet]:
    """Every occupied level with ``2E <= max_twice_energy``, lowest first."""
    if max_twice_energy < 0:
        raise ValueError(f"max_twice_energy must be >= 0, got {max_twice_energy}")
    out = []
    for two_e in range(max_twice_energy + 1):
        level = level_degeneracy(dim_range, two_e, convention)
        if level.multiplicity:
            out.append(Multiplet(two_e, level.members))
    return out


@dataclass(frozen=True)
class LevelSymmetry:
    twice_energy: int
    multiplicity: int
    group: str
    enhanced: bool
    sector_histogram: Dict[int, int] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "twice_energy": self.twice_energy,
            "energy": self.twice_energy / 2,
            "multiplicity": self.multiplicity,
            "group": self.group,
            "enhanced": self.enhanced,
            "sector_histogram": {str(d): c for d, c in self.sector_histogram.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LevelSymmetry":
        return cls(
            int(data["twice_energy"]),
            int(data["multiplicity"]),
            str(data["group"]),
            bool(data["enhanced"]),
            {int(d): int(c) for d, c in data.get("sector_histogram", {}).items()},
        )


@dataclass(frozen=True)
class SymmetryReport:
    dim_range: DimRange
    convention: EnergyConvention
    per_level: Tuple[LevelSymmetry, ...]
    base_group: str

    @property
    def ground(self) -> LevelSymmetry:
        return self.per_level[0]

    def to_dict(self) -> dict:
        return {
            "n1": self.dim_range.n1,
            "n2": self.dim_range.n2,
            "convention": self.convention.value,
            "base_group": self.base_group,
            "levels": [lv.to_dict() for lv in self.per_level],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SymmetryReport":
        return cls(
            DimRange(int(data["n1"]), int(data["n2"])),
            EnergyConvention.parse(data["convention"]),
            tuple(LevelSymmetry.from_dict(lv) for lv in data["levels"]),
            str(data["base_group"]),
        )


def base_group_name(dim_range: DimRange) -> str:
    """Product of the fixed-d isotropic oscillator groups U(d); U(0) is trivial."""
    return " x ".join(f"U({d})" for d in dim_range.dims)


def symmetry_report(
    dim_range: DimRange, convention: "EnergyConvention | str", max_twice_energy: int
) -> SymmetryReport:
    """Per-level mixing group U(m) and enhanced flag for all levels up to ``max_twice_energy``."""
    convention = EnergyConvention.parse(convention)
    levels = tuple(
        LevelSymmetry(m.twice_energy, m.multiplicity, f"U({m.multiplicity})", m.enhanced, m.sector_histogram)
        for m in spectrum_multiplets(dim_range, convention, max_twice_energy)
    )
    return SymmetryReport(dim_range, convention, levels, base_group_name(dim_range))


def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed m x m unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def embed_unitary(
    basis, members: Sequence["BasisLabel | str"], u: np.ndarray
) -> np.ndarray:
    """
    Full-space unitary acting as ``u`` on ``span(members)`` and as the identity elsewhere.

    Member j is sent to ``sum_k u[j, k] |member_k>``, members paired in the
    order given.
    """
    u = np.asarray(u, dtype=np.complex128)
    m = len(members)
    if u.shape != (m, m):
        raise ValueError(f"unitary has shape {u.shape}, expected ({m}, {m})")
    if np.abs(u.conj().T @ u - np.eye(m)).max() > UNITARY_TOL:
        raise ValueError("matrix is not unitary to 1e-10")
    idx = []
    for lab in members:
        lab = as_label(lab)
        if lab not in basis:
            raise ValueError(f"member |{lab}> is not in the basis")
        idx.append(basis.index_of(lab))
    if len(set(idx)) != m:
        raise ValueError("duplicate members")
    full = np.eye(len(basis), dtype=np.complex128)
    full[np.ix_(idx, idx)] = u.T
    return full


def mixing_residual(
    h: BlockOperator, members: "Multiplet | Sequence[BasisLabel | str]", u: np.ndarray
) -> float:
    """Frobenius norm of ``U^H H U - H`` for ``u`` embedded on ``members``."""
    if isinstance(members, Multiplet):
        members = members.members
    full_u = embed_unitary(h.basis, members, u)
    hm = h.to_dense()
    return float(np.linalg.norm(full_u.conj().T @ hm @ full_u - hm))


def verify_unitary_mixing(
    h: BlockOperator, multiplet: "Multiplet | Sequence[BasisLabel | str]", u: np.ndarray
) -> bool:
    """True iff mixing the multiplet's members by ``u`` leaves ``h`` invariant to 1e-9."""
    return mixing_residual(h, multiplet, u) < INVARIANCE_TOL


def eigenvalue_multiplets(h: BlockOperator, tol: float = CLUSTER_TOL) -> List[Tuple[float, int]]:
    """
    Cluster the eigenvalues of a hermitian ``h``: ``[(energy, multiplicity), ...]``.

    Consecutive sorted eigenvalues closer than ``tol`` share a cluster; the
    reported energy is the cluster mean.
    """
    if not h.hermitian:
        raise ValueError("eigenvalue clustering needs a hermitian operator")
    evals = np.linalg.eigvalsh(h.to_dense())
    clusters: List[List[float]] = []
    for e in evals:
        if clusters and e - clusters[-1][-1] <= tol:
            clusters[-1].append(e)
        else:
            clusters.append([e])
    return [(float(np.mean(c)), len(c)) for c in clusters]
