import math

import numpy as np
import pytest

from qdim.core import BasisLabel, DimRange, EnergyConvention, enumerate_basis
from qdim.oscillator import oscillator_hamiltonian
from qdim.symmetry import (
    SymmetryReport,
    base_group_name,
    eigenvalue_multiplets,
    embed_unitary,
    mixing_residual,
    random_unitary,
    spectrum_multiplets,
    symmetry_report,
    verify_unitary_mixing,
)

U, S = EnergyConvention.UNSHIFTED, EnergyConvention.SHIFTED
L = BasisLabel.parse
R03 = DimRange(0, 3)
HADAMARD_LIKE = np.array([[1, 1], [-1, 1]]) / math.sqrt(2)


def by_energy(multiplets):
    return {m.twice_energy: m for m in multiplets}


def test_paper_level_is_enhanced():
    m = by_energy(spectrum_multiplets(R03, U, 6))[3]
    assert m.members == (L("1;1"), L("3;0,0,0"))
    assert m.enhanced
    assert m.sector_histogram == {1: 1, 3: 1}


def test_unshifted_ground_is_unique():
    m = by_energy(spectrum_multiplets(R03, U, 6))[0]
    assert m.members == (L("0;"),) and not m.enhanced


def test_shifted_first_excited_level():
    m = by_energy(spectrum_multiplets(R03, S, 6))[2]
    assert m.multiplicity == 6 and m.enhanced
    assert m.sector_histogram == {1: 1, 2: 2, 3: 3}


def test_multiplet_invariants():
    for conv in (U, S):
        for m in spectrum_multiplets(DimRange(0, 4), conv, 12):
            assert sum(m.sector_histogram.values()) == m.multiplicity
            assert m.enhanced == (len(m.sector_histogram) >= 2)


def test_spectrum_multiplets_rejects_negative():
    with pytest.raises(ValueError):
        spectrum_multiplets(R03, U, -1)


def test_report_shifted_ground():
    rep = symmetry_report(R03, S, 4)
    assert rep.ground.twice_energy == 0
    assert rep.ground.group == "U(4)" and rep.ground.enhanced
    assert rep.base_group == "U(0) x U(1) x U(2) x U(3)"


def test_report_single_dimension_has_no_enhancement():
    rep = symmetry_report(DimRange(2, 2), U, 10)
    assert rep.per_level
    assert not any(lv.enhanced for lv in rep.per_level)
    assert rep.base_group == base_group_name(DimRange(2, 2)) == "U(2)"


def test_report_unshifted_low_levels():
    rep = symmetry_report(R03, U, 3)
    got = {lv.twice_energy: lv.multiplicity for lv in rep.per_level}
    assert got == {0: 1, 1: 1, 2: 1, 3: 2}
    assert rep.per_level[-1].group == "U(2)"


def test_report_dict_round_trip():
    rep = symmetry_report(DimRange(1, 4), S, 8)
    assert SymmetryReport.from_dict(rep.to_dict()) == rep


@pytest.mark.parametrize("n1,n2", [(a, b) for a in range(6) for b in range(a, 6)])
def test_shifted_ground_size(n1, n2):
    ground = spectrum_multiplets(DimRange(n1, n2), S, 0)[0]
    assert ground.multiplicity == n2 - n1 + 1
    assert ground.enhanced == (n1 < n2)


@pytest.mark.parametrize("n1,n2", [(a, b) for a in range(6) for b in range(a + 1, 6)])
def test_vacuum_shift_changes_ground_structure(n1, n2):
    un = spectrum_multiplets(DimRange(n1, n2), U, 2 * n2)[0]
    sh = spectrum_multiplets(DimRange(n1, n2), S, 0)[0]
    assert un.multiplicity == 1 and not un.enhanced
    assert sh.multiplicity == n2 - n1 + 1 and sh.enhanced


# --- unitary mixing --------------------------------------------------------

def test_identity_mixing_always_invariant(rng):
    b = enumerate_basis(R03, 2)
    n = len(b)
    a = rng.standard_normal((n, n))
    from qdim.core import BlockOperator

    h = BlockOperator.from_dense(b, a + a.T, hermitian=True)
    assert verify_unitary_mixing(h, [L("1;0"), L("2;1,0")], np.eye(2))


def test_degenerate_pair_mixing():
    b = enumerate_basis(R03, 1)
    h = oscillator_hamiltonian(b)
    m = by_energy(spectrum_multiplets(R03, U, 3))[3]
    assert verify_unitary_mixing(h, m, HADAMARD_LIKE)


def test_non_degenerate_pair_mixing_fails():
    b = enumerate_basis(R03, 1)
    h = oscillator_hamiltonian(b)
    assert not verify_unitary_mixing(h, [L("1;0"), L("3;0,0,0")], HADAMARD_LIKE)
    # oracle: conjugating diag(1/2, 3/2) by the rotation gives [[1, -1/2], [-1/2, 1]]
    rot = HADAMARD_LIKE.T
    sub = rot.conj().T @ np.diag([0.5, 1.5]) @ rot - np.diag([0.5, 1.5])
    assert mixing_residual(h, [L("1;0"), L("3;0,0,0")], HADAMARD_LIKE) == pytest.approx(np.linalg.norm(sub))
    assert np.linalg.norm(sub) == pytest.approx(1.0)


def test_embed_rejects_non_unitary():
    b = enumerate_basis(R03, 1)
    with pytest.raises(ValueError):
        embed_unitary(b, [L("1;1"), L("3;0,0,0")], np.ones((2, 2)))


def test_embed_rejects_missing_member():
    b = enumerate_basis(R03, 1)
    with pytest.raises(ValueError):
        embed_unitary(b, [L("1;2"), L("3;0,0,0")], np.eye(2))


def test_embed_maps_member_kets_like_the_transformation_rule():
    b = enumerate_basis(R03, 1)
    u = np.array([[0.6, 0.8j], [0.8j, 0.6]])
    full = embed_unitary(b, [L("1;1"), L("3;0,0,0")], u)
    i, j = b.index_of("1;1"), b.index_of("3;0,0,0")
    # |1;1> -> U11 |1;1> + U12 |3;0,0,0>
    assert full[i, i] == u[0, 0] and full[j, i] == u[0, 1]


def test_random_unitary_is_unitary(rng):
    for m in (1, 2, 5, 9):
        u = random_unitary(m, rng)
        assert np.abs(u.conj().T @ u - np.eye(m)).max() < 1e-12


@pytest.mark.parametrize("conv", [U, S])
def test_random_mixing_within_every_multiplet(conv, rng):
    dr = DimRange(0, 3)
    k = 3
    b = enumerate_basis(dr, k, conv)
    h = oscillator_hamiltonian(b)
    top = 2 * k + dr.n1 if conv is U else 2 * k
    for m in spectrum_multiplets(dr, conv, top):
        for _ in range(20):
            assert mixing_residual(h, m, random_unitary(m.multiplicity, rng)) < 1e-9


def test_mixing_across_levels_breaks_invariance(rng):
    b = enumerate_basis(R03, 2)
    h = oscillator_hamiltonian(b)
    members = [L("0;"), L("1;0"), L("2;0,0")]
    for _ in range(20):
        assert mixing_residual(h, members, random_unitary(3, rng)) > 1e-3


# --- eigenvalue clustering cross-check -------------------------------------

@pytest.mark.parametrize("conv", [U, S])
@pytest.mark.parametrize("n1,n2,k", [(0, 3, 3), (1, 4, 2), (0, 2, 5), (2, 2, 4)])
def test_multiplets_match_eigenvalue_clusters(conv, n1, n2, k):
    dr = DimRange(n1, n2)
    b = enumerate_basis(dr, k, conv)
    clusters = eigenvalue_multiplets(oscillator_hamiltonian(b))
    complete_top = 2 * k + n1 if conv is U else 2 * k
    analytic = {m.twice_energy: m.multiplicity for m in spectrum_multiplets(dr, conv, complete_top)}
    numeric = {int(round(2 * e)): c for e, c in clusters if 2 * e <= complete_top + 1e-9}
    assert numeric == analytic


def test_eigenvalue_clustering_needs_hermitian():
    from qdim.core import ladder

    b = enumerate_basis(R03, 1)
    with pytest.raises(ValueError):
        eigenvalue_multiplets(ladder(b, 1, 1, "create"))
