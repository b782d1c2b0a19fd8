import numpy as np
import pytest

from akltsync.manifold import (
    ManifoldError,
    compute_manifold,
    edge_profile,
    symmetry_operator_A,
)
from akltsync.model import ChainSpec, build_hamiltonian
from akltsync.operators import commutator, inversion_operator, total_ops


@pytest.fixture(scope="module")
def man6():
    return compute_manifold(build_hamiltonian(ChainSpec(N=6)), 6)


def test_two_site_manifold():
    man = compute_manifold(build_hamiltonian(ChainSpec(N=2)), 2)
    assert sorted(man.labels) == [(0, 0), (1, -1), (1, 0), (1, 1)]
    assert np.abs(np.array(man.energies)).max() < 1e-10


def test_n6_manifold_labels_and_energies(man6):
    assert man6.labels == ((0, 0), (1, -1), (1, 0), (1, 1))
    assert np.abs(np.array(man6.energies)).max() < 1e-10
    g = np.column_stack(man6.states)
    gram = g.conj().T @ g
    assert np.abs(gram - np.eye(4)).max() < 1e-10


def test_manifold_quantum_numbers(man6):
    tot = total_ops(6)
    for (s, m), psi in zip(man6.labels, man6.states):
        assert np.linalg.norm(tot["Sz_tot"].matrix @ psi - m * psi) < 1e-8
        assert np.linalg.norm(tot["S2_tot"].matrix @ psi - s * (s + 1) * psi) < 1e-8


def test_projector_idempotent(man6):
    p = man6.projector
    assert (p @ p - p).norm_max() < 1e-10


def test_manifold_deterministic(man6):
    again = compute_manifold(build_hamiltonian(ChainSpec(N=6)), 6)
    for a, b in zip(man6.states, again.states):
        assert np.abs(a - b).max() < 1e-12


def test_manifold_closed_under_lowering(man6):
    # Sm maps G11 -> G10 -> G1-1 -> 0 inside the manifold; singlet is killed
    tot = total_ops(6)
    sm = tot["Sm_tot"].matrix
    pmat = man6.projector.to_dense()
    for (s, m) in [(1, 1), (1, 0), (1, -1)]:
        low = sm @ man6.state(s, m)
        assert np.linalg.norm(low - pmat @ low) < 1e-9
        expected = np.sqrt(2.0) if m > -1 else 0.0
        assert abs(np.linalg.norm(low) - expected) < 1e-9
    assert np.linalg.norm(sm @ man6.state(0, 0)) < 1e-9


def test_symmetry_operator(man6):
    a = symmetry_operator_A(man6)
    assert (a @ a).norm_max() < 1e-12
    assert abs((a.dag() @ a).matrix.diagonal().sum() - 1.0) < 1e-10
    amat = a.matrix
    assert np.linalg.norm(amat @ man6.state(0, 0) - man6.state(1, -1)) < 1e-10
    for lbl in [(1, 1), (1, 0), (1, -1)]:
        assert np.linalg.norm(amat @ man6.state(*lbl)) < 1e-10
    # [Sz, A] = -A
    sz = total_ops(6)["Sz_tot"]
    assert (commutator(sz, a) + a).norm_max() < 1e-8
    # anti-symmetric under chain inversion
    p = inversion_operator(6)
    assert (p @ a @ p + a).norm_max() < 1e-8


def test_edge_profile(man6):
    prof = edge_profile(man6)
    assert prof.shape == (6,)
    assert np.abs(prof + prof[::-1]).max() < 1e-10   # antisymmetric
    mags = np.abs(prof)
    assert mags[0] > mags[1] > mags[2]               # decays into the bulk
    assert 0.2 < mags[1] / mags[0] < 0.45            # AKLT localization ~ 1/3


def test_epsilon_manifold_gap():
    n = 6
    man = compute_manifold(build_hamiltonian(ChainSpec(N=n, epsilon=1 / 6)), n)
    gap = man.singlet_triplet_gap
    assert gap > 0
    man_01 = compute_manifold(build_hamiltonian(ChainSpec(N=n, epsilon=0.1)), n)
    assert man.singlet_triplet_gap > man_01.singlet_triplet_gap > 0
    # triplet is exactly degenerate
    es = [man.energy(1, m) for m in (-1, 0, 1)]
    assert max(es) - min(es) < 1e-9


def test_epsilon_manifold_edge_profile_antisymmetric():
    man = compute_manifold(build_hamiltonian(ChainSpec(N=4, epsilon=0.1)), 4)
    prof = edge_profile(man)
    assert np.abs(prof + prof[::-1]).max() < 1e-9


def test_wrong_dimension_rejected():
    h = build_hamiltonian(ChainSpec(N=3))
    with pytest.raises(ValueError):
        compute_manifold(h, 4)


def test_missing_label_errors(man6):
    from akltsync.manifold import GroundManifold
    with pytest.raises(ManifoldError):
        man6.state(2, 0)
