"""Ground-state manifold of the field-free chain and the symmetry operator A.

For epsilon = 0 the manifold is the exact fourfold-degenerate zero-energy
eigenspace; for epsilon in (0, 1/6] it is the lowest singlet plus the lowest
triplet, which the biquadratic reduction splits. States are rotated to
simultaneous eigenvectors of Sz_tot and S2_tot and labelled by (S, Sz).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .operators import Operator, embed, inversion_operator, spin1_local, total_ops

#: largest dimension diagonalized densely (3^6); larger chains use Lanczos
DENSE_EIG_LIMIT = 729

_LABEL_ORDER = [(0, 0), (1, -1), (1, 0), (1, 1)]


class ManifoldError(RuntimeError):
    """Ground subspace could not be identified or labelled."""


@dataclass(frozen=True)
class GroundManifold:
    """The four labelled states |G_{S,Sz}> with energies and projector."""

    n_sites: int
    states: tuple  # four complex vectors, ordered as labels
    labels: tuple  # ((0,0), (1,-1), (1,0), (1,1))
    energies: tuple  # eigenvalues of the field-free Hamiltonian
    projector: Operator

    def state(self, s: int, sz: int) -> np.ndarray:
        try:
            k = self.labels.index((s, sz))
        except ValueError:
            raise ManifoldError(f"no state labelled (S={s}, Sz={sz})") from None
        return self.states[k]

    def energy(self, s: int, sz: int) -> float:
        return self.energies[self.labels.index((s, sz))]

    @property
    def singlet_triplet_gap(self) -> float:
        """E(lowest triplet) - E(singlet); zero for the clean AKLT chain."""
        return self.energy(1, -1) - self.energy(0, 0)


def _fix_phase(psi: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(psi)))  # ties resolve to the lowest index
    ph = psi[k] / abs(psi[k])
    return psi * np.conj(ph)


def _rotate_to_quantum_numbers(block: np.ndarray, sz_mat, s2_mat,
                               tol: float) -> list[tuple[np.ndarray, int, int, float]]:
    """Rotate a degenerate eigenblock to joint (Sz, S2) eigenvectors.

    Returns (state, S, Sz, label_residual) tuples. Raises ManifoldError if the
    quantum numbers do not come out integer within tol.
    """
    out = []
    szb = block.conj().T @ (sz_mat @ block)
    mw, mv = la.eigh(szb)
    start = 0
    while start < len(mw):
        stop = start + 1
        while stop < len(mw) and mw[stop] - mw[start] < 1e-6:
            stop += 1
        sub = block @ mv[:, start:stop]
        s2b = sub.conj().T @ (s2_mat @ sub)
        sw, sv = la.eigh(s2b)
        sub = sub @ sv
        for i in range(sub.shape[1]):
            psi = sub[:, i]
            m = mw[start]  # all equal within 1e-6 in this sub-block
            s2 = sw[i]
            s = 0.5 * (-1.0 + np.sqrt(1.0 + 4.0 * max(s2, 0.0)))
            s_int, m_int = round(s), round(m)
            resid = max(
                np.linalg.norm(sz_mat @ psi - m_int * psi),
                np.linalg.norm(s2_mat @ psi - s_int * (s_int + 1) * psi),
            )
            out.append((psi, s_int, m_int, resid))
        start = stop
    return out


def compute_manifold(h0: Operator, n_sites: int, tol: float = 1e-9) -> GroundManifold:
    """Find and label the four ground-subspace states of a field-free chain.

    h0 must be built with B = 0 and Bx = 0 so that [H, Sz] = [H, S^2] = 0 and
    the subspace separates into the lowest S=0 state plus the lowest S=1
    triplet. Dense diagonalization up to 3^6; Lanczos (ARPACK, which keeps a
    fully reorthogonalized Krylov basis) above that.
    """
    dim = h0.dim
    if dim != 3 ** n_sites:
        raise ValueError("operator dimension does not match n_sites")

    if dim <= DENSE_EIG_LIMIT:
        energies, vectors = la.eigh(h0.to_dense())
        n_low = min(dim, 12)
    else:
        n_low = 12
        energies, vectors = spla.eigsh(h0.matrix, k=n_low, which="SA")
        order = np.argsort(energies)
        energies, vectors = energies[order], vectors[:, order]

    tot = total_ops(n_sites)
    sz_mat, s2_mat = tot["Sz_tot"].matrix, tot["S2_tot"].matrix

    # resolve the low-lying spectrum into labelled states, cluster by cluster
    cluster_tol = max(tol, 1e-9)
    labelled = []  # (energy, state, S, Sz)
    start = 0
    while start < n_low:
        stop = start + 1
        while stop < n_low and energies[stop] - energies[start] < cluster_tol:
            stop += 1
        block = vectors[:, start:stop]
        for psi, s, m, resid in _rotate_to_quantum_numbers(block, sz_mat, s2_mat, tol):
            if resid > 1e-6:
                raise ManifoldError(
                    f"degenerate states not separable by (S, Sz): residual {resid:.2e}")
            labelled.append((energies[start:stop].mean(), psi, s, m))
        start = stop

    singlets = [x for x in labelled if (x[2], x[3]) == (0, 0)]
    if not singlets:
        raise ManifoldError("no S=0 state among the low-lying eigenstates")
    singlet = min(singlets, key=lambda x: x[0])

    triplet_groups: dict[float, dict[int, tuple]] = {}
    for e, psi, s, m in labelled:
        if s != 1:
            continue
        for key in triplet_groups:
            if abs(e - key) < cluster_tol:
                triplet_groups[key][m] = (e, psi)
                break
        else:
            triplet_groups[e] = {m: (e, psi)}
    complete = {e: g for e, g in triplet_groups.items() if set(g) == {-1, 0, 1}}
    if not complete:
        raise ManifoldError("no complete S=1 triplet among the low-lying eigenstates")
    tr_energy = min(complete)
    triplet = complete[tr_energy]

    # the four selected states must be the bottom of the spectrum
    picked = np.sort([singlet[0]] + [triplet[m][0] for m in (-1, 0, 1)])
    if np.abs(picked - energies[:4]).max() > cluster_tol:
        raise ManifoldError("ground subspace dimension != 4")

    states, labels, evals = [], [], []
    for s, m in _LABEL_ORDER:
        e, psi = singlet[:2] if s == 0 else triplet[m]
        states.append(_fix_phase(np.ascontiguousarray(psi, dtype=np.complex128)))
        labels.append((s, m))
        evals.append(float(e if s == 1 else singlet[0]))

    g = np.column_stack(states)
    overlaps = g.conj().T @ g - np.eye(4)
    if np.abs(overlaps).max() > 1e-10:
        raise ManifoldError("manifold states are not orthonormal")

    proj = Operator(sp.csr_matrix(g @ g.conj().T))
    return GroundManifold(n_sites=n_sites, states=tuple(states),
                          labels=tuple(labels), energies=tuple(evals),
                          projector=proj)


def symmetry_operator_A(man: GroundManifold) -> Operator:
    """Rank-1 operator |G_{1,-1}><G_{0,0}| connecting singlet and triplet."""
    ket = man.state(1, -1)
    bra = man.state(0, 0)
    return Operator(sp.csr_matrix(np.outer(ket, bra.conj())))


def edge_profile(man: GroundManifold, axis: str = "x") -> np.ndarray:
    """Transition amplitudes a_j = <G_{1,-1}| S_j^axis |G_{0,0}>.

    These carry the exponential edge localization of the fractionalized
    spins and are antisymmetric under chain inversion.
    """
    key = {"x": "Sx", "y": "Sy", "z": "Sz"}[axis]
    op = spin1_local()[key]
    bra = man.state(1, -1)
    ket = man.state(0, 0)
    n = man.n_sites
    return np.array([np.vdot(bra, embed(op, j, n).matrix @ ket)
                     for j in range(1, n + 1)])


def manifold_parity(man: GroundManifold) -> np.ndarray:
    """Inversion eigenvalues of the four manifold states (diagnostic)."""
    p = inversion_operator(man.n_sites).matrix
    return np.array([np.vdot(s, p @ s).real for s in man.states])
