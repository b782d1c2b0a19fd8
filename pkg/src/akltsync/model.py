"""Hamiltonian and jump-operator construction from declarative specs.

The clean chain is the spin-1 AKLT chain with a uniform longitudinal field,

    H = sum_j [ 1/2 S_j.S_{j+1} + (1/6 - epsilon) (S_j.S_{j+1})^2 + 1/3 ]
        + (B/N) sum_j S_j^z,

optionally deformed by bond disorder (1 - J_j) on the bracket, an
inhomogeneous field (B - B_j)/N, and a transverse field (Bx/N) sum_j S_j^x.
Disorder draws use the counter-based Philox generator so identical seeds
give bit-identical Hamiltonians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .operators import (
    Operator,
    commutator,
    embed,
    heisenberg_bond,
    identity,
    spin1_local,
    total_ops,
)


@dataclass(frozen=True)
class ChainSpec:
    """Full parameterization of the chain Hamiltonian."""

    N: int
    B: float = 0.0
    epsilon: float = 0.0
    Bx: float = 0.0
    Jmax: float = 0.0
    Bmax: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if not 0.0 <= self.epsilon <= 1.0 / 6.0 + 1e-15:
            raise ValueError("epsilon must lie in [0, 1/6]")
        if not 0.0 <= self.Jmax < 1.0:
            raise ValueError("Jmax must lie in [0, 1)")
        if self.Bmax < 0.0:
            raise ValueError("Bmax must be >= 0")
        if self.Bmax > 0.0 and self.Bmax > self.B:
            raise ValueError("Bmax must not exceed B")

    @property
    def dim(self) -> int:
        return 3 ** self.N


@dataclass(frozen=True)
class DissipatorSpec:
    """Rates of the global lowering and local pair dissipators."""

    gamma: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.gamma < 0.0 or self.kappa < 0.0:
            raise ValueError("rates must be nonnegative")


def disorder_draws(spec: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    """Bond factors J_1..J_{N-1} and field offsets B_1..B_N.

    Drawn in that fixed order from Philox keyed on the seed; the underlying
    uniforms are drawn even when the amplitudes are zero so that the same
    seed always consumes the same stream.
    """
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    j_draws = rng.random(spec.N - 1) * spec.Jmax
    b_draws = rng.random(spec.N) * spec.Bmax
    return j_draws, b_draws


def build_hamiltonian(spec: ChainSpec) -> Operator:
    """Assemble the chain Hamiltonian for a ChainSpec.

    The +1/3 bond constant sits inside the (1 - J_j) factor, so the clean
    AKLT ground energy is exactly 0. The biquadratic reduction and bond
    disorder are never combined (the bracketing of the two deformations
    together is ambiguous).
    """
    if spec.epsilon > 0.0 and spec.Jmax > 0.0:
        raise ValueError("epsilon > 0 and Jmax > 0 cannot be combined")
    n = spec.N
    j_draws, b_draws = disorder_draws(spec)
    one = identity(spec.dim)
    loc = spin1_local()

    h = None
    for j in range(1, n):
        bond = heisenberg_bond(j, n)
        term = 0.5 * bond + (1.0 / 6.0 - spec.epsilon) * (bond @ bond) \
            + (1.0 / 3.0) * one
        term = (1.0 - j_draws[j - 1]) * term
        h = term if h is None else h + term

    for j in range(1, n + 1):
        coeff = (spec.B - b_draws[j - 1]) / n
        if coeff != 0.0:
            h = h + coeff * embed(loc["Sz"], j, n)
        if spec.Bx != 0.0:
            h = h + (spec.Bx / n) * embed(loc["Sx"], j, n)
    return h


def build_global_dissipator(diss: DissipatorSpec, n_sites: int) -> Operator:
    """Collective lowering jump operator sqrt(gamma) * sum_j S_j^-."""
    return np.sqrt(diss.gamma) * total_ops(n_sites)["Sm_tot"]


def build_local_dissipators(diss: DissipatorSpec, n_sites: int) -> list[Operator]:
    """Pair jumps sqrt(kappa) |00><--| on each bond (j, j+1)."""
    if n_sites < 2:
        raise ValueError("need at least 2 sites")
    root = np.sqrt(diss.kappa)
    # two-site |00><--| in the site-major basis: |00> index 4, |--> index 8
    local = sp.csr_matrix((np.array([root]), (np.array([4]), np.array([8]))),
                          shape=(9, 9))
    op9 = Operator(local)
    return [embed(op9, j, n_sites) for j in range(1, n_sites)]


@dataclass(frozen=True)
class SymmetryReport:
    sz_commutator_max: float
    s2_commutator_max: float


def symmetry_check(h: Operator, n_sites: int) -> SymmetryReport:
    """Max-norm of [H, Sz_tot] and [H, S2_tot]."""
    tot = total_ops(n_sites)
    return SymmetryReport(
        sz_commutator_max=commutator(h, tot["Sz_tot"]).norm_max(),
        s2_commutator_max=commutator(h, tot["S2_tot"]).norm_max(),
    )
