"""Qutrits coupled to a lossy cavity mode, and its adiabatic elimination.

The full model is

    H_tot = H_chain + lam * sum_j (S_j^- a^dag + S_j^+ a) + Omega a^dag a,

with a single cavity jump sqrt(Gamma) a in the half convention. In the bad
cavity limit Gamma > lam the mode stays near vacuum and integrating it out
leaves the collective decay sqrt(g) S^- with g = 4 lam^2 / Gamma acting on
the qutrits alone; `adiabatic_comparison` quantifies the residual error as
a trace distance between the boson-traced full state and the effective one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .lindblad import EvolveOptions, LindbladModel, evolve
from .model import ChainSpec, build_hamiltonian
from .operators import Operator, identity, total_ops


@dataclass(frozen=True)
class CavityModel:
    n_qutrits: int
    lam: float          # qutrit-cavity coupling; config key "lambda"
    Gamma: float
    Omega: float = 0.0
    n_max: int = 4

    def __post_init__(self):
        if self.n_qutrits < 2:
            raise ValueError("n_qutrits must be >= 2")
        if self.Gamma <= 0:
            raise ValueError("Gamma must be positive")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")

    @property
    def gamma_effective(self) -> float:
        return 4.0 * self.lam ** 2 / self.Gamma

    @property
    def boson_dim(self) -> int:
        return self.n_max + 1


def annihilator(n_max: int) -> Operator:
    """Truncated boson ladder, a |n> = sqrt(n) |n-1>."""
    n = np.arange(1, n_max + 1)
    return Operator(sp.csr_matrix((np.sqrt(n.astype(float)), (n - 1, n)),
                                  shape=(n_max + 1, n_max + 1)))


def build_cavity_model(cm: CavityModel) -> LindbladModel:
    """Joint qutrits+boson Lindblad model (half convention)."""
    dq = 3 ** cm.n_qutrits
    nb = cm.boson_dim
    ib = identity(nb)
    iq = identity(dq)
    a = annihilator(cm.n_max)
    ad = a.dag()

    h_chain = build_hamiltonian(ChainSpec(N=cm.n_qutrits))
    tot = total_ops(cm.n_qutrits)
    sm, spl = tot["Sm_tot"], tot["Sp_tot"]

    h = Operator(sp.kron(h_chain.matrix, ib.matrix)
                 + cm.lam * (sp.kron(sm.matrix, ad.matrix)
                             + sp.kron(spl.matrix, a.matrix))
                 + cm.Omega * sp.kron(iq.matrix, (ad @ a).matrix))
    jump = Operator(np.sqrt(cm.Gamma) * sp.kron(iq.matrix, a.matrix))
    return LindbladModel(hamiltonian=h, jumps=(jump,), convention="half")


def effective_model(cm: CavityModel) -> LindbladModel:
    """Qutrits-only model with the eliminated-cavity collective decay."""
    h_chain = build_hamiltonian(ChainSpec(N=cm.n_qutrits))
    sm = total_ops(cm.n_qutrits)["Sm_tot"]
    return LindbladModel(hamiltonian=h_chain,
                         jumps=(np.sqrt(cm.gamma_effective) * sm,),
                         convention="half")


def partial_trace_boson(rho: np.ndarray, dq: int, nb: int) -> np.ndarray:
    return np.einsum("aibi->ab", rho.reshape(dq, nb, dq, nb))


def trace_distance(r1: np.ndarray, r2: np.ndarray) -> float:
    return 0.5 * float(np.abs(la.eigvalsh(r1 - r2)).sum())


@dataclass
class CavityComparison:
    times: np.ndarray
    trace_distance: np.ndarray
    boson_population: np.ndarray
    gamma_effective: float
    truncation_warning: bool


def adiabatic_comparison(cm: CavityModel, rho0_qutrits: np.ndarray, t_grid,
                         h: float | None = None) -> CavityComparison:
    """Error of the eliminated-cavity model along a time grid.

    The full model starts from rho0_qutrits tensor |0><0|_cavity; at every
    grid time the boson mode is traced out and compared against the
    effective evolution of the same qutrit state.
    """
    dq = 3 ** cm.n_qutrits
    nb = cm.boson_dim
    vac = np.zeros((nb, nb), dtype=complex)
    vac[0, 0] = 1.0
    rho0_full = np.kron(np.asarray(rho0_qutrits, dtype=complex), vac)

    full = build_cavity_model(cm)
    eff = effective_model(cm)
    number_op = Operator(sp.kron(identity(dq).matrix,
                                 (annihilator(cm.n_max).dag()
                                  @ annihilator(cm.n_max)).matrix))

    full_ts = evolve(full, rho0_full, t_grid,
                     EvolveOptions(h=h, observables={"n_boson": number_op},
                                   record_states=True))
    eff_ts = evolve(eff, np.asarray(rho0_qutrits, dtype=complex), t_grid,
                    EvolveOptions(h=h, record_states=True))

    tds = np.empty(len(t_grid))
    for i, ((_, rf), (_, re)) in enumerate(zip(full_ts.states, eff_ts.states)):
        tds[i] = trace_distance(partial_trace_boson(rf, dq, nb), re)

    pop = full_ts.observables["n_boson"].real
    truncated = bool(pop.max() > 0.1 * cm.n_max)
    if truncated:
        warnings.warn(
            f"boson population {pop.max():.3f} exceeds 0.1*n_max; increase "
            "the Fock cutoff", RuntimeWarning, stacklevel=2)
    return CavityComparison(times=np.asarray(t_grid, dtype=float),
                            trace_distance=tds, boson_population=pop,
                            gamma_effective=cm.gamma_effective,
                            truncation_warning=truncated)
