"""Stochastic circuit implementation of collective decay.

A register of qutrits couples to a single spin-1/2 ancilla through

    H_A = sum_j (S_j^+ |0><1|_A + S_j^- |1><0|_A),

one step being: unitary evolution by the symmetric Trotter splitting of
exp(-i sqrt(dt lam)/2 H_A), projective measurement of the ancilla, reset to
|0>_A. The measurement outcome m=1 realizes a collective lowering jump;
ensemble averaging reproduces the Lindblad model with jump sqrt(g) S^- in
the half convention, where g = lam*dt/4 per circuit step (time is counted
in steps).

Basis order: register site-major as in `operators`, ancilla as the fastest
(last) tensor factor with basis |0>_A, |1>_A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .operators import Operator, embed, normalize, spin1_local, total_ops


@dataclass(frozen=True)
class CircuitSpec:
    n_qutrits: int
    lam: float          # coupling rate; the config key is "lambda"
    dt: float
    steps: int
    trajectories: int
    seed: int = 0
    record_every: int = 1

    def __post_init__(self):
        if self.n_qutrits < 2:
            raise ValueError("n_qutrits must be >= 2")
        if self.lam <= 0 or self.dt <= 0:
            raise ValueError("lam and dt must be positive")
        if self.lam * self.dt >= 0.1:
            raise ValueError("lam * dt must stay below 0.1 (first-order "
                             "jump-probability regime)")
        if self.steps < 1 or self.trajectories < 1:
            raise ValueError("steps and trajectories must be >= 1")

    @property
    def theta(self) -> float:
        """Trotter wing angle sqrt(dt*lam)/4; the full step applies twice this."""
        return np.sqrt(self.dt * self.lam) / 4.0

    @property
    def gamma(self) -> float:
        """Effective collective decay rate per circuit step, lam*dt/4."""
        return self.lam * self.dt / 4.0


def ha_term(j: int, n_qutrits: int) -> Operator:
    """Single-qutrit coupling H_j = S_j^+ |0><1|_A + S_j^- |1><0|_A."""
    loc = spin1_local()
    up = sp.csr_matrix((np.array([1.0]), (np.array([0]), np.array([1]))), shape=(2, 2))
    down = up.T.tocsr()
    spj = embed(loc["Sp"], j, n_qutrits).matrix
    smj = embed(loc["Sm"], j, n_qutrits).matrix
    return Operator(sp.kron(spj, up) + sp.kron(smj, down))


def build_ha(n_qutrits: int) -> Operator:
    """Full register-ancilla coupling, H_A = H_1 + ... + H_n."""
    if n_qutrits < 1:
        raise ValueError("need at least one qutrit")
    out = ha_term(1, n_qutrits)
    for j in range(2, n_qutrits + 1):
        out = out + ha_term(j, n_qutrits)
    return out


@lru_cache(maxsize=32)
def _term_eigs(n_qutrits: int, j: int):
    w, v = la.eigh(ha_term(j, n_qutrits).to_dense())
    return w, v


def _term_unitary(n_qutrits: int, j: int, theta: float) -> np.ndarray:
    w, v = _term_eigs(n_qutrits, j)
    return (v * np.exp(-1j * theta * w)) @ v.conj().T


def trotter_unitary(n_qutrits: int, theta: float) -> np.ndarray:
    """Symmetric splitting of exp(-2i theta H_A).

    For two qutrits this is U_1(theta) U_2(2 theta) U_1(theta); more qutrits
    compose half-angle wings of H_1..H_{n-1} around a full-angle core of
    H_n, which preserves the splitting order.
    """
    u = _term_unitary(n_qutrits, n_qutrits, 2.0 * theta)
    for j in range(n_qutrits - 1, 0, -1):
        wing = _term_unitary(n_qutrits, j, theta)
        u = wing @ u @ wing
    return u


def exact_step_unitary(n_qutrits: int, theta: float) -> np.ndarray:
    """exp(-2i theta H_A), the target the Trotter splitting approximates."""
    w, v = la.eigh(build_ha(n_qutrits).to_dense())
    return (v * np.exp(-2j * theta * w)) @ v.conj().T


@lru_cache(maxsize=32)
def _cached_step(n_qutrits: int, theta: float) -> np.ndarray:
    u = trotter_unitary(n_qutrits, theta)
    u.flags.writeable = False
    return u


def trotter_step(state: np.ndarray, spec: CircuitSpec) -> np.ndarray:
    """One Trotter step on a register+ancilla state."""
    return _cached_step(spec.n_qutrits, spec.theta) @ state


def measure_and_reset(state: np.ndarray, rng: np.random.Generator):
    """Projective ancilla measurement in |0>,|1>, then reset to |0>_A.

    Returns (outcome, register_state); the register state is renormalized
    and the caller re-tensors the fresh ancilla for the next step.
    """
    full = state.reshape(-1, 2)
    p1 = float(np.sum(np.abs(full[:, 1]) ** 2))
    p0 = float(np.sum(np.abs(full[:, 0]) ** 2))
    if p0 < 1e-15 and p1 < 1e-15:
        raise ValueError("state has no weight on either ancilla outcome")
    if rng.random() < p1:
        return 1, full[:, 1] / np.sqrt(p1)
    return 0, full[:, 0] / np.sqrt(p0)


def attach_ancilla(register: np.ndarray) -> np.ndarray:
    full = np.zeros(register.size * 2, dtype=np.complex128)
    full[0::2] = register
    return full


@dataclass
class TrajectoryRecord:
    steps: np.ndarray          # recorded step indices
    outcomes: np.ndarray       # outcome bit per step, length spec.steps
    jump_steps: np.ndarray
    sz_expect: np.ndarray      # register <Sz> at recorded steps
    spsm_expect: np.ndarray    # register <S+S-> at recorded steps
    final_state: np.ndarray

    @property
    def jump_count(self) -> int:
        return int(self.outcomes.sum())


def run_trajectory(spec: CircuitSpec, psi0: np.ndarray,
                   traj_index: int = 0) -> TrajectoryRecord:
    """One stochastic trajectory with its own Philox stream."""
    rng = np.random.Generator(np.random.Philox(key=spec.seed ^ traj_index))
    tot = total_ops(spec.n_qutrits)
    sz = tot["Sz_tot"].matrix
    spsm = (tot["Sp_tot"] @ tot["Sm_tot"]).matrix

    psi = normalize(np.asarray(psi0, dtype=np.complex128))
    outcomes = np.zeros(spec.steps, dtype=np.uint8)
    rec_steps, szs, ns = [], [], []

    def record(k):
        rec_steps.append(k)
        szs.append(np.vdot(psi, sz @ psi).real)
        ns.append(np.vdot(psi, spsm @ psi).real)

    record(0)
    for k in range(spec.steps):
        full = trotter_step(attach_ancilla(psi), spec)
        m, psi = measure_and_reset(full, rng)
        outcomes[k] = m
        nrm = np.linalg.norm(psi)
        if abs(nrm - 1.0) > 1e-10:
            psi = psi / nrm
        if (k + 1) % spec.record_every == 0 or k == spec.steps - 1:
            record(k + 1)

    return TrajectoryRecord(
        steps=np.array(rec_steps), outcomes=outcomes,
        jump_steps=np.flatnonzero(outcomes) + 1,
        sz_expect=np.array(szs), spsm_expect=np.array(ns),
        final_state=psi)


@dataclass
class EnsembleResult:
    """Trajectory-averaged dynamics, time measured in circuit steps."""

    steps: np.ndarray              # recorded step indices
    rho_avg: list                  # averaged register density matrix per record
    jump_fraction: np.ndarray      # empirical E[dN] per step, length spec.steps
    spsm_expect: np.ndarray        # ensemble <S+S-> before each step
    spsm_sem: np.ndarray           # standard error of the jump fraction
    gamma: float
    trajectories: int

    def as_arrays(self):
        return self.steps, np.array(self.rho_avg)


def run_ensemble(spec: CircuitSpec, psi0: np.ndarray) -> EnsembleResult:
    """Average many trajectories, vectorized across the ensemble.

    Trajectory t draws its uniforms from Philox keyed on seed ^ t, so
    results are bit-reproducible and independent of batching.
    """
    dq = 3 ** spec.n_qutrits
    m_traj = spec.trajectories
    u_step = _cached_step(spec.n_qutrits, spec.theta)
    tot = total_ops(spec.n_qutrits)
    spsm = (tot["Sp_tot"] @ tot["Sm_tot"]).matrix

    uniforms = np.empty((spec.steps, m_traj))
    for t in range(m_traj):
        gen = np.random.Generator(np.random.Philox(key=spec.seed ^ t))
        uniforms[:, t] = gen.random(spec.steps)

    psi = np.tile(normalize(np.asarray(psi0, dtype=np.complex128))[:, None],
                  (1, m_traj))
    full = np.zeros((2 * dq, m_traj), dtype=np.complex128)

    rec_steps = [0]
    rho_avg = [(psi @ psi.conj().T) / m_traj]
    jump_fraction = np.empty(spec.steps)
    spsm_exp, spsm_sem = [], []

    for k in range(spec.steps):
        x = spsm @ psi
        nvals = np.einsum("it,it->t", psi.conj(), x).real
        spsm_exp.append(nvals.mean())

        full[0::2, :] = psi
        full[1::2, :] = 0.0
        evolved = u_step @ full
        amp0 = evolved[0::2, :]
        amp1 = evolved[1::2, :]
        p1 = np.einsum("it,it->t", amp1.conj(), amp1).real
        p0 = np.einsum("it,it->t", amp0.conj(), amp0).real
        jump = uniforms[k] < p1
        jump_fraction[k] = jump.mean()
        spsm_sem.append(np.sqrt(max(jump_fraction[k] * (1 - jump_fraction[k]), 0.0)
                                / m_traj))
        denom1 = np.sqrt(np.where(p1 > 0, p1, 1.0))
        denom0 = np.sqrt(np.where(p0 > 0, p0, 1.0))
        psi = np.where(jump[None, :], amp1 / denom1, amp0 / denom0)
        nrm = np.sqrt(np.einsum("it,it->t", psi.conj(), psi).real)
        psi = psi / nrm

        if (k + 1) % spec.record_every == 0 or k == spec.steps - 1:
            rec_steps.append(k + 1)
            rho_avg.append((psi @ psi.conj().T) / m_traj)

    return EnsembleResult(steps=np.array(rec_steps), rho_avg=rho_avg,
                          jump_fraction=jump_fraction,
                          spsm_expect=np.array(spsm_exp),
                          spsm_sem=np.array(spsm_sem),
                          gamma=spec.gamma, trajectories=m_traj)


def total_spin_state(n_qutrits: int, s: int, m: int) -> np.ndarray:
    """A register eigenstate of (S^2, Sz); deterministic phase convention."""
    tot = total_ops(n_qutrits)
    w2, v2 = la.eigh(tot["S2_tot"].to_dense())
    sel = np.abs(w2 - s * (s + 1)) < 1e-9
    if not sel.any():
        raise ValueError(f"no total-spin-{s} sector")
    block = v2[:, sel]
    szb = block.conj().T @ (tot["Sz_tot"].to_dense() @ block)
    mw, mv = la.eigh(szb)
    pick = np.abs(mw - m) < 1e-9
    if not pick.any():
        raise ValueError(f"no Sz={m} state in the S={s} sector")
    psi = block @ mv[:, pick][:, 0]
    k = int(np.argmax(np.abs(psi)))
    return psi * np.conj(psi[k] / abs(psi[k]))
