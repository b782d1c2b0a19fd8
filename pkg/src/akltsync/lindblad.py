"""Lindblad master-equation engine.

The Liouvillian

    L[rho] = -i [H, rho] + sum_mu w (2 L_mu rho L_mu^dag - {L_mu^dag L_mu, rho})

is applied matrix-free; w = 1 is the `factor2` convention (the package
default), w = 1/2 the `half` convention. Density matrices are evolved with
fixed-step RK4 for bit-reproducibility. The superoperator decomposes into
invariant blocks labelled by the magnetization difference between row and
column index whenever H conserves Sz and every jump shifts it uniformly;
eigenvalues near the imaginary axis are extracted per block, densely for
small blocks and via Arnoldi iteration on the propagator exp(L tau) above
the cutoff.

Internally the time stepper exploits Hermiticity: for Hermitian rho the
right-multiplications are transposes of left-multiplications, so one
half-sided product T = -iH rho - K rho + sum_mu w L_mu (L_mu rho)^dag
suffices and the derivative is T + T^dag, which keeps every RK4 stage
exactly Hermitian. Jumps whose matrix is a weighted partial permutation
(one entry per row and column, e.g. the local pair dissipators and the
truncated boson annihilator) are applied by index gather/scatter instead
of sparse products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels as K
from .operators import Operator, site_magnetizations
from .model import build_hamiltonian  # noqa: F401  (re-exported for recipes)


class EngineError(RuntimeError):
    pass


class TraceDriftError(EngineError):
    pass


class PositivityError(EngineError):
    pass


class SpectrumError(EngineError):
    pass


@dataclass(frozen=True)
class LindbladModel:
    hamiltonian: Operator
    jumps: tuple
    convention: str = "factor2"

    def __post_init__(self):
        if self.convention not in ("factor2", "half"):
            raise ValueError(f"unknown convention {self.convention!r}")
        if not self.hamiltonian.hermitian_hint:
            raise ValueError("Hamiltonian must be Hermitian")
        object.__setattr__(self, "jumps", tuple(self.jumps))
        for l in self.jumps:
            if l.dim != self.hamiltonian.dim:
                raise ValueError("jump operator dimension mismatch")

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    @property
    def weight(self) -> float:
        return 1.0 if self.convention == "factor2" else 0.5


# ---------------------------------------------------------------------------
# compiled representation


def _csr_parts(m: sp.csr_matrix):
    data = m.data
    if data.size and np.abs(data.imag).max() == 0.0:
        data = np.ascontiguousarray(data.real)
    return np.ascontiguousarray(data), m.indices, m.indptr


class _PermJump:
    """Jump c_t |r_t><c_t| with unique rows and columns: gather/scatter."""

    def __init__(self, rows, cols, weights):
        self.rows = rows
        self.cols = cols
        self.rr = np.ix_(rows, rows)
        self.cc = np.ix_(cols, cols)
        w = np.outer(weights, weights.conj())
        self.wmat = w.real.copy() if np.abs(w.imag).max() == 0.0 else w


class _GeneralJump:
    def __init__(self, l_csr: sp.csr_matrix):
        self.l = _csr_parts(l_csr)
        self.ldag = _csr_parts(l_csr.getH().tocsr())


class _Compiled:
    def __init__(self, model: LindbladModel):
        self.dim = model.dim
        self.w = model.weight
        self.h = _csr_parts(model.hamiltonian.matrix)

        k_eff = None
        self.perm, self.general = [], []
        for jump in model.jumps:
            m = jump.matrix
            if m.nnz == 0:
                continue
            coo = m.tocoo()
            lvl = m.getH() @ m
            k_eff = lvl if k_eff is None else k_eff + lvl
            unique = (np.unique(coo.row).size == coo.nnz
                      and np.unique(coo.col).size == coo.nnz)
            if unique:
                order = np.argsort(coo.row)
                self.perm.append(_PermJump(coo.row[order], coo.col[order],
                                           coo.data[order]))
            else:
                self.general.append(_GeneralJump(m.tocsr()))
        self.k = None
        if k_eff is not None:
            k_eff = (model.weight * k_eff).tocsr()
            k_eff.sum_duplicates()
            self.k = _csr_parts(k_eff)

        self._radius: float | None = None
        self._h_radius: float | None = None

    # spectral-radius estimates used for default steps and stability guards

    def h_radius(self) -> float:
        if self._h_radius is None:
            if self.h[0].size == 0:
                self._h_radius = 0.0
                return 0.0
            h = sp.csr_matrix(
                (self.h[0].astype(np.complex128), self.h[1], self.h[2]),
                shape=(self.dim, self.dim))
            if self.dim <= 2:
                vals = la.eigvalsh(h.toarray())
            else:
                hi = spla.eigsh(h, k=1, which="LA",
                                return_eigenvectors=False)[0]
                lo = spla.eigsh(h, k=1, which="SA",
                                return_eigenvectors=False)[0]
                vals = np.array([lo, hi])
            self._h_radius = float(np.abs(vals).max())
        return self._h_radius

    def radius(self, model, iters: int = 25, seed: int = 11) -> float:
        if self._radius is None:
            rng = np.random.Generator(np.random.Philox(key=seed))
            z = rng.standard_normal((self.dim, self.dim)) \
                + 1j * rng.standard_normal((self.dim, self.dim))
            z /= np.linalg.norm(z)
            nrm = 1.0
            for _ in range(iters):
                z = apply_liouvillian(model, z)
                nrm = np.linalg.norm(z)
                if nrm == 0.0:
                    break
                z /= nrm
            self._radius = float(nrm)
        return self._radius


def _compiled(model: LindbladModel) -> _Compiled:
    cached = model.__dict__.get("_compiled_cache")
    if cached is None:
        cached = _Compiled(model)
        object.__setattr__(model, "_compiled_cache", cached)
    return cached


# ---------------------------------------------------------------------------
# Liouvillian application


def _rhs_half(c: _Compiled, rho: np.ndarray, t: np.ndarray,
              x: np.ndarray | None, xd: np.ndarray | None) -> None:
    """t = -iH rho - K rho + sum w L (L rho)^dag + perm-jump halves.

    Valid derivative contribution only together with its adjoint; rho must
    be Hermitian. The Hamiltonian and anticommutator products share one
    output pass.
    """
    if c.k is not None:
        K.csr2_mm_set(*c.h, -1j, *c.k, complex(-1.0), rho, t)
    else:
        K.csr_mm_set(*c.h, rho, -1j, t)
    for gj in c.general:
        K.csr_mm_set(*gj.l, rho, complex(1.0), x)
        K.conj_transpose(x, xd)
        K.csr_mm_acc(*gj.l, xd, complex(c.w), t)
    for pj in c.perm:
        t[pj.rr] += (c.w * pj.wmat) * rho[pj.cc]


def apply_liouvillian(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    """L[rho] for an arbitrary (not necessarily Hermitian) matrix rho.

    The output has zero trace to roundoff for any input.
    """
    c = _compiled(model)
    if rho.shape != (c.dim, c.dim):
        raise ValueError(f"rho must be {c.dim}x{c.dim}, got {rho.shape}")
    rho = np.ascontiguousarray(rho, dtype=np.complex128)

    out = np.empty_like(rho)
    v = np.empty_like(rho)
    w = np.empty_like(rho)
    K.conj_transpose(rho, w)

    if c.k is not None:
        K.csr2_mm_set(*c.h, -1j, *c.k, complex(-1.0), rho, out)
        K.csr2_mm_set(*c.h, -1j, *c.k, complex(-1.0), w, v)
    else:
        K.csr_mm_set(*c.h, rho, -1j, out)
        K.csr_mm_set(*c.h, w, -1j, v)
    vd = np.empty_like(rho)
    K.conj_transpose(v, vd)
    out += vd

    if c.general:
        x = np.empty_like(rho)
        xd = np.empty_like(rho)
        for gj in c.general:
            K.csr_mm_set(*gj.l, w, complex(1.0), x)   # L rho^dag
            K.conj_transpose(x, xd)                   # rho L^dag
            K.csr_mm_set(*gj.l, xd, complex(1.0), x)  # L rho L^dag
            out += (2.0 * c.w) * x
    for pj in c.perm:
        out[pj.rr] += (2.0 * c.w) * pj.wmat * rho[pj.cc]
    return out


def liouvillian_superoperator(model: LindbladModel) -> sp.csr_matrix:
    """Explicit sparse superoperator matrix in row-major vectorization.

    vec(A rho B) = kron(A, B^T) vec(rho). Intended for small chains (the
    matrix has dim^2 rows); the engine itself never builds it.
    """
    d = model.dim
    i = sp.identity(d, format="csr")
    h = model.hamiltonian.matrix
    m = -1j * (sp.kron(h, i) - sp.kron(i, h.T))
    w = model.weight
    for jump in model.jumps:
        l = jump.matrix
        lvl = (l.getH() @ l).tocsr()
        m = m + w * (2.0 * sp.kron(l, l.conj())
                     - sp.kron(lvl, i) - sp.kron(i, lvl.T))
    return m.tocsr()


def restricted_generator(model: LindbladModel, states) -> np.ndarray:
    """L projected onto the operator space spanned by |a><b| of `states`.

    Returns the n^2 x n^2 matrix M[(cd),(ab)] = Tr(E_cd^dag L[E_ab]). Only
    meaningful when the span is invariant under L (e.g. the ground-manifold
    operator space).
    """
    states = [np.asarray(s) for s in states]
    n = len(states)
    mat = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            e = np.outer(states[a], states[b].conj())
            le = apply_liouvillian(model, e)
            for cidx in range(n):
                row = states[cidx].conj() @ le
                for didx in range(n):
                    mat[cidx * n + didx, a * n + b] = row @ states[didx]
    return mat


# ---------------------------------------------------------------------------
# density matrices and time evolution


def validate_density_matrix(rho: np.ndarray, trace_tol: float = 1e-9,
                            herm_tol: float = 1e-9, psd_tol: float = 1e-7) -> None:
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} differs from 1 beyond {trace_tol}")
    if np.abs(rho - rho.conj().T).max() > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    w = la.eigvalsh(rho)
    if w.min() < -psd_tol:
        raise ValueError(f"negative eigenvalue {w.min():.3e}")


def random_pure_state(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar-like random state: iid complex normal amplitudes, normalized."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    re = rng.standard_normal(dim)
    im = rng.standard_normal(dim)
    psi = re + 1j * im
    return psi / np.linalg.norm(psi)


@dataclass
class EvolveOptions:
    h: float | None = None
    observables: dict = field(default_factory=dict)  # name -> Operator
    record_states: bool = False
    state_every: int = 1
    positivity_every: int | None = None
    positivity_abort: float = 1e-5
    trace_tol: float = 1e-7
    check_stability: bool = True


@dataclass
class TimeSeries:
    times: np.ndarray
    observables: dict
    trace: np.ndarray
    min_eig: np.ndarray
    states: list | None
    step: float
    n_steps: int


def default_step(model: LindbladModel) -> float:
    """Coherent-phase step rule: h such that h * 2 rho(H) = 0.1."""
    c = _compiled(model)
    r = c.h_radius()
    return 0.1 / (2.0 * r) if r > 0 else 0.01


def stability_limit(model: LindbladModel) -> float:
    """Largest RK4-stable step, from a power-iteration radius estimate."""
    c = _compiled(model)
    r = c.radius(model)
    return 2.5 / r if r > 0 else math.inf


def evolve(model: LindbladModel, rho0: np.ndarray, t_grid,
           opts: EvolveOptions | None = None) -> TimeSeries:
    """Integrate d rho/dt = L[rho] over a strictly increasing grid from 0.

    Fixed-step RK4 applied matrix-free; the step divides each grid interval
    exactly, so identical inputs give bit-identical output. Every accepted
    step is Hermitian by construction; trace drift beyond trace_tol per unit
    time and positivity violations beyond positivity_abort raise.
    """
    opts = opts or EvolveOptions()
    c = _compiled(model)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing and start at 0")
    validate_density_matrix(rho0)

    h = opts.h if opts.h is not None else default_step(model)
    if opts.check_stability:
        h_max = stability_limit(model)
        if h > h_max:
            raise EngineError(
                f"step {h} exceeds the RK4 stability estimate {h_max:.4g}; "
                "lower h or disable check_stability")

    rho = 0.5 * (rho0 + rho0.conj().T)
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    t1 = np.empty_like(rho)
    t2 = np.empty_like(rho)
    t3 = np.empty_like(rho)
    t4 = np.empty_like(rho)
    y = np.empty_like(rho)
    nxt = np.empty_like(rho)
    x = xd = None
    if c.general:
        x = np.empty_like(rho)
        xd = np.empty_like(rho)

    obs_items = [(name, op.matrix.tocoo()) for name, op in opts.observables.items()]
    n_rec = len(t_grid)
    results = {name: np.empty(n_rec, dtype=complex) for name, _ in obs_items}
    traces = np.empty(n_rec)
    min_eig = np.full(n_rec, np.nan)
    pos_every = opts.positivity_every
    if pos_every is None:
        pos_every = max(1, (n_rec - 1) // 20) if n_rec > 1 else 1
    states = [] if opts.record_states else None

    def record(i, t):
        traces[i] = np.trace(rho).real
        if abs(traces[i] - 1.0) > opts.trace_tol * max(t, 1.0):
            raise TraceDriftError(
                f"trace drift {traces[i] - 1.0:.3e} at t={t} exceeds "
                f"{opts.trace_tol} per unit time")
        if i % pos_every == 0 or i == n_rec - 1:
            w = la.eigvalsh(rho)
            min_eig[i] = w[0]
            if w[0] < -opts.positivity_abort:
                raise PositivityError(
                    f"min eigenvalue {w[0]:.3e} at t={t} below -{opts.positivity_abort}")
        for name, coo in obs_items:
            results[name][i] = np.sum(coo.data * rho[coo.col, coo.row])
        if states is not None and i % opts.state_every == 0:
            states.append((t, rho.copy()))

    total_steps = 0
    record(0, 0.0)
    for i in range(1, n_rec):
        dt = t_grid[i] - t_grid[i - 1]
        n_sub = max(1, math.ceil(dt / h - 1e-12))
        hh = dt / n_sub
        for _ in range(n_sub):
            _rhs_half(c, rho, t1, x, xd)
            K.stage_from_half(rho, t1, hh / 2.0, y)
            _rhs_half(c, y, t2, x, xd)
            K.stage_from_half(rho, t2, hh / 2.0, y)
            _rhs_half(c, y, t3, x, xd)
            K.stage_from_half(rho, t3, hh, y)
            _rhs_half(c, y, t4, x, xd)
            K.rk4_combine(rho, t1, t2, t3, t4, hh, nxt)
            rho, nxt = nxt, rho
        total_steps += n_sub
        record(i, t_grid[i])

    return TimeSeries(times=t_grid, observables=results, trace=traces,
                      min_eig=min_eig, states=states, step=h, n_steps=total_steps)


# ---------------------------------------------------------------------------
# magnetization-difference block structure and spectra


def delta_m_blocks(dim: int, n_sites: int) -> dict:
    """Partition of (row, col) index pairs by Delta m = m(row) - m(col).

    Vectorized-operator entries rho[i, j] = <i|rho|j> with m_i - m_j = Dm
    form an invariant sector whenever H conserves Sz and each jump shifts it
    uniformly. Returns {Dm: (rows, cols)}.
    """
    if dim != 3 ** n_sites:
        raise ValueError("dim must equal 3**n_sites")
    m = site_magnetizations(n_sites)
    sectors = {mm: np.flatnonzero(m == mm) for mm in range(n_sites, -n_sites - 1, -1)}
    blocks = {}
    for dm in range(-2 * n_sites, 2 * n_sites + 1):
        rows_parts, cols_parts = [], []
        for mi, idx_i in sectors.items():
            mj = mi - dm
            if mj in sectors and idx_i.size:
                idx_j = sectors[mj]
                if idx_j.size:
                    rows_parts.append(np.repeat(idx_i, idx_j.size))
                    cols_parts.append(np.tile(idx_j, idx_i.size))
        if rows_parts:
            blocks[dm] = (np.concatenate(rows_parts), np.concatenate(cols_parts))
    return blocks


def magnetization_shift(op: Operator, n_sites: int) -> int:
    """Uniform magnetization shift of an operator, or raise if non-uniform."""
    m = site_magnetizations(n_sites)
    coo = op.matrix.tocoo()
    if coo.nnz == 0:
        return 0
    shifts = m[coo.row] - m[coo.col]
    if not np.all(shifts == shifts[0]):
        raise SpectrumError("operator does not shift magnetization uniformly")
    return int(shifts[0])


def _verify_weak_symmetry(model: LindbladModel, n_sites: int) -> None:
    m = site_magnetizations(n_sites)
    coo = model.hamiltonian.matrix.tocoo()
    if coo.nnz and np.any(m[coo.row] != m[coo.col]):
        raise SpectrumError(
            "Hamiltonian does not conserve total magnetization "
            "(transverse fields break the block structure)")
    for jump in model.jumps:
        magnetization_shift(jump, n_sites)


@dataclass
class SpectrumOptions:
    tau: float = 1.0
    dense_cutoff: int = 6000
    prop_h: float | None = None
    arnoldi_tol: float = 1e-10
    ncv: int | None = None
    maxiter: int = 5000
    method: str | None = None   # force "dense" or "arnoldi"
    seed: int = 7
    residual_tol: float = 1e-6


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    block_labels: np.ndarray
    residuals: np.ndarray
    method: str

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "eigenvalues": [
                {"re": float(v.real), "im": float(v.imag),
                 "delta_m": int(b), "residual": float(r)}
                for v, b, r in zip(self.eigenvalues, self.block_labels,
                                   self.residuals)
            ],
        }


def _dense_block_matrix(model: LindbladModel, rows, cols) -> np.ndarray:
    d = model.dim
    bd = rows.size
    if d <= 243:
        m = liouvillian_superoperator(model)
        flat = rows.astype(np.int64) * d + cols.astype(np.int64)
        return m[flat][:, flat].toarray()
    mat = np.empty((bd, bd), dtype=complex)
    e = np.zeros((d, d), dtype=complex)
    for t in range(bd):
        e[rows[t], cols[t]] = 1.0
        le = apply_liouvillian(model, e)
        mat[:, t] = le[rows, cols]
        e[rows[t], cols[t]] = 0.0
    return mat


def spectrum_near_axis(model: LindbladModel, n_sites: int, delta_m: int,
                       k: int, opts: SpectrumOptions | None = None) -> SpectrumResult:
    """The k eigenvalues of L closest to the imaginary axis in one Dm block.

    Dense non-Hermitian eigensolve below dense_cutoff; otherwise Arnoldi on
    the short-time propagator exp(L tau) (integrated matrix-free with RK4),
    mapping Ritz values back through log(mu)/tau. Reported eigenvalues carry
    independently computed residuals ||L[rho_k] - lambda_k rho_k|| / ||rho_k||.
    """
    opts = opts or SpectrumOptions()
    _verify_weak_symmetry(model, n_sites)
    blocks = delta_m_blocks(model.dim, n_sites)
    if delta_m not in blocks:
        raise SpectrumError(f"no block with delta_m={delta_m}")
    rows, cols = blocks[delta_m]
    bd = rows.size
    method = opts.method or ("dense" if bd <= opts.dense_cutoff else "arnoldi")

    if method == "dense":
        mat = _dense_block_matrix(model, rows, cols)
        vals, vecs = la.eig(mat)
        order = np.argsort(-vals.real)[:k]
        vals = vals[order]
        vecs = vecs[:, order]
        resid = np.array([
            np.linalg.norm(mat @ vecs[:, i] - vals[i] * vecs[:, i])
            / np.linalg.norm(vecs[:, i]) for i in range(len(vals))])
    else:
        if k >= bd - 1:
            raise SpectrumError("k too large for Arnoldi on this block")
        tau = opts.tau
        c = _compiled(model)
        prop_h = opts.prop_h
        if prop_h is None:
            prop_h = min(0.002, 0.5 * stability_limit(model))
        n_sub = max(1, math.ceil(tau / prop_h - 1e-12))
        hh = tau / n_sub

        buf = np.zeros((model.dim, model.dim), dtype=complex)
        k1 = np.empty_like(buf); k2 = np.empty_like(buf)
        k3 = np.empty_like(buf); k4 = np.empty_like(buf)
        y = np.empty_like(buf)

        def matvec(xvec):
            buf[:] = 0.0
            buf[rows, cols] = xvec
            r = buf
            for _ in range(n_sub):
                k1[:] = apply_liouvillian(model, r)
                K.axpy(r, k1, hh / 2.0, y)
                k2[:] = apply_liouvillian(model, y)
                K.axpy(r, k2, hh / 2.0, y)
                k3[:] = apply_liouvillian(model, y)
                K.axpy(r, k3, hh, y)
                k4[:] = apply_liouvillian(model, y)
                K.rk4_combine_general(r, k1, k2, k3, k4, hh, buf)
                r = buf
            return r[rows, cols].copy()

        op = spla.LinearOperator((bd, bd), matvec=matvec, dtype=complex)
        rng = np.random.Generator(np.random.Philox(key=opts.seed))
        v0 = rng.standard_normal(bd) + 1j * rng.standard_normal(bd)
        ncv = opts.ncv or min(bd, max(2 * k + 10, 24))
        try:
            mu, vecs_b = spla.eigs(op, k=k, which="LM", v0=v0, ncv=ncv,
                                   maxiter=opts.maxiter, tol=opts.arnoldi_tol)
        except spla.ArpackNoConvergence as exc:
            raise SpectrumError(f"Arnoldi did not converge: {exc}") from exc
        vals = np.log(mu) / tau
        if np.any(np.abs(vals.imag) * tau > np.pi / 2):
            raise SpectrumError(
                "propagator phase exceeds the aliasing guard |Im| tau <= pi/2; "
                "reduce tau")
        order = np.argsort(-vals.real)
        vals = vals[order]
        vecs_b = vecs_b[:, order]
        resid = np.empty(len(vals))
        for i in range(len(vals)):
            buf[:] = 0.0
            buf[rows, cols] = vecs_b[:, i]
            lr = apply_liouvillian(model, buf)
            resid[i] = (np.linalg.norm(lr - vals[i] * buf)
                        / np.linalg.norm(vecs_b[:, i]))

    if np.any(vals.real > 1e-8):
        raise SpectrumError(
            f"eigenvalue with Re = {vals.real.max():.3e} > 1e-8; CPTP "
            "structure violated")
    if np.any(resid > opts.residual_tol):
        raise SpectrumError(
            f"residual {resid.max():.3e} above {opts.residual_tol}")
    return SpectrumResult(eigenvalues=vals,
                          block_labels=np.full(len(vals), delta_m),
                          residuals=resid, method=method)


# ---------------------------------------------------------------------------
# decoherence-free-subspace overlaps


@dataclass(frozen=True)
class DfsCoefficients:
    """Overlaps of an initial state with the DFS eigenoperators.

    c0, c1 weight the steady states |G00><G00| and |G1m><G1m|; c10 and c01
    weight the coherences A rho0 and rho0 A^dag. For the decoherence-free
    set the left eigenvectors equal the right ones, so each coefficient is
    a plain Hilbert-Schmidt overlap.
    """

    c0: complex
    c1: complex
    c10: complex
    c01: complex

    def as_dict(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag]
                for k in ("c0", "c1", "c10", "c01")}


def overlap_coefficients(man, rho0: np.ndarray) -> DfsCoefficients:
    g00 = man.state(0, 0)
    g1m = man.state(1, -1)
    return DfsCoefficients(
        c0=complex(g00.conj() @ rho0 @ g00),
        c1=complex(g1m.conj() @ rho0 @ g1m),
        c10=complex(g1m.conj() @ rho0 @ g00),
        c01=complex(g00.conj() @ rho0 @ g1m),
    )
