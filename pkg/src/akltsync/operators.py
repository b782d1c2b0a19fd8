"""Exact spin-1 operator algebra on open chains.

Everything lives on the 3^N-dimensional product space of N qutrits. The
local basis is ordered |+>, |0>, |-> (S_z eigenvalues +1, 0, -1) and the
tensor product is site-major: site 1 is the slowest index, so the basis
index of a product state is sum_j digit_j * 3^(N-j) with digit 0 for |+>,
1 for |0> and 2 for |->.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

#: entries with magnitude below this are dropped after every arithmetic op
DROP_TOL = 1e-14

#: hermitian_hint is set when ||M - M^dag||_max is below this
HERMITIAN_TOL = 1e-12

_SQRT2 = np.sqrt(2.0)


def _cleaned(m: sp.spmatrix) -> sp.csr_matrix:
    m = sp.csr_matrix(m, dtype=np.complex128)
    if m.nnz:
        mask = np.abs(m.data) < DROP_TOL
        if mask.any():
            m.data[mask] = 0.0
            m.eliminate_zeros()
    m.sort_indices()
    m.data.flags.writeable = False
    m.indices.flags.writeable = False
    m.indptr.flags.writeable = False
    return m


class Operator:
    """Immutable sparse complex matrix on a labelled Hilbert space.

    The universal currency of the package: Hamiltonians, jump operators and
    observables are all Operators. Arithmetic (+, -, scalar *, @, dag, kron)
    returns new Operators with sub-tolerance entries dropped.
    """

    __slots__ = ("matrix", "hermitian_hint")

    def __init__(self, matrix):
        m = _cleaned(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        d = (m - m.getH()).tocsr()
        herm = (np.abs(d.data).max() if d.nnz else 0.0) < HERMITIAN_TOL
        object.__setattr__(self, "hermitian_hint", bool(herm))

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(-self.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return Operator(self.matrix @ other.matrix)
        return self.matrix @ other  # ndarray: plain matrix-vector/matrix product

    def dag(self) -> "Operator":
        return Operator(self.matrix.getH())

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def norm_max(self) -> float:
        return float(np.abs(self.matrix.data).max()) if self.nnz else 0.0

    def expect(self, psi: np.ndarray) -> complex:
        return complex(np.vdot(psi, self.matrix @ psi))

    def trace_with(self, rho: np.ndarray) -> complex:
        """Tr(O rho) for a dense matrix rho, using only stored entries."""
        coo = self.matrix.tocoo()
        return complex(np.sum(coo.data * rho[coo.col, coo.row]))

    def __repr__(self):
        return f"Operator(dim={self.dim}, nnz={self.nnz}, hermitian={self.hermitian_hint})"


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def identity(dim: int) -> Operator:
    return Operator(sp.identity(dim, format="csr"))


def kron(a: Operator, b: Operator) -> Operator:
    return Operator(sp.kron(a.matrix, b.matrix, format="csr"))


def spin1_local() -> dict:
    """The five 3x3 spin-1 matrices in the |+>,|0>,|-> basis."""
    sz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    spl = np.zeros((3, 3), dtype=complex)
    spl[0, 1] = _SQRT2
    spl[1, 2] = _SQRT2
    sm = spl.conj().T
    sx = 0.5 * (spl + sm)
    sy = -0.5j * (spl - sm)
    return {k: Operator(sp.csr_matrix(v)) for k, v in
            [("Sx", sx), ("Sy", sy), ("Sz", sz), ("Sp", spl), ("Sm", sm)]}


def embed(op: Operator, site: int, n_sites: int) -> Operator:
    """Embed a 3x3 (single-site) or 9x9 (two-site) operator at `site`.

    Site indices run 1..N; a 9x9 operator acts on sites (site, site+1).
    Identity everywhere else.
    """
    if op.dim == 3:
        span = 1
    elif op.dim == 9:
        span = 2
    else:
        raise ValueError(f"embed supports dim 3 or 9, got {op.dim}")
    if site < 1 or site + span - 1 > n_sites:
        raise ValueError(f"site {site} (span {span}) out of range for N={n_sites}")
    left = sp.identity(3 ** (site - 1), format="csr")
    right = sp.identity(3 ** (n_sites - site - span + 1), format="csr")
    return Operator(sp.kron(sp.kron(left, op.matrix), right, format="csr"))


def total_ops(n_sites: int) -> dict:
    """Global Sz, S-, S+ and S^2 on the N-site chain."""
    if n_sites < 2:
        raise ValueError("need at least 2 sites")
    loc = spin1_local()
    sz = sum((embed(loc["Sz"], j, n_sites) for j in range(2, n_sites + 1)),
             embed(loc["Sz"], 1, n_sites))
    sm = sum((embed(loc["Sm"], j, n_sites) for j in range(2, n_sites + 1)),
             embed(loc["Sm"], 1, n_sites))
    spl = sm.dag()
    sx = 0.5 * (spl + sm)
    sy = -0.5j * (spl - sm)
    s2 = sx @ sx + sy @ sy + sz @ sz
    return {"Sz_tot": sz, "Sm_tot": sm, "Sp_tot": spl, "S2_tot": s2}


def heisenberg_bond(j: int, n_sites: int) -> Operator:
    """S_j . S_{j+1} embedded on the chain."""
    loc = spin1_local()
    out = None
    for k in ("Sx", "Sy", "Sz"):
        t = embed(loc[k], j, n_sites) @ embed(loc[k], j + 1, n_sites)
        out = t if out is None else out + t
    return out


def pair_projector_spin2(j: int, n_sites: int) -> Operator:
    """Projector of the spin pair (j, j+1) onto total spin 2.

    Built from the standard polynomial 1/2 S.S + 1/6 (S.S)^2 + 1/3, which
    takes values (1, 0, 0) on the S = (2, 1, 0) two-site multiplets.
    """
    if j < 1 or j > n_sites - 1:
        raise ValueError(f"bond {j} out of range for N={n_sites}")
    b = heisenberg_bond(j, n_sites)
    one = identity(3 ** n_sites)
    return 0.5 * b + (1.0 / 6.0) * (b @ b) + (1.0 / 3.0) * one


def inversion_operator(n_sites: int) -> Operator:
    """Permutation reversing the site order, j <-> N+1-j."""
    if n_sites < 2:
        raise ValueError("need at least 2 sites")
    dim = 3 ** n_sites
    idx = np.arange(dim)
    digits = trit_digits(idx, n_sites)
    rev = digits[:, ::-1]
    target = np.zeros(dim, dtype=np.int64)
    for k in range(n_sites):
        target = target * 3 + rev[:, k]
    data = np.ones(dim)
    return Operator(sp.csr_matrix((data, (target, idx)), shape=(dim, dim)))


def trit_digits(indices, n_sites: int) -> np.ndarray:
    """Base-3 digits of basis indices, site 1 first (slowest index)."""
    idx = np.atleast_1d(np.asarray(indices, dtype=np.int64))
    out = np.zeros((idx.size, n_sites), dtype=np.int64)
    rest = idx.copy()
    for k in range(n_sites - 1, -1, -1):
        out[:, k] = rest % 3
        rest //= 3
    return out


def site_magnetizations(n_sites: int) -> np.ndarray:
    """Total S_z of every product-basis state (digit 0 -> +1, 2 -> -1)."""
    digits = trit_digits(np.arange(3 ** n_sites), n_sites)
    return (1 - digits).sum(axis=1)


def product_state(digits) -> np.ndarray:
    """Product basis vector from local digits (0=|+>, 1=|0>, 2=|->)."""
    n = len(digits)
    idx = 0
    for d in digits:
        if d not in (0, 1, 2):
            raise ValueError("digits must be 0, 1 or 2")
        idx = idx * 3 + int(d)
    psi = np.zeros(3 ** n, dtype=np.complex128)
    psi[idx] = 1.0
    return psi


def normalize(psi: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / nrm
