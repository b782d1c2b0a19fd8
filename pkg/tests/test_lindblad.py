import numpy as np
import pytest
import scipy.linalg as la

from akltsync.lindblad import (
    EngineError,
    EvolveOptions,
    LindbladModel,
    SpectrumOptions,
    apply_liouvillian,
    default_step,
    delta_m_blocks,
    evolve,
    liouvillian_superoperator,
    magnetization_shift,
    overlap_coefficients,
    random_pure_state,
    restricted_generator,
    spectrum_near_axis,
    validate_density_matrix,
)
from akltsync.manifold import compute_manifold
from akltsync.model import (
    ChainSpec,
    DissipatorSpec,
    build_global_dissipator,
    build_hamiltonian,
    build_local_dissipators,
)
from akltsync.operators import Operator, embed, spin1_local, total_ops

B = 0.2
DISS = DissipatorSpec(gamma=0.2, kappa=0.2)


def chain_model(n, b=B, diss=DISS, epsilon=0.0, convention="factor2", **kw):
    jumps = []
    if diss.gamma > 0:
        jumps.append(build_global_dissipator(diss, n))
    if diss.kappa > 0:
        jumps.extend(build_local_dissipators(diss, n))
    h = build_hamiltonian(ChainSpec(N=n, B=b, epsilon=epsilon, **kw))
    return LindbladModel(hamiltonian=h, jumps=tuple(jumps),
                         convention=convention)


@pytest.fixture(scope="module")
def man3():
    return compute_manifold(build_hamiltonian(ChainSpec(N=3)), 3)


@pytest.mark.parametrize("n", [2, 3])
def test_brute_force_superoperator_oracle(n):
    # dense vectorized superoperator vs the matrix-free application
    model = chain_model(n)
    m = liouvillian_superoperator(model).toarray()
    rng = np.random.default_rng(4)
    d = 3 ** n
    for _ in range(20):
        r = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        direct = apply_liouvillian(model, r)
        via_matrix = (m @ r.reshape(-1)).reshape(d, d)
        assert np.abs(direct - via_matrix).max() < 1e-12


def test_half_convention_is_rate_rescaling():
    n = 2
    model2 = chain_model(n)
    jumps_scaled = tuple(np.sqrt(2.0) * j for j in model2.jumps)
    model_half = LindbladModel(hamiltonian=model2.hamiltonian,
                               jumps=jumps_scaled, convention="half")
    rng = np.random.default_rng(0)
    r = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    assert np.abs(apply_liouvillian(model2, r)
                  - apply_liouvillian(model_half, r)).max() < 1e-12


def test_output_traceless():
    model = chain_model(2)
    rng = np.random.default_rng(1)
    r = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    r = r + r.conj().T
    out = apply_liouvillian(model, r)
    assert abs(np.trace(out)) < 1e-10 * np.abs(r).max()


def test_steady_states_and_coherence(man3):
    n = 3
    model = chain_model(n)
    g00, g1m = man3.state(0, 0), man3.state(1, -1)
    r0 = np.outer(g00, g00.conj())
    r1 = np.outer(g1m, g1m.conj())
    assert np.abs(apply_liouvillian(model, r0)).max() < 1e-10
    assert np.abs(apply_liouvillian(model, r1)).max() < 1e-10
    rho10 = np.outer(g1m, g00.conj())
    out = apply_liouvillian(model, rho10)
    assert np.abs(out - 1j * (B / n) * rho10).max() < 1e-9
    rho01 = rho10.conj().T
    assert np.abs(apply_liouvillian(model, rho01)
                  + 1j * (B / n) * rho01).max() < 1e-9


def test_evolve_closed_system_matches_exact_unitary():
    n, t_end = 4, 5.0
    model = chain_model(n, diss=DissipatorSpec())
    h = model.hamiltonian.to_dense()
    w, v = la.eigh(h)
    psi = random_pure_state(3 ** n, seed=5)
    rho0 = np.outer(psi, psi.conj())
    grid = np.linspace(0.0, t_end, 11)
    sx2 = embed(spin1_local()["Sx"], 2, n)
    ts = evolve(model, rho0, grid, EvolveOptions(h=0.002,
                                                 observables={"sx2": sx2}))
    for i, t in enumerate(grid):
        u = (v * np.exp(-1j * w * t)) @ v.conj().T
        rho_exact = u @ rho0 @ u.conj().T
        exact_val = np.sum(sx2.to_dense().T * rho_exact).real
        assert abs(ts.observables["sx2"][i].real - exact_val) < 1e-8


def test_evolve_herm_path_matches_general_apply():
    # one RK4 step via the Hermitian fast path vs via apply_liouvillian
    n, h = 2, 0.01
    model = chain_model(n)
    psi = random_pure_state(9, seed=2)
    rho0 = np.outer(psi, psi.conj())
    ts = evolve(model, rho0, np.array([0.0, h]),
                EvolveOptions(h=h, record_states=True))
    k1 = apply_liouvillian(model, rho0)
    k2 = apply_liouvillian(model, rho0 + h / 2 * k1)
    k3 = apply_liouvillian(model, rho0 + h / 2 * k2)
    k4 = apply_liouvillian(model, rho0 + h * k3)
    ref = rho0 + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    assert np.abs(ts.states[-1][1] - ref).max() < 1e-13


def test_evolve_preserves_trace_hermiticity_positivity():
    model = chain_model(3)
    psi = random_pure_state(27, seed=3)
    rho0 = np.outer(psi, psi.conj())
    ts = evolve(model, rho0, np.linspace(0, 20, 41),
                EvolveOptions(h=0.02, record_states=True, positivity_every=1))
    assert np.abs(ts.trace - 1.0).max() < 1e-9 * 20
    assert np.nanmin(ts.min_eig) > -1e-7
    for _, r in ts.states:
        assert np.abs(r - r.conj().T).max() == 0.0  # Hermitian by construction


def test_evolve_deterministic():
    model = chain_model(2)
    psi = random_pure_state(9, seed=8)
    rho0 = np.outer(psi, psi.conj())
    grid = np.linspace(0, 5, 6)
    a = evolve(model, rho0, grid, EvolveOptions(h=0.01, record_states=True))
    b = evolve(model, rho0, grid, EvolveOptions(h=0.01, record_states=True))
    for (_, ra), (_, rb) in zip(a.states, b.states):
        assert np.array_equal(ra, rb)


def test_evolve_grid_validation_and_stability_guard():
    model = chain_model(2)
    rho0 = np.eye(9) / 9.0
    with pytest.raises(ValueError):
        evolve(model, rho0, np.array([0.5, 1.0]))
    with pytest.raises(ValueError):
        evolve(model, rho0, np.array([0.0, 1.0, 1.0]))
    with pytest.raises(EngineError):
        evolve(model, rho0, np.array([0.0, 1.0]), EvolveOptions(h=5.0))
    bad = np.eye(9)  # trace 9
    with pytest.raises(ValueError):
        evolve(model, bad, np.array([0.0, 1.0]))


def test_positivity_abort_path():
    # absurdly strict threshold exercises the abort diagnostic
    from akltsync.lindblad import PositivityError
    model = chain_model(2)
    psi = random_pure_state(9, seed=1)
    rho0 = np.outer(psi, psi.conj())
    with pytest.raises(PositivityError):
        evolve(model, rho0, np.array([0.0, 0.5]),
               EvolveOptions(h=0.01, positivity_every=1,
                             positivity_abort=-0.5))


def test_default_step_flagship_parameters():
    # the step rule lands on ~0.01 for the headline chain
    model = chain_model(6)
    h = default_step(model)
    assert 0.005 < h < 0.02


def test_delta_m_blocks_multiplicities():
    n = 6
    blocks = delta_m_blocks(3 ** n, n)
    # oracle: trinomial coefficients of (x^-1 + 1 + x)^6
    import numpy.polynomial.polynomial as P
    coeffs = np.array([1.0, 1.0, 1.0])
    poly = np.array([1.0])
    for _ in range(n):
        poly = np.convolve(poly, coeffs)
    d_m = {m: int(poly[m + n]) for m in range(-n, n + 1)}
    assert d_m[0] == 141 and d_m[1] == 126
    rows, cols = blocks[-1]
    expected = sum(d_m[m] * d_m[m + 1] for m in range(-n, n) if (m + 1) in d_m)
    assert rows.size == 69576 and rows.size == expected
    total = sum(r.size for r, _ in blocks.values())
    assert total == 3 ** (2 * n)


def test_delta_m_block_invariance():
    # applying L never leaks across Delta-m blocks
    n = 3
    model = chain_model(n)
    blocks = delta_m_blocks(27, n)
    rng = np.random.default_rng(6)
    for dm in (-2, 0, 1):
        rows, cols = blocks[dm]
        r = np.zeros((27, 27), dtype=complex)
        r[rows, cols] = rng.standard_normal(rows.size) \
            + 1j * rng.standard_normal(rows.size)
        out = apply_liouvillian(model, r)
        out[rows, cols] = 0.0
        assert np.abs(out).max() < 1e-12


def test_magnetization_shifts():
    n = 3
    assert magnetization_shift(build_global_dissipator(DISS, n), n) == -1
    for l in build_local_dissipators(DISS, n):
        assert magnetization_shift(l, n) == 2


def test_spectrum_refuses_transverse_field():
    from akltsync.lindblad import SpectrumError
    model = chain_model(3, Bx=0.1)
    with pytest.raises(SpectrumError):
        spectrum_near_axis(model, 3, -1, 2)


def test_spectrum_dense_finds_coherence_eigenvalue():
    n = 3
    model = chain_model(n)
    res = spectrum_near_axis(model, n, -1, 3, SpectrumOptions(method="dense"))
    lead = res.eigenvalues[0]
    assert abs(lead.real) < 1e-10
    assert abs(abs(lead.imag) - B / n) < 1e-10
    assert res.method == "dense"
    assert (res.residuals < 1e-8).all()
    # conjugate partner in the mirror block
    res_p = spectrum_near_axis(model, n, +1, 3, SpectrumOptions(method="dense"))
    assert abs(res_p.eigenvalues[0] - lead.conjugate()) < 1e-8


def test_spectrum_arnoldi_matches_dense():
    n = 3
    model = chain_model(n)
    dense = spectrum_near_axis(model, n, -1, 4, SpectrumOptions(method="dense"))
    arn = spectrum_near_axis(model, n, -1, 4,
                             SpectrumOptions(method="arnoldi", tau=1.0,
                                             prop_h=0.002))
    for va in arn.eigenvalues:
        assert np.abs(dense.eigenvalues - va).min() < 1e-7
    assert arn.method == "arnoldi"


def test_spectrum_left_half_plane_and_pairing():
    n = 2
    model = chain_model(n)
    m = liouvillian_superoperator(model).toarray()
    w = la.eigvals(m)
    assert w.real.max() < 1e-8
    # every reported eigenvalue in block Dm has its conjugate in block -Dm
    for dm in (1, 2):
        res_m = spectrum_near_axis(model, n, -dm, 4, SpectrumOptions(method="dense"))
        res_p = spectrum_near_axis(model, n, +dm, 4, SpectrumOptions(method="dense"))
        for v in res_m.eigenvalues:
            assert np.abs(res_p.eigenvalues - v.conjugate()).min() < 1e-8


def test_ground_subspace_gap(man3):
    # dense diagonalization of L on the 16-dim manifold operator space:
    # slowest nonzero decay must be exactly -2 gamma
    model = chain_model(3)
    mat = restricted_generator(model, man3.states)
    w = la.eigvals(mat)
    re = np.sort(np.unique(np.round(w.real, 10)))[::-1]
    assert abs(re[0]) < 1e-9
    assert abs(re[1] + 2 * DISS.gamma) < 1e-9


def test_overlap_coefficients(man3):
    g00, g1m = man3.state(0, 0), man3.state(1, -1)
    r0 = np.outer(g00, g00.conj())
    c = overlap_coefficients(man3, r0)
    assert abs(c.c0 - 1) < 1e-12 and abs(c.c1) < 1e-12
    assert abs(c.c10) < 1e-12 and abs(c.c01) < 1e-12
    psi = (g00 + g1m) / np.sqrt(2)
    c = overlap_coefficients(man3, np.outer(psi, psi.conj()))
    for v in (c.c0, c.c1, c.c10, c.c01):
        assert abs(v - 0.5) < 1e-12
    mixed = np.eye(27) / 27.0
    c = overlap_coefficients(man3, mixed)
    assert abs(c.c10) < 1e-12 and abs(c.c01) < 1e-12


def test_validate_density_matrix():
    with pytest.raises(ValueError):
        validate_density_matrix(np.eye(4))
    rho = np.diag([0.7, 0.4, -0.1, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        validate_density_matrix(rho)
    validate_density_matrix(np.diag([0.25] * 4).astype(complex))


def test_random_pure_state_seeded():
    a = random_pure_state(100, seed=9)
    b = random_pure_state(100, seed=9)
    c = random_pure_state(100, seed=10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert abs(np.linalg.norm(a) - 1) < 1e-12
