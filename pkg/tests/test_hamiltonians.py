import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qnlo.fock import SIGMA_Z, FockTruncation, fock_ket, number, qubit_tensor
from qnlo.hamiltonians import (
    LabParams,
    PhononLadderLevel,
    ScaledParams,
    ValidityWarning,
    build_full_hamiltonian,
    build_hamiltonian,
    build_ladder_hamiltonian,
    build_lindblad_generator,
    build_rwa_hamiltonian,
    four_phonon,
    number_state_part,
    quartic,
    scale_params,
    two_phonon,
)

TR = FockTruncation(30)
C = TR.certified - 2  # rows untouched by the squaring defect


def _herm_rel(h):
    return np.max(np.abs(h - h.conj().T)) / np.max(np.abs(h))


def test_scale_params():
    lab = LabParams(omega_q=1e9, omega_o=1e6, mass=1e-15, g_tilde=1e-12, delta_tilde=1e-3)
    p = scale_params(lab)
    assert scale_params(LabParams(1e9, 1e6, 1e-15)).k == 0
    assert scale_params(LabParams(1e9, 1e6, 1e-15, g_tilde=1.0)).delta == 0
    heavy = scale_params(LabParams(1e9, 1e6, 2e-15, 1e-12, 1e-3))
    assert math.isclose(heavy.delta, p.delta / 4, rel_tol=1e-12)
    assert math.isclose(heavy.k, p.k / math.sqrt(2), rel_tol=1e-12)
    with pytest.raises(ValueError):
        LabParams(0, 1, 1)


def test_validity_warning():
    with pytest.warns(ValidityWarning):
        ScaledParams(k=0.5, delta=0.5, alpha=2.0)
    with pytest.raises(ValueError):
        ScaledParams(k=-0.1)


def test_free_hamiltonian():
    h = build_full_hamiltonian(ScaledParams(k=0, delta=0), TR)
    assert np.allclose(h, qubit_tensor(np.eye(2), number(TR)))


def test_delta_zero_matches_linear_model():
    p = ScaledParams(k=0.3, delta=0)
    a = np.diag(np.sqrt(np.arange(1, TR.dim)), 1)
    x = a + a.T
    expect = np.kron(np.eye(2), a.T @ a) - 0.3 * np.kron(np.diag([1, -1]), x)
    assert np.allclose(build_full_hamiltonian(p, TR), expect)
    assert np.allclose(build_rwa_hamiltonian(p, TR), expect)
    assert np.allclose(
        build_ladder_hamiltonian(p, PhononLadderLevel.NUMBER_STATE_ONLY, TR), expect
    )


def test_vacuum_energy_constant():
    p = ScaledParams(k=0.5, delta=0.01)
    up0 = np.zeros(TR.hybrid_dim)
    up0[0] = 1
    assert math.isclose(up0 @ build_full_hamiltonian(p, TR) @ up0, 0.03, abs_tol=1e-14)
    assert abs(up0 @ build_ladder_hamiltonian(p, "full", TR) @ up0) < 1e-14


def test_quartic_decomposition():
    lhs = quartic(TR)
    rhs = four_phonon(TR) + two_phonon(TR) + number_state_part(TR) + 3 * np.eye(TR.dim)
    assert np.max(np.abs(lhs - rhs)[:C, :C]) < 1e-10


def test_full_ladder_offset():
    p = ScaledParams(k=0.5, delta=0.01)
    diff = build_ladder_hamiltonian(p, "full", TR) - build_full_hamiltonian(p, TR)
    d = TR.dim
    for blk in (slice(0, C), slice(d, d + C)):
        assert np.allclose(diff[blk, blk], -0.03 * np.eye(C), atol=1e-12)


def test_two_phonon_element():
    assert math.isclose((two_phonon(TR) @ fock_ket(0, TR))[2].real, 6 * math.sqrt(2))


def test_rwa_diagonal():
    p = ScaledParams(k=0, delta=0.01)
    h = build_rwa_hamiltonian(p, TR)
    n = np.arange(TR.dim)
    assert np.allclose(np.diag(h)[: TR.dim], (1 + 0.06) * n + 0.06 * n**2)
    nn = qubit_tensor(np.eye(2), number(TR))
    assert np.allclose(h @ nn, nn @ h)


params = st.builds(
    ScaledParams,
    k=st.floats(0, 1),
    delta=st.floats(0, 0.02),
    alpha=st.just(2.0),
)


@given(params, st.sampled_from(["full", "rwa", "ns", "two", "ladder-full"]))
def test_hermitian_and_parity(p, model):
    h = build_hamiltonian(model, p, TR)
    assert _herm_rel(h) <= 1e-12
    sz = qubit_tensor(SIGMA_Z, np.eye(TR.dim))
    assert np.max(np.abs(h @ sz - sz @ h)) <= 1e-12


def _random_density(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


@given(st.integers(0, 2**32 - 1), st.floats(0, 0.1))
def test_lindblad_trace_and_hermiticity(seed, gamma):
    tr = FockTruncation(12, margin=2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = ScaledParams(k=0.5, delta=0.01, gamma=gamma)
    gen = build_lindblad_generator(p, build_full_hamiltonian(p, tr))
    rho = _random_density(np.random.default_rng(seed), tr.hybrid_dim)
    out = gen(rho)
    assert abs(np.trace(out)) <= 1e-12 * max(np.linalg.norm(rho), 1) * 10
    assert np.max(np.abs(out - out.conj().T)) < 1e-12


def test_lindblad_matches_dense_superoperator():
    tr = FockTruncation(8, margin=2)
    p = ScaledParams(k=0.4, delta=0.01, gamma=0.3)
    h = build_full_hamiltonian(p, tr)
    a = np.kron(np.eye(2), np.diag(np.sqrt(np.arange(1, tr.dim)), 1))
    n = a.conj().T @ a
    rho = _random_density(np.random.default_rng(0), tr.hybrid_dim)
    dense = -1j * (h @ rho - rho @ h) + 0.15 * (2 * a @ rho @ a.conj().T - n @ rho - rho @ n)
    assert np.allclose(build_lindblad_generator(p, h)(rho), dense, atol=1e-12)
    # mixing Hamiltonian takes the general commutator path
    hx = h + 0.1 * np.kron(np.array([[0, 1], [1, 0]]), np.eye(tr.dim))
    dense_x = dense - 1j * ((hx - h) @ rho - rho @ (hx - h))
    assert np.allclose(build_lindblad_generator(p, hx)(rho), dense_x, atol=1e-12)


def test_lindblad_dark_state_and_decay():
    tr = FockTruncation(8, margin=2)
    p = ScaledParams(k=0, delta=0, gamma=0.2)
    zero_h = np.zeros((tr.hybrid_dim, tr.hybrid_dim))
    gen = build_lindblad_generator(p, zero_h)
    rho = np.zeros_like(zero_h, dtype=complex)
    rho[0, 0] = 0.3
    rho[tr.dim, tr.dim] = 0.7
    assert np.allclose(gen(rho), 0)
    one = np.zeros_like(rho)
    one[1, 1] = 1
    nvec = np.tile(np.arange(tr.dim), 2)
    assert math.isclose(np.real(np.diag(gen(one)) @ nvec), -0.2)
    p0 = ScaledParams(k=0.5, delta=0)
    g0 = build_lindblad_generator(p0, build_full_hamiltonian(p0, tr))
    assert abs(np.trace(g0(one))) < 1e-14
