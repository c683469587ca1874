import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qnlo.analytic import linear_negativity_closed_form, linear_state
from qnlo.errors import GridMismatch, GridTooCoarse, NonHermitianInput
from qnlo.fock import (
    FockTruncation,
    coherent_ket,
    displacement,
    fock_ket,
    hybrid_ket,
    initial_state,
    ket_to_density,
)
from qnlo.hamiltonians import ScaledParams
from qnlo.observables import (
    WignerGrid,
    bloch_vector,
    conditioned_osc,
    conditioned_wigners,
    default_axis,
    negativity,
    plateau_detect,
    pure_negativity,
    quadrature_covariance,
    reduce_osc,
    reduce_qubit,
    squeezing_scan,
    wigner,
    wigner_overlap,
    wigner_overlap_exact,
)

TR = FockTruncation(40)
P = ScaledParams(k=0.5, alpha=2.0)
seeds = st.integers(0, 2**32 - 1)


def _random_ket(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def _random_unitary(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / abs(np.diag(r)))


# -- negativity and reduced states ---------------------------------------------


def test_negativity_reference_states():
    assert negativity(initial_state(2.0, TR)) < 1e-12
    bell = hybrid_ket(fock_ket(0, TR), fock_ket(1, TR)) / math.sqrt(2)
    assert math.isclose(negativity(bell), 0.5, rel_tol=1e-12)
    assert math.isclose(negativity(bell, normalized=True), 1.0, rel_tol=1e-12)
    psi = linear_state(P, math.pi, TR)
    assert math.isclose(negativity(psi, normalized=True), math.sqrt(1 - math.exp(-4)), rel_tol=1e-9)
    assert math.isclose(negativity(psi, normalized=True), 0.9908, abs_tol=5e-5)


def test_negativity_rejects_non_hermitian():
    rho = ket_to_density(initial_state(1.0, TR))
    rho[0, 1] += 0.1
    with pytest.raises(NonHermitianInput):
        negativity(rho)


@given(seeds)
def test_negativity_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    d = 6
    kets = [_random_ket(rng, 2 * d) for _ in range(3)]
    w = rng.dirichlet(np.ones(3))
    rho = sum(wi * np.outer(k, k.conj()) for wi, k in zip(w, kets))
    u = np.kron(_random_unitary(rng), np.eye(d))
    assert abs(negativity(rho) - negativity(u @ rho @ u.conj().T)) < 1e-9


@given(seeds)
def test_schmidt_identity(seed):
    rng = np.random.default_rng(seed)
    d = 8
    up, dn = _random_ket(rng, d), _random_ket(rng, d)
    psi = hybrid_ket(up, dn) / math.sqrt(2)
    s = np.vdot(up, dn)
    expect = math.sqrt(1 - abs(s) ** 2)
    assert abs(negativity(psi, normalized=True) - expect) < 1e-9
    assert abs(pure_negativity(psi, normalized=True) - expect) < 1e-9


@given(st.floats(0, 2 * math.pi))
def test_linear_negativity_partial_transpose(t):
    psi = linear_state(P, t, TR)
    assert abs(negativity(psi) - linear_negativity_closed_form(P, t)) < 1e-8


def test_bloch_and_reduced_states():
    psi0 = initial_state(2.0, TR)
    assert np.allclose(bloch_vector(psi0), [1, 0, 0], atol=1e-12)
    for t in np.linspace(0, 2 * math.pi, 13):
        assert abs(bloch_vector(linear_state(P, t, TR))[2]) < 1e-12
    rq = reduce_qubit(linear_state(P, math.pi, TR))
    assert math.isclose(abs(rq[0, 1]), 0.5 * math.exp(-2), rel_tol=1e-10)
    c = coherent_ket(2.0, TR)
    assert np.allclose(conditioned_osc(psi0, "up"), 0.5 * np.outer(c, c.conj()))
    psi = linear_state(P, 1.3, TR)
    up, dn = conditioned_osc(psi, "up"), conditioned_osc(psi, "down")
    assert math.isclose(np.trace(up).real + np.trace(dn).real, 1.0, rel_tol=1e-12)
    assert np.allclose(reduce_osc(psi), up + dn)
    rho = ket_to_density(psi)
    assert np.allclose(reduce_osc(rho), up + dn)
    assert np.allclose(reduce_qubit(rho), reduce_qubit(psi))


# -- Wigner function ---------------------------------------------------------------


def _parity_oracle(rho, beta):
    # (2/pi) Tr[rho D P D^dag] by brute force on a padded space
    tr = FockTruncation(rho.shape[0] + 40)
    big = np.zeros((tr.dim, tr.dim), dtype=complex)
    big[: rho.shape[0], : rho.shape[0]] = rho
    d = displacement(beta, tr, check=False)
    parity = np.diag((-1.0) ** np.arange(tr.dim))
    return 2 / math.pi * np.trace(big @ d @ parity @ d.conj().T).real


def test_vacuum_wigner_alpha_plane():
    vac = np.zeros((5, 5))
    vac[0, 0] = 1
    g = wigner(vac)
    xx, yy = np.meshgrid(g.x_axis, g.y_axis)
    assert np.allclose(g.values, 2 / math.pi * np.exp(-2 * (xx**2 + yy**2)), atol=1e-12)
    assert g.convention == "alpha-plane"


def test_coherent_peak_and_identities():
    c = coherent_ket(2.0, TR)
    g = wigner(np.outer(c, c.conj()))
    iy, ix = np.unravel_index(np.argmax(g.values), g.values.shape)
    assert (g.x_axis[ix], g.y_axis[iy]) == pytest.approx((2.0, 0.0), abs=1e-12)
    assert abs(g.integral() - 1) < 2e-3
    assert abs(math.pi * np.sum(g.values**2) * g.dx * g.dy - 1) < 2e-3


@given(seeds)
def test_wigner_matches_displaced_parity(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    betas = rng.uniform(-2, 2, size=2) + 1j * rng.uniform(-2, 2, size=2)
    for b in betas:
        g = wigner(rho, [b.real, b.real + 0.1], [b.imag, b.imag + 0.1])
        assert abs(g.values[0, 0] - _parity_oracle(rho, b)) < 1e-10


def test_wigner_of_mixed_state_integrals():
    psi = linear_state(P, 0.8 * math.pi, TR)
    rho = reduce_osc(psi)
    g = wigner(rho)
    assert np.isrealobj(g.values)
    assert abs(g.integral() - 1) < 2e-3
    purity = np.trace(rho @ rho).real
    assert abs(math.pi * np.sum(g.values**2) * g.dx * g.dy - purity) < 2e-3


def test_wigner_guards():
    rho = np.eye(3) / 3
    with pytest.raises(GridTooCoarse):
        wigner(rho, np.linspace(-3, 3, 11))
    bad = np.array([[1, 0.2], [0, 0]])
    with pytest.raises(NonHermitianInput):
        wigner(bad)
    a = wigner(rho, default_axis(2.0))
    b = wigner(rho, default_axis(3.0))
    with pytest.raises(GridMismatch):
        wigner_overlap(a, b)


def test_overlap_reference_values():
    c = coherent_ket(1.0, TR)
    half = 0.5 * np.outer(c, c.conj())
    ax = default_axis(5.0)
    w = wigner(half, ax)
    assert abs(wigner_overlap(w, w) - 0.25 / math.pi) < 1e-4
    far_a, far_b = coherent_ket(3.0, TR), coherent_ket(-3.0, TR)
    wa = wigner(np.outer(far_a, far_a.conj()), default_axis(6.0))
    wb = wigner(np.outer(far_b, far_b.conj()), default_axis(6.0))
    assert abs(wigner_overlap(wa, wb)) < 1e-10


def test_overlap_grid_vs_exact():
    psi = linear_state(P, 0.7 * math.pi, TR)
    wu, wd = conditioned_wigners(psi)
    exact = wigner_overlap_exact(conditioned_osc(psi, "up"), conditioned_osc(psi, "down"))
    assert abs(wigner_overlap(wu, wd) - exact) < 1e-3
    assert wu.same_grid(wd)


# -- squeezing ------------------------------------------------------------------


def test_coherent_squeezing_baseline():
    c = coherent_ket(1.5 + 0.5j, TR)
    r = squeezing_scan(np.outer(c, c.conj()))
    assert r.norm_x == pytest.approx(1, abs=1e-10)
    assert r.norm_y == pytest.approx(1, abs=1e-10)
    assert r.product == pytest.approx(1, abs=1e-10)


@given(st.floats(0.0, 0.05))
def test_kerr_state_covariance(theta):
    tr = FockTruncation(60)
    alpha = 2.0
    n = np.arange(tr.dim)
    psi = np.exp(-1j * theta * n**2) * coherent_ket(alpha, tr)
    # closed-form moments of a Kerr-phased coherent state
    ea = alpha * np.exp(-1j * theta) * np.exp(-alpha**2 * (1 - np.exp(-2j * theta)))
    ea2 = alpha**2 * np.exp(-4j * theta) * np.exp(-alpha**2 * (1 - np.exp(-4j * theta)))
    en = alpha**2
    vx = 0.25 * (2 * ea2.real + 2 * en + 1) - ea.real**2
    vy = 0.25 * (-2 * ea2.real + 2 * en + 1) - ea.imag**2
    cxy = 0.5 * ea2.imag - ea.real * ea.imag
    cov = quadrature_covariance(np.outer(psi, psi.conj()))
    assert np.allclose(cov, [[vx, cxy], [cxy, vy]], atol=1e-6)


@given(st.floats(0.01, 0.05), st.floats(0, math.pi))
def test_phi_star_follows_rotation(theta_kerr, rot):
    tr = FockTruncation(60)
    n = np.arange(tr.dim)
    psi = np.exp(-1j * theta_kerr * n**2) * coherent_ket(2.0, tr)
    r0 = squeezing_scan(np.outer(psi, psi.conj()))
    turned = np.exp(1j * rot * n) * psi
    r1 = squeezing_scan(np.outer(turned, turned.conj()))
    diff = (r1.phi_star - r0.phi_star - rot) % math.pi
    assert min(diff, math.pi - diff) < 1e-8


# -- plateau ---------------------------------------------------------------------


def test_plateau_constant_and_periodic():
    t = np.linspace(0, 20 * math.pi, 2001)
    rep = plateau_detect(t, np.full_like(t, 0.7))
    assert rep.found and rep.t_lo == t[0] and rep.t_hi == t[-1]
    assert rep.width == pytest.approx(20 * math.pi)
    periodic = linear_negativity_closed_form(P, t) * 2
    assert not plateau_detect(t, periodic).found
    with pytest.raises(ValueError):
        plateau_detect(t[:50], periodic[:50])


def test_plateau_on_step():
    t = np.linspace(0, 30 * math.pi, 3001)
    v = np.where(t < 10 * math.pi, 0.5 + 0.4 * np.sin(t), 0.95)
    rep = plateau_detect(t, v)
    assert rep.found
    assert rep.t_hi == t[-1]
    assert 10 * math.pi <= rep.t_lo <= 11.5 * math.pi
    rel = plateau_detect(t, 0.05 * v, osc_threshold=0.05, relative=True)
    assert rel.found and rel.t_lo == pytest.approx(rep.t_lo)
