import numpy as np
import pytest

from swemed import sediment, system
from swemed.basis import build_tables
from swemed.sediment import PVC, SAND
from swemed.system import MatrixKind, MomentSystem


# reference systems for N = 0..3, written out by hand

def _coeffs(h, u, a, c, p):
    rho = p.rho_w + c * (p.rho_s - p.rho_w)
    bh = p.g * h * (rho - p.rho_w) / (2 * rho)
    bs = p.g * h * (p.rho_s - p.rho_w) / (2 * rho)
    ub = u + sum(a)
    dh, dq, dc = (float(v) for v in sediment.bedload_flux_derivatives(h, ub, c, p))
    return p.g * h, bh, bs, dh, dq, dc


def reference_matrix(N, h, u, a, c, p, regularized=False):
    """Hand-written transport matrices, with A_s placed on the moment rows."""
    gh, bh, bs, dh, dq, dc = _coeffs(h, u, a, c, p)
    a = list(a)
    full_a = list(a)
    if regularized:
        a = a[:1] + [0.0] * (N - 1)
    a1, a2, a3 = (a + [0.0, 0.0, 0.0])[:3]
    ex = [dh, dq] + [dq] * N + [dc, 0.0]
    if N == 0:
        M = [[0, 1, 0, 0],
             [gh - u * u - bh, 2 * u, bs, gh],
             [-c * u, c, u, 0]]
    elif N == 1:
        M = [[0, 1, 0, 0, 0],
             [gh - u * u - a1 ** 2 / 3 - bh, 2 * u, 2 * a1 / 3, bs, gh],
             [-2 * a1 * u - bh, 2 * a1, u, bs, 0],
             [-c * u, c, 0, u, 0]]
    elif N == 2:
        M = [[0, 1, 0, 0, 0, 0],
             [gh - u * u - a1 ** 2 / 3 - a2 ** 2 / 5 - bh, 2 * u, 2 * a1 / 3, 2 * a2 / 5, bs, gh],
             [-2 * a1 * u - 4 / 5 * a1 * a2 - bh, 2 * a1, u + a2, 3 * a1 / 5, bs, 0],
             [-2 / 3 * a1 ** 2 - 2 * u * a2 - 2 / 7 * a2 ** 2, 2 * a2, a1 / 3, u + 3 * a2 / 7, 0, 0],
             [-c * u, c, 0, 0, u, 0]]
        if not regularized:
            M[2] = [m - 6 * full_a[1] * e for m, e in zip(M[2], ex)]
    elif N == 3:
        M = [[0, 1, 0, 0, 0, 0, 0],
             [gh - u * u - a1 ** 2 / 3 - a2 ** 2 / 5 - a3 ** 2 / 7 - bh, 2 * u, 2 * a1 / 3, 2 * a2 / 5,
              2 * a3 / 7, bs, gh],
             [-2 / 35 * (9 * a3 * a2 + 7 * a1 * (5 * u + 2 * a2)) - bh, 2 * a1, u + a2,
              3 * (a1 + a3) / 5, 3 * a2 / 7, bs, 0],
             [-2 / 21 * (7 * a1 ** 2 + 9 * a1 * a3 + 2 * a3 ** 2 + 3 * a2 * (7 * u + a2)), 2 * a2,
              a1 / 3 + 9 * a3 / 7, u + 3 * a2 / 7, 4 * a1 / 7 + a3 / 3, 0, 0],
             [-2 / 15 * (15 * u * a3 + 4 * a2 * a3 + 9 * a1 * a2), 2 * a3, 0, 2 * (a1 + a3) / 5,
              u + a2 / 3, 0, 0],
             [-c * u, c, 0, 0, 0, u, 0]]
        if not regularized:
            M[2] = [m - 6 * full_a[1] * e for m, e in zip(M[2], ex)]
            M[3] = [m - 10 * full_a[2] * e for m, e in zip(M[3], ex)]
    M.append(ex)
    return np.array(M, dtype=float)


def reference_source(N, h, u, a, c, p):
    ub = u + sum(a)
    drag = p.eps * abs(ub) * ub
    nu = p.nu / h
    a1, a2, a3 = (list(a) + [0.0, 0.0, 0.0])[:3]
    visc = {0: [], 1: [12 * nu * a1], 2: [12 * nu * a1, 60 * nu * a2],
            3: [12 * nu * (a1 + a3), 60 * nu * a2, 7 * nu * (4 * a1 + 24 * a3)]}[N]
    fr = [0.0, -drag] + [-(2 * i + 1) * drag - v for i, v in enumerate(visc, start=1)] + [0.0, 0.0]
    mom = {0: [], 1: [2 * a1], 2: [2 * a1 + 3 * a2, 3 * a2],
           3: [2 * a1 + 3 * (a2 + a3), 3 * a2 + 5 * a3, 4 * a3]}[N]
    f_b = float(sediment.exchange(ub, c, p).F_b)
    ex = [f_b * v for v in [1.0, ub] + mom + [1 - p.psi, -1.0]]
    return np.array(fr), np.array(ex)


def random_state(rng, N):
    return (rng.uniform(0.05, 2.0), rng.uniform(-2, 2), rng.uniform(-1, 1, N),
            rng.uniform(0, 0.3), rng.uniform(-0.2, 0.2))


def _close(got, want, tol=1e-13):
    return np.all(np.abs(got - want) <= tol * np.maximum(1.0, np.abs(want)))


@pytest.mark.parametrize("p", [PVC, SAND], ids=["pvc", "sand"])
@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_assembly_matches_reference(N, p):
    rng = np.random.default_rng(10 + N)
    t = build_tables(N)
    for _ in range(50):
        h, u, a, c, b = random_state(rng, N)
        W = MomentSystem(N, p).conserved(h, u, a, c, b)
        full = system.assemble_full(W, t, p)
        reg = system.assemble_regularized(W, t, p)
        assert _close(full, reference_matrix(N, h, u, a, c, p))
        assert _close(reg, reference_matrix(N, h, u, a, c, p, regularized=True))
        src = system.source(W, t, p)
        fr, ex = reference_source(N, h, u, a, c, p)
        assert _close(src.friction, fr)
        assert _close(src.exchange, ex)


def test_regularization_is_identity_below_order_two():
    rng = np.random.default_rng(0)
    for N in (0, 1):
        s = MomentSystem(N, PVC)
        W = s.conserved(*random_state(rng, N))
        assert np.array_equal(s.transport_matrix(W, "full"), s.transport_matrix(W, "regularized"))


def test_reference_flux_order_two():
    s = MomentSystem(2, PVC)
    h, u, a1, a2, c = 0.7, 0.4, 0.3, -0.2, 0.05
    F = s.flux(s.conserved(h, u, [a1, a2], c, 0.0))
    want = [h * u, h * u * u + 0.5 * PVC.g * h * h + h * a1 ** 2 / 3 + h * a2 ** 2 / 5,
            2 * h * u * a1 + 0.8 * h * a1 * a2,
            2 * h * u * a2 + 2 / 3 * h * a1 ** 2 + 2 / 7 * h * a2 ** 2, h * c * u]
    assert np.allclose(F[:5], want, rtol=1e-14)


@pytest.mark.parametrize("N", [0, 1, 2, 4])
def test_jacobian_matches_flux_differences(N):
    rng = np.random.default_rng(5)
    s = MomentSystem(N, PVC)
    for _ in range(10):
        W = s.conserved(*random_state(rng, N))
        J = s.jacobian(W)
        for k in range(s.size):
            e = np.zeros(s.size)
            e[k] = 1e-6
            fd = (s.flux(W + e) - s.flux(W - e)) / 2e-6
            assert np.allclose(J[:, k], fd, rtol=1e-6, atol=1e-7)


@pytest.mark.parametrize("kind", ["full", "regularized"])
@pytest.mark.parametrize("N", [0, 1, 3, 5])
def test_matrix_free_product_equals_dense(N, kind):
    rng = np.random.default_rng(7)
    s = MomentSystem(N, SAND)
    W = np.array([s.conserved(*random_state(rng, N)) for _ in range(20)])
    dW = rng.normal(size=W.shape)
    dense = np.einsum("...ij,...j->...i", s.nonconservative_part(W, kind), dW)
    assert np.allclose(s.nonconservative_product(W, dW, kind), dense, rtol=1e-12, atol=1e-12)
    assert np.allclose(s.nonconservative_part(W, kind) + s.jacobian(W), s.transport_matrix(W, kind),
                       atol=1e-12)


def test_state_roundtrip_and_dry_cells():
    s = MomentSystem(2, PVC)
    W = s.conserved(np.array([0.5, 1e-6]), np.array([0.3, 2.0]), np.array([[0.1, -0.2], [1, 1]]),
                    np.array([0.02, 0.5]), np.array([0.1, 0.0]))
    P = s.primitives(W)
    assert P.wet.tolist() == [True, False]
    assert np.allclose([P.h[0], P.u[0], *P.alpha[0], P.c[0], P.b[0]], [0.5, 0.3, 0.1, -0.2, 0.02, 0.1])
    assert P.u[1] == 0.0 and P.c[1] == 0.0
    M = s.transport_matrix(W)
    assert np.count_nonzero(M[1]) == 1 and M[1, 0, 1] == 1.0
    assert np.all(s.source(W).total[1] == 0.0)
    assert s.flux(W)[1, s.i_bed] == 0.0


def test_hswem_mode_has_no_exchange():
    s = MomentSystem.for_model("hswem", 2, PVC)
    W = s.conserved(0.5, 2.0, [0.3, 0.1], 0.05, 0.0)
    assert np.all(s.source(W).exchange == 0.0)
    assert np.any(s.source(W).friction != 0.0)
    assert MomentSystem.for_model("sweed", 3, PVC).order == 0


def test_velocity_profile():
    from swemed.basis import gauss_legendre_01
    x, w = gauss_legendre_01(8)
    u = system.velocity_profile(0.7, [0.3, -0.2, 0.1], x)
    assert abs(np.sum(w * u) - 0.7) <= 1e-12
    assert system.velocity_profile(0.7, [0.3, -0.2, 0.1], 0.0) == pytest.approx(0.9)
    assert system.bottom_velocity(0.7, [0.3, -0.2, 0.1]) == pytest.approx(0.9)


def test_concentration_profile():
    from swemed.basis import gauss_legendre_01
    s_b = sediment.bradford_factor(PVC)
    x, w = gauss_legendre_01(4)
    assert np.sum(w * system.concentration_profile(0.03, s_b, x)) == pytest.approx(0.03, abs=1e-15)
    assert system.concentration_profile(0.03, s_b, 0.0) == pytest.approx(s_b * 0.03)
    assert system.concentration_profile(0.03, s_b, 1.0) == pytest.approx(0.0, abs=1e-15)
