import csv

import numpy as np
import pytest

from swemed import spectral
from swemed.sediment import PVC, SAND
from swemed.system import MomentSystem


def _states(system, n, seed):
    return spectral.random_states(system, n, np.random.default_rng(seed))


@pytest.mark.parametrize("N", range(0, 7))
def test_moment_block_charpoly(N):
    for a1 in (-1.3, 0.0, 0.7):
        for mu in (-2.0, 0.1, 1.5):
            want = np.linalg.det(spectral.moment_block(a1, N) - mu * np.eye(N)) if N else 1.0
            assert spectral.moment_block_charpoly(a1, N, mu) == pytest.approx(want, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("N", range(1, 9))
def test_moment_block_speeds_are_real(N):
    b = spectral.moment_block_speeds(N)
    vals = np.linalg.eigvals(spectral.moment_block(1.0, N))
    assert np.max(np.abs(vals.imag)) < 1e-12
    assert np.allclose(np.sort(vals.real), b, atol=1e-12)


@pytest.mark.parametrize("p", [PVC, SAND], ids=["pvc", "sand"])
@pytest.mark.parametrize("N", range(0, 7))
def test_factorization_identity(N, p):
    s = MomentSystem(N, p)
    W = _states(s, 30, N)
    rng = np.random.default_rng(100 + N)
    M = s.transport_matrix(W, "regularized")
    for k in range(len(W)):
        f = spectral.factorization(s, W[k])
        assert f.degree == N + 4
        for lam in rng.uniform(-6, 6, 5):
            fac = f(lam)
            direct = spectral.char_poly_direct(M[k], lam)
            assert abs(direct - fac) <= 1e-9 * (1 + abs(fac))
            assert spectral.char_poly_factored(W[k], s, lam) == fac


def test_spectrum_sorting_and_errors():
    M = np.diag([3.0, -1.0, 2.0, -1.0])
    assert spectral.spectrum(M).real.tolist() == [-1.0, -1.0, 2.0, 3.0]
    assert spectral.eigenvalues(M).tolist() == [-1.0, -1.0, 2.0, 3.0]
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(spectral.HyperbolicityError) as info:
        spectral.eigenvalues(rot)
    assert info.value.spectrum is not None and info.value.matrix is not None
    assert spectral.imag_ratio(np.zeros(3, dtype=complex)) == 0.0


def test_defective_roots_are_rechecked():
    # with alpha_2.. = 0 the u_m root is repeated and defective; the dense
    # solver splits it into a complex pair, extended precision does not
    s = MomentSystem(3, SAND)
    W = spectral.random_states(s, 2000, np.random.default_rng(0))
    W[:, 3:5] = 0.0
    M = s.transport_matrix(W)
    plain = spectral.imag_ratio(spectral.spectrum(M))
    assert np.any(plain > spectral.IMAG_TOL)
    vals, ratio, bad = spectral.check_real(M)
    assert not bad.any()


def test_dry_cell_speed_is_zero():
    s = MomentSystem(2, PVC)
    W = s.conserved(1e-7, 0.0, [0.0, 0.0], 0.0, 0.1)
    assert spectral.max_wave_speed(s.transport_matrix(W)) == 0.0
    assert spectral.regularized_wave_speed(s, W) == 0.0
    assert spectral.wave_speed_bound(s, W) == 0.0


def test_cubic_roots():
    rng = np.random.default_rng(1)
    a, b, c = rng.normal(size=(3, 200)) * 3
    got = spectral.cubic_roots(a, b, c)
    for k in range(200):
        for root in np.roots([1, a[k], b[k], c[k]]):
            assert np.min(np.abs(got[k] - root)) < 1e-8
    assert np.allclose(spectral.cubic_roots(0.0, 0.0, 0.0), 0.0)


@pytest.mark.parametrize("N", range(0, 6))
def test_regularized_speed_matches_eigensolve(N):
    s = MomentSystem(N, SAND)
    W = _states(s, 200, 7)
    dense = spectral.max_wave_speed(s.transport_matrix(W, "regularized"))
    fast = spectral.regularized_wave_speed(s, W)
    assert np.allclose(fast, dense, rtol=1e-7)


def test_bound_mode_tracks_radius():
    s = MomentSystem(3, PVC)
    W = _states(s, 500, 3)
    bound = spectral.wave_speed_bound(s, W)
    radius = spectral.regularized_wave_speed(s, W)
    assert np.all(bound >= np.abs(s.primitives(W).u))
    assert np.median(bound / radius) >= 1.0


@pytest.mark.parametrize("N", [0, 1])
def test_low_orders_are_hyperbolic(N):
    rep = spectral.hyperbolicity_sweep({"pvc": PVC, "sand": SAND}, 1000, [N], "regularized", seed=4)
    assert rep.n_checked == 2000
    assert rep.ok, rep.counterexamples[:1]


def test_full_matrix_loses_hyperbolicity(tmp_path):
    rep = spectral.hyperbolicity_sweep({"pvc": PVC}, 300, [2, 3], "full", seed=0)
    assert not rep.ok
    path = tmp_path / "cx.csv"
    rep.write_csv(path)
    rows = list(csv.DictReader(open(path)))
    assert len(rows) == len(rep.counterexamples)
    assert float(rows[0]["imag_ratio"]) > spectral.IMAG_TOL


def test_hyperbolicity_map():
    s = MomentSystem(2, PVC)
    a1, a2, r = spectral.hyperbolicity_map(s, "full", n=11)
    assert r.shape == (11, 11)
    assert r[5, 5] <= spectral.IMAG_TOL  # alpha = 0 is the shallow-water state
    assert r.max() > spectral.IMAG_TOL
    a1, a2, r = spectral.hyperbolicity_map(MomentSystem(1, PVC), n=7)
    assert r.shape == (7, 1)
    with pytest.raises(ValueError):
        spectral.hyperbolicity_map(MomentSystem(0, PVC))
