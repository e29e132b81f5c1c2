"""Characteristic polynomial, eigenvalues and hyperbolicity checks.

For the regularized matrix the characteristic polynomial factors as

    (u_m - lam) * cubic(lam) * det(A_2 - (lam - u_m) I),

where ``cubic`` couples the shallow-water pair with the bed and ``A_2`` is the
N x N moment block with zero diagonal, ``A_2[i-2, i-1] = (i+1)/(2i+1) alpha_1``
and ``A_2[i-1, i-2] = (i-1)/(2i-1) alpha_1``. For N = 1 the block is [0].
"""

import csv
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .system import MatrixKind, MomentSystem, bottom_velocity

IMAG_TOL = 1e-8
# Defective eigenvalues of multiplicity m are resolved by a dense solver only to
# about eps**(1/m); spectra flagged below this ratio are re-checked in extended precision.
_ESCALATE_BELOW = 1e-4
_MP_DPS = 50


class SpectralError(RuntimeError):
    """Eigensolver failure; carries the offending matrix."""

    def __init__(self, message, matrix=None, state=None):
        super().__init__(message)
        self.matrix = matrix
        self.state = state


class HyperbolicityError(SpectralError):
    """Raised when a matrix expected to be hyperbolic has a complex spectrum."""

    def __init__(self, message, matrix=None, state=None, spectrum=None):
        super().__init__(message, matrix, state)
        self.spectrum = spectrum


# moment block

def moment_block_coefficients(order):
    """Off-diagonal factors (c_i, a_i), i = 2..N, per unit alpha_1."""
    i = np.arange(2, order + 1)
    return (i + 1) / (2 * i + 1), (i - 1) / (2 * i - 1)


def moment_block(alpha_1, order):
    """The N x N matrix A_2."""
    M = np.zeros((order, order))
    c, a = moment_block_coefficients(order)
    for n, i in enumerate(range(2, order + 1)):
        M[i - 2, i - 1] = c[n] * alpha_1
        M[i - 1, i - 2] = a[n] * alpha_1
    return M


def moment_block_charpoly(alpha_1, order, mu):
    """det(A_2 - mu I) by the three-term recurrence of a zero-diagonal tridiagonal matrix."""
    mu = np.asarray(mu, dtype=float)
    alpha_1 = np.asarray(alpha_1, dtype=float)
    c, a = moment_block_coefficients(order)
    prev, cur = np.ones(np.broadcast(mu, alpha_1).shape), -mu + 0.0 * alpha_1
    if order == 0:
        return prev
    for n in range(order - 1):
        prev, cur = cur, -mu * cur - c[n] * a[n] * alpha_1 ** 2 * prev
    return cur


@lru_cache(maxsize=None)
def moment_block_speeds(order):
    """Eigenvalues b_i of A_2 at alpha_1 = 1 (the moment speeds are u_m + b_i alpha_1).

    The block is similar to a symmetric tridiagonal matrix with off-diagonals
    sqrt(c_i a_i), so the b_i are real.
    """
    c, a = moment_block_coefficients(order)
    off = np.sqrt(c * a)
    S = np.diag(off, 1) + np.diag(off, -1) if order > 1 else np.zeros((order, order))
    out = np.linalg.eigvalsh(S) if order else np.zeros(0)
    out.setflags(write=False)
    return out


# factored characteristic polynomial

@dataclass(frozen=True)
class CharFactorization:
    """Factors of det(A_reg - lam I).

    ``cubic`` holds coefficients (highest power first) of the bracketed factor,
    ``quartic`` those of (u_m - lam) * cubic.
    """

    um_root: float
    alpha_1: float
    cubic: np.ndarray
    quartic: np.ndarray
    moment_block: np.ndarray = field(repr=False)

    @property
    def degree(self):
        return len(self.quartic) - 1 + self.moment_block.shape[0]

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        N = self.moment_block.shape[0]
        block = moment_block_charpoly(self.alpha_1, N, lam - self.um_root)
        return np.polyval(self.quartic, lam) * block


def _cubic_terms(system, W):
    P = system.primitives(W)
    d_h, d_q, d_c = system._deltas(P)
    a1 = P.alpha[..., 0] if system.order else np.zeros_like(P.h)
    gh = system.params.g * P.h
    return P, a1, gh, d_h, d_q, d_c


def factorization(system, W):
    """Factor the characteristic polynomial of the regularized matrix at one wet state."""
    P, a1, gh, d_h, d_q, d_c = _cubic_terms(system, np.asarray(W, dtype=float))
    u, c = float(P.u), float(P.c)
    a1, gh, d_h, d_q, d_c = map(float, (a1, gh, d_h, d_q, d_c))
    # -lam((lam - u)^2 - gh - a1^2) + gh (d_h + lam d_q + c d_c + 2 a1 d_q)
    cubic = np.array([-1.0, 2.0 * u, -(u * u - gh - a1 * a1) + gh * d_q,
                      gh * (d_h + c * d_c + 2.0 * a1 * d_q)])
    quartic = np.polymul([-1.0, u], cubic)
    return CharFactorization(u, a1, cubic, quartic, moment_block(a1, system.order))


def char_poly_factored(state, system, lam):
    """Closed-form characteristic polynomial of the regularized matrix."""
    return factorization(system, state)(lam)


def char_poly_direct(matrix, lam):
    """det(matrix - lam I) via LU with partial pivoting."""
    M = np.asarray(matrix, dtype=float)
    return float(np.linalg.det(M - lam * np.eye(M.shape[-1])))


# eigenvalues

def _sorted(vals):
    # ascending by real part; stable for ties
    order = np.argsort(vals.real, kind="stable", axis=-1)
    return np.take_along_axis(vals, order, axis=-1)


def spectrum(matrix):
    """All eigenvalues (complex), ascending by real part."""
    M = np.asarray(matrix, dtype=float)
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver did not converge: {exc}", matrix=M) from exc
    return _sorted(vals)


def _mp_spectrum(M):
    with mpmath.workdps(_MP_DPS):
        ev = mpmath.eig(mpmath.matrix(M.tolist()), left=False, right=False)
        return np.array([complex(z) for z in ev])


def imag_ratio(vals):
    """max |Im| / spectral radius per spectrum (0 for the zero spectrum)."""
    vals = np.asarray(vals)
    radius = np.abs(vals).max(axis=-1)
    imag = np.abs(vals.imag).max(axis=-1)
    return np.where(radius > 0, imag / np.where(radius > 0, radius, 1.0), 0.0)


def check_real(matrices, tol=IMAG_TOL):
    """Spectra of a batch of matrices and a mask of genuine complex spectra.

    Borderline cases (tol < ratio < 1e-4) are re-solved with mpmath before
    being declared non-real. Returns ``(spectra, ratio, complex_mask)``.
    """
    Ms = np.asarray(matrices, dtype=float)
    flat = Ms.reshape((-1,) + Ms.shape[-2:])
    vals = spectrum(flat)
    ratio = imag_ratio(vals)
    for k in np.flatnonzero((ratio > tol) & (ratio < _ESCALATE_BELOW)):
        mp_vals = _sorted(_mp_spectrum(flat[k]))
        vals[k] = mp_vals
        ratio[k] = imag_ratio(mp_vals)
    bad = ratio > tol
    shape = Ms.shape[:-2]
    return vals.reshape(shape + vals.shape[-1:]), ratio.reshape(shape), bad.reshape(shape)


def eigenvalues(matrix, tol=IMAG_TOL, state=None):
    """Sorted real eigenvalues of one matrix; raises HyperbolicityError if any is complex."""
    M = np.asarray(matrix, dtype=float)
    vals, ratio, bad = check_real(M[None], tol)
    if bad[0]:
        raise HyperbolicityError(
            f"complex spectrum: max |Im| / radius = {ratio[0]:.3e} > {tol:g}",
            matrix=M, state=state, spectrum=vals[0])
    return np.sort(vals[0].real, kind="stable")


def max_wave_speed(matrix):
    """Spectral radius of one matrix or of a batch (last two axes). Dry cells give 0."""
    return np.abs(spectrum(matrix)).max(axis=-1)


# cheap wave speeds for the solver

def cubic_roots(a, b, c):
    """Roots of lam^3 + a lam^2 + b lam + c (complex Cardano, vectorized)."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    # non-finite states give nan roots; the solver reports them itself
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        p = b - a * a / 3.0
        q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
        sq = np.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3 + 0j)
        u1, u2 = -q / 2.0 + sq, -q / 2.0 - sq
        big = np.where(np.abs(u1) >= np.abs(u2), u1, u2)
        C = big ** (1.0 / 3.0)
        zero = C == 0
        C_safe = np.where(zero, 1.0, C)
        omega = np.exp(2j * np.pi / 3.0) ** np.arange(3)
        Ck = C_safe[..., None] * omega
        t = np.where(zero[..., None], 0.0, Ck - (p[..., None] / 3.0) / Ck)
        return t - (a / 3.0)[..., None]


def regularized_wave_speed(system, W):
    """Spectral radius of the regularized matrix per cell, from the factorization.

    Uses u_m, the roots of the cubic and u_m + b_i alpha_1 instead of a dense
    eigensolve of the full (N+4) x (N+4) matrix.
    """
    P, a1, gh, d_h, d_q, d_c = _cubic_terms(system, W)
    u = P.u
    # monic form: lam^3 - 2u lam^2 + (u^2 - gh - a1^2 - gh d_q) lam - gh(d_h + c d_c + 2 a1 d_q)
    roots = cubic_roots(-2.0 * u, u * u - gh - a1 * a1 - gh * d_q,
                        -gh * (d_h + P.c * d_c + 2.0 * a1 * d_q))
    speed = np.maximum(np.abs(roots).max(axis=-1), np.abs(u))
    b = moment_block_speeds(system.order)
    if b.size:
        speed = np.maximum(speed, np.abs(u[..., None] + b * a1[..., None]).max(axis=-1))
    return np.where(P.wet, speed, 0.0)


def wave_speed_bound(system, W):
    """Upper estimate max(|u_m| + |alpha_1| b_max, |u_m| + sqrt(gh + alpha_1^2) + Gershgorin(Exner row))."""
    P, a1, gh, d_h, d_q, d_c = _cubic_terms(system, W)
    b = moment_block_speeds(system.order)
    b_max = np.abs(b).max() if b.size else 0.0
    exner = np.abs(d_h) + (system.order + 1) * np.abs(d_q) + np.abs(d_c)
    speed = np.maximum(np.abs(P.u) + np.abs(a1) * b_max,
                       np.abs(P.u) + np.sqrt(gh + a1 * a1) + exner)
    return np.where(P.wet, speed, 0.0)


# randomized sweeps

@dataclass
class SweepReport:
    kind: str
    n_checked: int = 0
    max_ratio: float = 0.0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.counterexamples

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["material", "kind", "order", "h", "u_m", "c_m", "alpha",
                        "imag_ratio", "spectrum"])
            for row in self.counterexamples:
                w.writerow([row["material"], self.kind, row["order"], repr(row["h"]),
                            repr(row["u_m"]), repr(row["c_m"]),
                            ";".join(repr(a) for a in row["alpha"]), repr(row["imag_ratio"]),
                            ";".join(f"{z.real!r}{z.imag:+.17g}j" for z in row["spectrum"])])


def random_states(system, n, rng, h_range=(1e-3, 2.0), u_max=5.0, alpha_max=2.0, c_max=0.3):
    h = rng.uniform(*h_range, n)
    u = rng.uniform(-u_max, u_max, n)
    alpha = rng.uniform(-alpha_max, alpha_max, (n, system.order))
    c = rng.uniform(0.0, c_max, n)
    return system.conserved(h, u, alpha, c, np.zeros(n))


def hyperbolicity_sweep(params_sets, n_states=10_000, orders=range(1, 7),
                        kind=MatrixKind.REGULARIZED, seed=0, tol=IMAG_TOL):
    """Check reality of the spectrum over random physical states.

    ``params_sets`` maps a material name to SedimentParams; ``n_states`` states
    are drawn per material and spread evenly over ``orders``.
    """
    kind = MatrixKind(kind)
    rng = np.random.default_rng(seed)
    report = SweepReport(kind.value)
    orders = list(orders)
    for name, params in params_sets.items():
        counts = np.full(len(orders), n_states // len(orders))
        counts[: n_states % len(orders)] += 1
        for order, n in zip(orders, counts):
            system = MomentSystem(order, params)
            W = random_states(system, int(n), rng)
            vals, ratio, bad = check_real(system.transport_matrix(W, kind), tol)
            report.n_checked += int(n)
            report.max_ratio = max(report.max_ratio, float(ratio.max()))
            P = system.primitives(W)
            for k in np.flatnonzero(bad):
                report.counterexamples.append(dict(
                    material=name, order=order, h=float(P.h[k]), u_m=float(P.u[k]),
                    c_m=float(P.c[k]), alpha=[float(a) for a in P.alpha[k]],
                    imag_ratio=float(ratio[k]), spectrum=vals[k]))
    return report


def state_spectra(system, W, kind=MatrixKind.REGULARIZED):
    """Spectra and bottom velocities for every cell of a field (for run reports)."""
    P = system.primitives(W)
    vals = spectrum(system.transport_matrix(W, kind))
    return vals, bottom_velocity(P.u, P.alpha)


def hyperbolicity_map(system, kind=MatrixKind.REGULARIZED, alpha_max=2.0, n=41, h=1.0, u_m=0.0,
                      c_m=0.05):
    """Imaginary-part ratio on a grid over (alpha_1, alpha_2) at fixed h, u_m, c_m.

    Higher moments are zero; for order 1 the second axis is a single point.
    Returns (alpha_1 grid, alpha_2 grid, ratio) with ratio shaped (n1, n2).
    """
    if system.order < 1:
        raise ValueError("a map needs at least one velocity moment")
    a1 = np.linspace(-alpha_max, alpha_max, n)
    a2 = a1 if system.order >= 2 else np.zeros(1)
    A1, A2 = np.meshgrid(a1, a2, indexing="ij")
    alpha = np.zeros(A1.shape + (system.order,))
    alpha[..., 0] = A1
    if system.order >= 2:
        alpha[..., 1] = A2
    W = system.conserved(np.full(A1.shape, h), np.full(A1.shape, u_m), alpha,
                         np.full(A1.shape, c_m), np.zeros(A1.shape))
    _, ratio, _ = check_real(system.transport_matrix(W.reshape(-1, system.size), kind))
    return a1, a2, ratio.reshape(A1.shape)
