"""Scaled Legendre basis on [0, 1] and the coupling tables of the moment equations.

The basis functions are

    phi_j(zeta) = (1/j!) d^j/dzeta^j (zeta - zeta^2)^j,

so that phi_j(0) = 1, the mean of phi_j vanishes for j >= 1 and the family is
orthogonal with ``int phi_i phi_j = delta_ij / (2i + 1)``.

Table arrays are stored 0-based but correspond to moment indices 1..N, so
``tables.A[0, 0, 1]`` is the entry A_112.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
import numpy as np
from numpy.polynomial import Legendre, Polynomial


@lru_cache(maxsize=None)
def phi_coefficients(j):
    """Monomial coefficients of phi_j, lowest degree first.

    Expanding (zeta - zeta^2)^j with the binomial theorem and differentiating
    j times term by term gives the closed form
    ``sum_k (-1)^k C(j, k) C(j + k, k) zeta^k``. Coefficients are exact integers.
    """
    if j < 0:
        raise ValueError(f"basis degree must be >= 0, got {j}")
    return tuple((-1) ** k * comb(j, k) * comb(j + k, k) for k in range(j + 1))


def phi_monomial(j):
    """phi_j as a power series; exact coefficients but ill-conditioned for large j."""
    return Polynomial(np.array(phi_coefficients(j), dtype=float))


def phi_polynomial(j):
    """phi_j as a Legendre series on the domain [0, 1].

    phi_j(zeta) = (-1)^j P_j(2 zeta - 1). Clenshaw evaluation keeps round-off
    near machine precision at the orders used here, unlike the power series.
    """
    if j < 0:
        raise ValueError(f"basis degree must be >= 0, got {j}")
    coef = np.zeros(j + 1)
    coef[j] = (-1.0) ** j
    return Legendre(coef, domain=[0.0, 1.0])


def _check_zeta(zeta):
    z = np.asarray(zeta, dtype=float)
    if np.any((z < 0.0) | (z > 1.0)) or np.any(~np.isfinite(z)):
        raise ValueError("zeta must lie in [0, 1]")
    return z


def phi(j, zeta):
    """Evaluate phi_j at scaled height(s) ``zeta`` in [0, 1]."""
    z = _check_zeta(zeta)
    out = phi_polynomial(j)(z)
    return float(out) if out.ndim == 0 else out


def phi_prime(j, zeta):
    """Evaluate d phi_j / d zeta."""
    z = _check_zeta(zeta)
    out = phi_polynomial(j).deriv()(z) if j > 0 else np.zeros_like(z)
    return float(out) if np.ndim(out) == 0 else out


def quadrature_nodes(order):
    """Node count exact for every table integrand at moment order ``order``."""
    return -(-(3 * order + 2) // 2) + 1


def gauss_legendre_01(n):
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


# Tables are integrated in extended precision and rounded once to float64, so
# that entries are the correctly rounded rationals at every order.
_TABLE_DPS = 40


def _gauss_legendre_01_mp(n):
    """Gauss-Legendre rule on [0, 1] in mpmath precision (Newton on P_n)."""
    nodes, weights = [], []
    for i in range(1, n + 1):
        x = mpmath.cos(mpmath.pi * (i - mpmath.mpf(1) / 4) / (n + mpmath.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mpmath.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1) if n > 1 else mpmath.mpf(1)
            step = p1 / dp
            x -= step
            if abs(step) < mpmath.mpf(10) ** (-_TABLE_DPS + 5):
                break
        p0, p1 = mpmath.mpf(1), x
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1) if n > 1 else mpmath.mpf(1)
        nodes.append((1 - x) / 2)
        weights.append(1 / ((1 - x * x) * dp * dp))
    return nodes, weights


def _horner(coef, z):
    acc = mpmath.mpf(0)
    for c in reversed(coef):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class BasisTables:
    """Coupling tables for moment order ``order``.

    A[i, j, k] = (2i+1) int phi_i phi_j phi_k
    B[i, j, k] = (2i+1) int phi_i' (int_0^zeta phi_j) phi_k
    C[i, j]    = int phi_i' phi_j'
    G[i, j]    = (2i+1) int phi_i phi_j'
    H[i, j]    = (2i+1) int zeta phi_i phi_j'
    K[i]       = int zeta phi_i
    """

    order: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    G: np.ndarray
    H: np.ndarray
    K: np.ndarray

    @property
    def weights(self):
        """The factors 2i + 1 for i = 1..N."""
        return 2.0 * np.arange(1, self.order + 1) + 1.0


def build_tables(order, n_nodes=None):
    """Build the coupling tables for moment order ``order`` by Gauss-Legendre quadrature.

    The default node count is exact for every integrand; ``n_nodes`` may
    raise it (results must not change).
    """
    if order < 0:
        raise ValueError(f"moment order must be >= 0, got {order}")
    if n_nodes is None:
        n_nodes = quadrature_nodes(order)
    return _build(order, n_nodes)


@lru_cache(maxsize=None)
def _build(order, n_nodes):
    with mpmath.workdps(_TABLE_DPS):
        z, w = _gauss_legendre_01_mp(n_nodes)
        val, der, anti = [], [], []
        for i in range(1, order + 1):
            c = phi_coefficients(i)
            d = [k * c[k] for k in range(1, len(c))]
            a = [0] + [mpmath.mpf(c[k]) / (k + 1) for k in range(len(c))]
            val.append([_horner(c, zq) for zq in z])
            der.append([_horner(d, zq) for zq in z])
            anti.append([_horner(a, zq) for zq in z])

        def quad(f):
            r = mpmath.fsum(wq * f(q) for q, wq in enumerate(w))
            # entries are rationals of modest size; anything this small is an exact zero
            return 0.0 if abs(r) < 1e-25 else float(r)

        n = order
        A = np.zeros((n, n, n))
        B = np.zeros((n, n, n))
        C = np.zeros((n, n))
        G = np.zeros((n, n))
        H = np.zeros((n, n))
        K = np.zeros(n)
        for i in range(n):
            s = 2 * (i + 1) + 1
            K[i] = quad(lambda q: z[q] * val[i][q])
            for j in range(n):
                C[i, j] = quad(lambda q: der[i][q] * der[j][q])
                G[i, j] = quad(lambda q: s * val[i][q] * der[j][q])
                H[i, j] = quad(lambda q: s * z[q] * val[i][q] * der[j][q])
                for k in range(n):
                    if k >= j:
                        A[i, j, k] = quad(lambda q: s * val[i][q] * val[j][q] * val[k][q])
                    else:
                        A[i, j, k] = A[i, k, j]
                    B[i, j, k] = quad(lambda q: s * der[i][q] * anti[j][q] * val[k][q])

    for arr in (A, B, C, G, H, K):
        arr.setflags(write=False)
    return BasisTables(order, A, B, C, G, H, K)
