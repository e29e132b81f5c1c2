"""State vector, vertical profiles, transport matrices and sources.

The conserved state of one cell is

    W = (h, h u_m, h alpha_1, ..., h alpha_N, h c_m, h_b)

and the model reads ``W_t + A(W) W_x = S(W)`` with ``A = dF/dW - B + A_s``.
Every function here works on arrays whose last axis is the state axis, so a
whole mesh (shape ``(n_cells, N + 4)``) is assembled in one call.
"""

from enum import Enum
from typing import NamedTuple

import numpy as np

from . import sediment
from .basis import build_tables, phi
from .sediment import DRY_THRESHOLD


class Model(str, Enum):
    SWEED = "sweed"      # no velocity moments, with erosion and deposition
    HSWEM = "hswem"      # moments, bedload only (exchange rates forced to zero)
    HSWEMED = "hswemed"  # moments with erosion and deposition


class MatrixKind(str, Enum):
    FULL = "full"
    REGULARIZED = "regularized"


class Primitives(NamedTuple):
    h: np.ndarray
    u: np.ndarray
    alpha: np.ndarray  # shape (..., N)
    c: np.ndarray
    b: np.ndarray
    wet: np.ndarray


class SourceVector(NamedTuple):
    friction: np.ndarray
    exchange: np.ndarray

    @property
    def total(self):
        return self.friction + self.exchange


def _contract(T, x, y):
    """sum_jk T[i, j, k] x[..., j] y[..., k] via one matrix product."""
    n = T.shape[0]
    outer = (x[..., :, None] * y[..., None, :]).reshape(x.shape[:-1] + (n * n,))
    return outer @ T.reshape(n, n * n).T


class MomentSystem:
    """Moment system of order ``order`` for one sediment parameter set.

    ``exchange=False`` forces erosion and deposition to zero (HSWEM mode).
    """

    def __init__(self, order, params, exchange=True, dry_threshold=DRY_THRESHOLD):
        if order < 0:
            raise ValueError("moment order must be >= 0")
        self.order = order
        self.params = params
        self.exchange = exchange
        self.dry_threshold = dry_threshold
        self.tables = build_tables(order)
        self.size = order + 4
        # indices into the state axis
        self.i_mom = slice(2, 2 + order)
        self.i_conc = order + 2
        self.i_bed = order + 3

    @classmethod
    def for_model(cls, model, order, params, dry_threshold=DRY_THRESHOLD):
        model = Model(model)
        if model is Model.SWEED:
            order = 0
        return cls(order, params, exchange=model is not Model.HSWEM, dry_threshold=dry_threshold)

    # state conversions

    def primitives(self, W):
        W = np.asarray(W, dtype=float)
        h = W[..., 0]
        wet = h >= self.dry_threshold
        inv = np.where(wet, 1.0 / np.where(wet, h, 1.0), 0.0)
        u = W[..., 1] * inv
        alpha = W[..., self.i_mom] * inv[..., None]
        c = W[..., self.i_conc] * inv
        return Primitives(h, u, alpha, c, W[..., self.i_bed], wet)

    def conserved(self, h, u, alpha, c, b):
        h = np.asarray(h, dtype=float)
        shape = np.broadcast(h, u, c, b).shape
        W = np.zeros(shape + (self.size,))
        W[..., 0] = h
        W[..., 1] = h * u
        if self.order:
            W[..., self.i_mom] = np.asarray(h)[..., None] * np.broadcast_to(alpha, shape + (self.order,))
        W[..., self.i_conc] = h * c
        W[..., self.i_bed] = b
        return W

    # closures evaluated on states

    def _deltas(self, P):
        u_b = bottom_velocity(P.u, P.alpha)
        c = np.clip(P.c, 0.0, 1.0)
        return sediment.bedload_flux_derivatives(P.h, u_b, c, self.params, self.dry_threshold)

    def exchange_rates(self, P):
        """(E, D, F_b) per cell; zero in dry cells and in HSWEM mode."""
        if not self.exchange:
            z = np.zeros_like(P.h)
            return sediment.ExchangeRates(z, z, z)
        u_b = bottom_velocity(P.u, P.alpha)
        c = np.clip(P.c, 0.0, 1.0)
        e, d, f = sediment.exchange(u_b, c, self.params)
        return sediment.ExchangeRates(*(np.where(P.wet, x, 0.0) for x in (e, d, f)))

    # fluxes and matrices

    def flux(self, W):
        """Conservative flux F(W)."""
        P = self.primitives(W)
        p, t = self.params, self.tables
        h, u, al, c = P.h, P.u, P.alpha, P.c
        F = np.zeros(np.shape(W))
        F[..., 0] = h * u
        F[..., 1] = h * u * u + h * np.sum(al * al / t.weights, axis=-1) + 0.5 * p.g * h * h
        if self.order:
            F[..., self.i_mom] = (2.0 * (h * u)[..., None] * al
                                  + h[..., None] * _contract(t.A, al, al))
        F[..., self.i_conc] = h * c * u
        u_b = bottom_velocity(u, al)
        qb = sediment.bedload_flux(u_b, np.clip(c, 0.0, 1.0), p) / (1.0 - p.psi)
        F[..., self.i_bed] = np.where(P.wet, qb, 0.0)
        return F

    def _blocks(self, P, alpha, deltas):
        """Jacobian, nonconservative matrix B and sediment-discharge matrix A_s.

        ``alpha`` enters the fluid rows; ``deltas`` fills the Exner row and A_s.
        """
        p, t = self.params, self.tables
        n, N = self.size, self.order
        h, u, c = P.h, P.u, P.c
        shape = h.shape
        J = np.zeros(shape + (n, n))
        Bm = np.zeros(shape + (n, n))
        As = np.zeros(shape + (n, n))
        mom, con, bed = self.i_mom, self.i_conc, self.i_bed
        rho = p.rho_w + c * p.delta_rho
        # g h (rho - rho_w) / (2 rho) and the matching h c_m coefficient
        dens = p.g * h * p.delta_rho / (2.0 * rho)
        d_h, d_q, d_c = deltas
        exner = np.zeros(shape + (n,))
        exner[..., 0] = d_h
        exner[..., 1] = d_q
        exner[..., mom] = d_q[..., None]
        exner[..., con] = d_c

        J[..., 0, 1] = 1.0
        J[..., 1, 0] = p.g * h - u * u - np.sum(alpha * alpha / t.weights, axis=-1)
        J[..., 1, 1] = 2.0 * u
        J[..., 1, mom] = 2.0 * alpha / t.weights
        Bm[..., 1, 0] = c * dens
        Bm[..., 1, con] = -dens
        Bm[..., 1, bed] = -p.g * h
        if N:
            Aa = np.einsum("ijk,...k->...ij", t.A, alpha)
            Ba = np.einsum("ijk,...k->...ij", t.B, alpha)
            kfac = 2.0 * t.weights * t.K  # 2 (2i+1) K_i
            rows = np.arange(2, 2 + N)
            J[..., rows, 0] = -2.0 * u[..., None] * alpha - np.einsum("...ij,...j->...i", Aa, alpha)
            J[..., rows, 1] = 2.0 * alpha
            J[..., 2:2 + N, 2:2 + N] = 2.0 * Aa + 2.0 * u[..., None, None] * np.eye(N)
            Bm[..., rows, 0] = -kfac * (c * dens)[..., None]
            Bm[..., rows, con] = kfac * dens[..., None]
            Bm[..., 2:2 + N, 2:2 + N] = u[..., None, None] * np.eye(N) - Ba
            shear = alpha @ t.G.T  # sum_j alpha_j G_ij
            As[..., 2:2 + N, :] = shear[..., :, None] * exner[..., None, :]
        J[..., con, 0] = -c * u
        J[..., con, 1] = c
        J[..., con, con] = u
        J[..., bed, :] = exner
        return J, Bm, As

    def _assemble(self, W, kind):
        P = self.primitives(W)
        deltas = self._deltas(P)
        alpha = P.alpha
        if MatrixKind(kind) is MatrixKind.REGULARIZED and self.order > 1:
            alpha = alpha.copy()
            alpha[..., 1:] = 0.0
        J, Bm, As = self._blocks(P, alpha, deltas)
        return P, J, Bm, As

    def jacobian(self, W):
        """dF/dW at the full state."""
        P = self.primitives(W)
        J, _, _ = self._blocks(P, P.alpha, self._deltas(P))
        return self._dry(J, P.wet)

    def nonconservative_matrix(self, W):
        P = self.primitives(W)
        _, Bm, _ = self._blocks(P, P.alpha, self._deltas(P))
        return np.where(P.wet[..., None, None], Bm, 0.0)

    def sediment_discharge_matrix(self, W):
        P = self.primitives(W)
        _, _, As = self._blocks(P, P.alpha, self._deltas(P))
        return np.where(P.wet[..., None, None], As, 0.0)

    def transport_matrix(self, W, kind=MatrixKind.REGULARIZED):
        """A(W) = dF/dW - B + A_s (full) or its regularization."""
        P, J, Bm, As = self._assemble(W, kind)
        return self._dry(J - Bm + As, P.wet)

    def nonconservative_part(self, W, kind=MatrixKind.REGULARIZED):
        """A_kind(W) - dF/dW(W): the part of the transport not written as a flux."""
        P = self.primitives(W)
        deltas = self._deltas(P)
        J, Bm, As = self._blocks(P, P.alpha, deltas)
        if MatrixKind(kind) is MatrixKind.REGULARIZED and self.order > 1:
            alpha = P.alpha.copy()
            alpha[..., 1:] = 0.0
            Jr, Br, Asr = self._blocks(P, alpha, deltas)
            out = Jr - Br + Asr - J
        else:
            out = As - Bm
        return np.where(P.wet[..., None, None], out, 0.0)

    def nonconservative_product(self, W, dW, kind=MatrixKind.REGULARIZED):
        """(A_kind(W) - dF/dW(W)) dW without forming matrices.

        Equal to ``einsum('...ij,...j', nonconservative_part(W, kind), dW)``.
        """
        P = self.primitives(W)
        p, t, N = self.params, self.tables, self.order
        h, u, c, al = P.h, P.u, P.c, P.alpha
        dh, dq, ds, db = dW[..., 0], dW[..., 1], dW[..., self.i_conc], dW[..., self.i_bed]
        rho = p.rho_w + c * p.delta_rho
        dens = p.g * h * p.delta_rho / (2.0 * rho)
        out = np.zeros(np.shape(dW))
        # momentum: -B row, plus the alpha_2.. terms dropped by the regularization
        mom = -c * dens * dh + dens * ds + p.g * h * db
        reg = MatrixKind(kind) is MatrixKind.REGULARIZED and N > 1
        ar = al
        if reg:
            ar = al.copy()
            ar[..., 1:] = 0.0
            hi = al[..., 1:]
            w = t.weights[1:]
            mom = mom + np.sum(hi * hi / w, axis=-1) * dh - np.sum(2.0 * hi / w * dW[..., 3:2 + N], axis=-1)
        out[..., 1] = mom
        if N:
            dm = dW[..., self.i_mom]
            kfac = 2.0 * t.weights * t.K
            rows = kfac * ((c * dens * dh - dens * ds)[..., None])
            rows = rows - u[..., None] * dm + _contract(t.B, dm, ar)
            if reg:
                d_al = ar - al
                quad = _contract(t.A, ar, ar) - _contract(t.A, al, al)
                rows = rows + (-2.0 * u[..., None] * d_al - quad) * dh[..., None]
                rows = rows + 2.0 * d_al * dq[..., None]
                rows = rows + 2.0 * _contract(t.A, dm, d_al)
            d_h, d_q, d_c = self._deltas(P)
            exner = d_h * dh + d_q * (dq + dm.sum(axis=-1)) + d_c * ds
            rows = rows + (ar @ t.G.T) * exner[..., None]
            out[..., self.i_mom] = rows
        return np.where(P.wet[..., None], out, 0.0)

    @staticmethod
    def _dry(M, wet):
        M = np.where(wet[..., None, None], M, 0.0)
        M[..., 0, 1] = 1.0
        return M

    def source(self, W):
        """Friction and exchange sources, zero in dry cells."""
        P = self.primitives(W)
        p, t = self.params, self.tables
        shape = P.h.shape + (self.size,)
        u_b = bottom_velocity(P.u, P.alpha)
        drag = p.eps * np.abs(u_b) * u_b
        fr = np.zeros(shape)
        fr[..., 1] = -drag
        if self.order:
            h_safe = np.where(P.wet, P.h, 1.0)
            visc = (p.nu / h_safe)[..., None] * (P.alpha @ t.C.T)
            fr[..., self.i_mom] = -t.weights * (drag[..., None] + visc)
        fr = np.where(P.wet[..., None], fr, 0.0)

        f_b = self.exchange_rates(P).F_b
        ex = np.zeros(shape)
        ex[..., 0] = 1.0
        ex[..., 1] = u_b
        if self.order:
            ex[..., self.i_mom] = P.alpha + P.alpha @ (t.H - t.G).T
        ex[..., self.i_conc] = 1.0 - p.psi
        ex[..., self.i_bed] = -1.0
        ex = ex * f_b[..., None]
        return SourceVector(fr, ex)


# profile helpers

def bottom_velocity(u_m, alpha):
    """u_b = u_m + sum_j alpha_j (velocity at the bed)."""
    return np.asarray(u_m, dtype=float) + np.sum(np.asarray(alpha, dtype=float), axis=-1)


def velocity_profile(u_m, alpha, zeta):
    """Horizontal velocity u_m + sum_j alpha_j phi_j(zeta)."""
    out = np.asarray(u_m, dtype=float) + 0.0 * np.asarray(zeta, dtype=float)
    for j, a in enumerate(np.atleast_1d(alpha), start=1):
        out = out + a * phi(j, zeta)
    return out


def concentration_coefficients(c_m, S_b):
    """Coefficients (c_1, c_2) of the quadratic suspended-load profile."""
    return S_b * c_m / 2.0, (S_b - 2.0) * c_m / 2.0


def concentration_profile(c_m, S_b, zeta):
    """Quadratic profile with mean c_m, bed value S_b c_m and zero at the surface."""
    c1, c2 = concentration_coefficients(c_m, S_b)
    return c_m + c1 * phi(1, zeta) + c2 * phi(2, zeta)


def sediment_weighted_velocity(u_m, alpha_1, alpha_2, S_b):
    """Concentration-weighted mean velocity (diagnostic; transport uses u_m)."""
    return u_m + S_b * alpha_1 / 6.0 + (S_b - 2.0) * alpha_2 / 10.0


# functional entry points on a single state

def _system(tables, p, exchange=True, dry_threshold=DRY_THRESHOLD):
    s = MomentSystem(tables.order, p, exchange=exchange, dry_threshold=dry_threshold)
    return s


def assemble_full(state, tables, p, **kw):
    return _system(tables, p, **kw).transport_matrix(state, MatrixKind.FULL)


def assemble_regularized(state, tables, p, **kw):
    return _system(tables, p, **kw).transport_matrix(state, MatrixKind.REGULARIZED)


def source(state, tables, p, **kw):
    return _system(tables, p, **kw).source(state)
