"""Finite-volume integrator for W_t + A(W) W_x = S(W) in one space dimension.

Space: path-conservative Lax-Friedrichs. Along the straight segment between
neighbouring states the path integral of A splits into the exact flux jump
plus the integral of the non-flux part ``A - dF/dW``, which is approximated by
the midpoint rule (or the trapezoid rule). The fluctuations are

    D^{+-} = 1/2 (dF + N_mid dW) +- 1/2 a dW,

with ``a`` the larger spectral radius of the two neighbours. Rows that are in
conservation form (mass, suspended load, bed) therefore telescope exactly.

Time: the four-stage, third-order SSP Runge-Kutta method in Shu-Osher form

    u1 = u  + dt/2 L(u)
    u2 = u1 + dt/2 L(u1)
    u3 = 2/3 u + 1/3 u2 + dt/6 L(u2)
    u4 = u3 + dt/2 L(u3)

Fields carry one ghost cell on each side: shape ``(n_cells + 2, N + 4)``.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import spectral
from .sediment import DRY_THRESHOLD
from .system import MatrixKind, Model

MIN_DT = 1e-12

# Shu-Osher rows: (weight of u0, weight of previous stage, dt factor)
SSPRK43 = ((0.0, 1.0, 0.5), (0.0, 1.0, 0.5), (2.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0), (0.0, 1.0, 0.5))


class WaveSpeed(str, Enum):
    EIGENSOLVE = "eigensolve"
    BOUND = "bound"


class Boundary(str, Enum):
    OPEN = "open"
    PERIODIC = "periodic"


class SolverAbort(RuntimeError):
    """Integration stopped; carries the time, offending cell and a copy of the field."""

    def __init__(self, message, time=None, cell=None, state=None, field=None):
        super().__init__(message)
        self.time = time
        self.cell = cell
        self.state = state
        self.field = field


@dataclass(frozen=True)
class Mesh:
    x_left: float
    x_right: float
    n_cells: int
    ghost_layers: int = 1

    def __post_init__(self):
        if self.n_cells < 1 or not self.x_right > self.x_left:
            raise ValueError("mesh needs n_cells >= 1 and x_right > x_left")

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.n_cells

    @property
    def centers(self):
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class SolverConfig:
    """Exactly one of ``dt`` (fixed step) and ``cfl`` must be given."""

    end_time: float
    dt: float | None = None
    cfl: float | None = None
    dry_threshold: float = DRY_THRESHOLD
    damping_depth: float = 1e-3
    model: Model = Model.HSWEMED
    matrix: MatrixKind = MatrixKind.REGULARIZED
    wave_speed: WaveSpeed = WaveSpeed.EIGENSOLVE
    path_quadrature: str = "midpoint"
    boundary: Boundary = Boundary.OPEN
    snapshot_times: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        object.__setattr__(self, "matrix", MatrixKind(self.matrix))
        object.__setattr__(self, "wave_speed", WaveSpeed(self.wave_speed))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if not self.end_time > 0:
            raise ValueError("end_time must be positive")
        if (self.dt is None) == (self.cfl is None):
            raise ValueError("give exactly one of dt and cfl")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.cfl is not None and not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if self.path_quadrature not in ("midpoint", "trapezoid"):
            raise ValueError("path_quadrature must be 'midpoint' or 'trapezoid'")
        if self.dry_threshold < 0:
            raise ValueError("dry_threshold must be nonnegative")
        if self.damping_depth < 0:
            raise ValueError("damping_depth must be nonnegative")

    @property
    def outputs(self):
        if self.snapshot_times is None:
            return tuple(np.linspace(0.0, self.end_time, 11))
        return tuple(sorted(set(float(t) for t in self.snapshot_times) | {self.end_time}))


# boundary and positivity fixes

def apply_boundaries(field, policy=Boundary.OPEN):
    """Fill the single ghost layer: zero-gradient copy or periodic wrap."""
    out = np.array(field, dtype=float, copy=True)
    if Boundary(policy) is Boundary.PERIODIC:
        out[0], out[-1] = out[-2], out[1]
    else:
        out[0], out[-1] = out[1], out[-2]
    return out


def wet_dry_fix(field, dry_threshold=DRY_THRESHOLD, damping_depth=0.0, n_moments=None):
    """Clamp h >= 0 and zero the momenta and suspended load of dry cells.

    In cells shallower than ``damping_depth`` the velocity moments are scaled
    by 2h^2 / (h^2 + max(h^2, damping_depth^2)), which keeps q/h and m_i/h
    bounded at a wet/dry front. Depth and suspended load are not changed.
    ``n_moments`` is the number of velocity moments (default: all of columns
    1..-3). The bed (last component) is never touched.
    """
    out = np.array(field, dtype=float, copy=True)
    h = np.maximum(out[:, 0], 0.0)
    out[:, 0] = h
    dry = h < dry_threshold
    out[dry, 1:-1] = 0.0
    if damping_depth > 0:
        shallow = ~dry & (h < damping_depth)
        if shallow.any():
            hs = h[shallow]
            factor = 2.0 * hs * hs / (hs * hs + damping_depth * damping_depth)
            stop = out.shape[1] - 2 if n_moments is None else 2 + n_moments
            out[np.ix_(shallow, np.arange(1, stop))] *= factor[:, None]
    return out


def clamp_concentration(field, system):
    """Clamp c_m to [0, 1] in wet cells; returns the field and the number of clamped cells."""
    out = np.array(field, dtype=float, copy=True)
    h, s = out[:, 0], out[:, system.i_conc]
    wet = h >= system.dry_threshold
    low = wet & (s < 0.0)
    high = wet & (s > h)
    out[low, system.i_conc] = 0.0
    out[high, system.i_conc] = h[high]
    return out, int(np.count_nonzero(low | high))


# spatial operator

def cell_wave_speeds(field, system, config):
    if config.wave_speed is WaveSpeed.BOUND:
        return spectral.wave_speed_bound(system, field)
    if config.matrix is MatrixKind.REGULARIZED:
        return spectral.regularized_wave_speed(system, field)
    return spectral.max_wave_speed(system.transport_matrix(field, MatrixKind.FULL))


def fluctuations(field, system, config, speeds=None):
    """Path-conservative LF fluctuations (D^-, D^+) at the interfaces of ``field``.

    Interface k lies between cells k and k+1 of the (ghosted) field.
    """
    WL, WR = field[:-1], field[1:]
    dW = WR - WL
    F = system.flux(field)
    dF = F[1:] - F[:-1]
    if config.path_quadrature == "midpoint":
        nc = system.nonconservative_product(0.5 * (WL + WR), dW, config.matrix)
    else:
        nc = 0.5 * (system.nonconservative_product(WL, dW, config.matrix)
                    + system.nonconservative_product(WR, dW, config.matrix))
    if speeds is None:
        speeds = cell_wave_speeds(field, system, config)
    a = np.maximum(speeds[:-1], speeds[1:])[:, None]
    half = 0.5 * (dF + nc)
    return half - 0.5 * a * dW, half + 0.5 * a * dW, F, a[:, 0]


@dataclass
class StageBudget:
    """Net boundary flux and integrated source of one evaluation of L."""

    boundary_flux: np.ndarray
    source_integral: np.ndarray


def rhs(field, mesh, config, system, speeds=None):
    """Semi-discrete operator L on the interior cells and its conservation budget."""
    d_minus, d_plus, F, a = fluctuations(field, system, config, speeds)
    src = system.source(field[1:-1]).total
    L = -(d_plus[:-1] + d_minus[1:]) / mesh.dx + src
    # for rows in conservation form the interior jumps telescope to F_n - F_1
    boundary = d_plus[0] + d_minus[-1] + F[-2] - F[1]
    budget = StageBudget(boundary, src.sum(axis=0) * mesh.dx)
    return L, budget, a


def step(field, dt, mesh, config, system):
    """One forward-Euler stage on the interior; ghost cells are copied unchanged."""
    if dt == 0:
        return np.array(field, copy=True)
    L, _, _ = rhs(field, mesh, config, system)
    out = np.array(field, dtype=float, copy=True)
    out[1:-1] = field[1:-1] + dt * L
    return out


def ssprk43_step(u, dt, operator, post=None):
    """Advance ``u`` by one SSPRK(4,3) step of ``u' = operator(u)``.

    ``post`` is applied to every stage (boundary fill, positivity fixes).
    """
    u0 = u
    cur = u
    for w0, w1, c in SSPRK43:
        nxt = w1 * cur + c * dt * operator(cur)
        if w0:
            nxt = nxt + w0 * u0
        cur = post(nxt) if post is not None else nxt
    return cur


# time integration

@dataclass
class LedgerRecord:
    """Integrated conserved quantities over one step.

    ``change`` is the actual change of sum(W) dx; ``transport`` and ``fixes``
    are the parts predicted by boundary fluxes plus sources and by the
    positivity fixes. The residual ``change - transport - fixes`` is round-off.
    """

    time: float
    dt: float
    total: np.ndarray
    change: np.ndarray
    transport: np.ndarray
    fixes: np.ndarray


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    steps: int = 0
    clamp_events: int = 0
    dry_fixes: int = 0
    max_cfl: float = 0.0
    ledger: list = field(default_factory=list)
    aborted: SolverAbort | None = None

    @property
    def final(self):
        return self.snapshots[-1]


def _interior_sum(field, dx):
    return field[1:-1].sum(axis=0) * dx


def _check_finite(field, t):
    bad = ~np.isfinite(field[1:-1]).all(axis=1)
    if bad.any():
        cell = int(np.flatnonzero(bad)[0])
        raise SolverAbort(f"non-finite state in cell {cell} at t = {t:.6g}", time=t, cell=cell,
                          state=field[1 + cell].copy(), field=field.copy())


def ghosted(interior, policy=Boundary.OPEN):
    """Add one ghost cell on each side and fill it."""
    interior = np.asarray(interior, dtype=float)
    out = np.empty((interior.shape[0] + 2, interior.shape[1]))
    out[1:-1] = interior
    return apply_boundaries(out, policy)


def advance(initial, mesh, config, system, ledger=False, callback=None, t0=0.0):
    """Integrate the interior field ``initial`` (shape (n_cells, N+4)) to ``config.end_time``.

    Snapshots (interior arrays) are stored at ``config.outputs``; the step is
    shortened to land on them exactly. ``callback(t, dt, old, new)`` receives
    interior arrays after every step. On a solver failure the trajectory is
    returned with ``aborted`` set and the snapshots written so far.
    """
    traj = Trajectory()
    policy = config.boundary
    u = ghosted(initial, policy)
    u = wet_dry_fix(u, config.dry_threshold, config.damping_depth, system.order)
    u = apply_boundaries(u, policy)
    outputs = [t for t in config.outputs if t >= t0 - 1e-12]
    t = t0
    if outputs and abs(outputs[0] - t) < 1e-12:
        traj.times.append(t)
        traj.snapshots.append(u[1:-1].copy())
        outputs.pop(0)

    state = {"fix": np.zeros(system.size)}

    def post(v):
        v = apply_boundaries(v, policy)
        before = _interior_sum(v, mesh.dx)
        h_neg = np.count_nonzero(v[1:-1, 0] < 0.0)
        v = wet_dry_fix(v, config.dry_threshold, config.damping_depth, system.order)
        v, n_clamped = clamp_concentration(v, system)
        v = apply_boundaries(v, policy)
        traj.clamp_events += n_clamped
        traj.dry_fixes += int(h_neg)
        state["fix"] = _interior_sum(v, mesh.dx) - before
        return v

    try:
        while outputs:
            speeds = cell_wave_speeds(u, system, config)
            a_max = float(np.max(np.maximum(speeds[:-1], speeds[1:])))
            if config.dt is not None:
                dt = config.dt
            else:
                dt = config.cfl * mesh.dx / a_max if a_max > 0 else outputs[-1] - t
            target = outputs[0]
            if t + dt >= target - 1e-12 * max(1.0, abs(target)):
                dt = target - t
            if dt < MIN_DT:
                raise SolverAbort(f"time step {dt:.3e} s below {MIN_DT:g} s at t = {t:.6g}", time=t,
                                  field=u.copy())
            old = u
            # accumulate predicted budgets with the same Shu-Osher combination
            total0 = _interior_sum(u, mesh.dx)
            pred_transport = np.zeros(system.size)
            pred_fix = np.zeros(system.size)
            cur, cur_tr, cur_fix = u, pred_transport, pred_fix
            first = True
            for w0, w1, c in SSPRK43:
                L, budget, a = rhs(cur, mesh, config, system, speeds if first else None)
                first = False
                nxt = w1 * cur + (c * dt) * np.concatenate([L[:1] * 0, L, L[:1] * 0])
                tr = w1 * cur_tr + c * dt * (budget.source_integral - budget.boundary_flux)
                fx = w1 * cur_fix
                if w0:
                    nxt = nxt + w0 * u
                    tr = tr + w0 * pred_transport
                    fx = fx + w0 * pred_fix
                nxt = post(nxt)
                _check_finite(nxt, t)
                cur, cur_tr, cur_fix = nxt, tr, fx + state["fix"]
                traj.max_cfl = max(traj.max_cfl, float(a.max()) * dt / mesh.dx)
            u = cur
            t = target if dt == target - t else t + dt
            traj.steps += 1
            if ledger:
                total1 = _interior_sum(u, mesh.dx)
                traj.ledger.append(LedgerRecord(t, dt, total0, total1 - total0, cur_tr, cur_fix))
            if callback is not None:
                callback(t - dt, dt, old[1:-1], u[1:-1])
            if abs(t - outputs[0]) <= 1e-12 * max(1.0, abs(outputs[0])):
                t = outputs.pop(0)
                traj.times.append(t)
                traj.snapshots.append(u[1:-1].copy())
    except SolverAbort as exc:
        traj.aborted = exc
    return traj
