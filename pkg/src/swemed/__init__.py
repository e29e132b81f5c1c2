"""Shallow-water moment equations with erosion and deposition (1D).

Modules: ``basis`` (Legendre coupling tables), ``sediment`` (closures),
``system`` (state, transport matrices, sources), ``spectral`` (eigenvalues,
characteristic polynomial, hyperbolicity sweeps), ``solver`` (path-conservative
Lax-Friedrichs with SSPRK(4,3)), ``diagnostics`` (energy, ledgers, profiles),
``scenarios`` (dam-break setups, config files, run output).
"""

from .basis import BasisTables, build_tables, phi
from .scenarios import Scenario, builtin, compare, load_config, run
from .sediment import MATERIALS, PVC, SAND, SedimentParams
from .solver import Mesh, SolverAbort, SolverConfig, advance
from .system import MatrixKind, Model, MomentSystem

__all__ = [
    "BasisTables", "build_tables", "phi",
    "Scenario", "builtin", "compare", "load_config", "run",
    "MATERIALS", "PVC", "SAND", "SedimentParams",
    "Mesh", "SolverAbort", "SolverConfig", "advance",
    "MatrixKind", "Model", "MomentSystem",
]
