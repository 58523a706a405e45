"""Sturm-Liouville eigenvalues by piecewise coefficient approximation."""

from .basis import Segment, constant_transfer, extended_basis, model_transfer
from .exceptions import MissedRootSuspected, PoleError, ScanExhausted, SolverError
from .fitting import build_slope_table, fit_segments, lookup_z
from .mesh import Mesh, adaptive_mesh, segment_penalty, uniform_mesh
from .potentials import builtin, from_table
from .solver import (
    DIRICHLET,
    BoundaryConditions,
    EigenResult,
    Problem,
    SolverConfig,
    characteristic,
    find_eigenvalues,
    oracle_eigenvalues,
    system_matrix,
)
from .special_fn import phase_c, phase_s

__version__ = "0.1.0"
