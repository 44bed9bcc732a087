"""Exact multi-soliton solutions of the focusing NLS equation on the half-line.

Solutions are built by dressing the zero seed with paired Darboux
transformations that preserve a Dirichlet, Robin or new integrable boundary
condition at ``x = 0``.
"""

from .boundary import (
    Dirichlet,
    MirrorPair,
    New,
    Robin,
    boundary_matrix,
    boundary_residual,
    build_boundary_chain,
    dressed_boundary_matrix_check,
    make_boundary,
    mirror_datum,
)
from .core import SolitonParameters, lax_U, lax_V, one_soliton, vacuum_solution
from .darboux import DressingChain, SpectralDatum, dressed_u, dressing_matrix, evaluate_chain
from .errors import DomainError
from .scattering import ScatteringData, add_pole, mirror_relations, pure_soliton_data
from .verification import Grid, ResidualReport, full_report, pde_residual_sweep

__version__ = "0.1.0"
