"""Attainable regions of mass-action reaction networks.

Networks and their polynomial dynamics, closed-form linear solutions, RK4
trajectories, trajectory hulls with forward-closure experiments, and sign
grids of bordered face matrices.
"""

from .closure import ClosureParams, ClosureReport, closure_experiment, forward_closure_trial
from .errors import AttainableError, ParseError
from .faces import face_matrix, face_size, render_sign_grid, sign_grid_pairs, sign_grid_triples
from .generate import random_linear_network, random_network
from .hull import build_hull, contains, make_chart, sample_interior
from .integrate import IntegratorConfig, Trajectory, integrate, thin_trajectory
from .linear import monomial_factorization, solve_linear, steady_state
from .network import (
    ReactionNetwork,
    build_laplacian,
    build_vector_field,
    check_mass_action_admissible,
    linkage_and_reversibility,
    realize_field,
    stoichiometry_subspace,
)
from .polynomial import Polynomial, PolynomialVectorField, parse_polynomial

__version__ = "0.1.0"

__all__ = [
    "AttainableError",
    "ClosureParams",
    "ClosureReport",
    "IntegratorConfig",
    "ParseError",
    "Polynomial",
    "PolynomialVectorField",
    "ReactionNetwork",
    "Trajectory",
    "build_hull",
    "build_laplacian",
    "build_vector_field",
    "check_mass_action_admissible",
    "closure_experiment",
    "contains",
    "face_matrix",
    "face_size",
    "forward_closure_trial",
    "integrate",
    "linkage_and_reversibility",
    "make_chart",
    "monomial_factorization",
    "parse_polynomial",
    "random_linear_network",
    "random_network",
    "realize_field",
    "render_sign_grid",
    "sample_interior",
    "sign_grid_pairs",
    "sign_grid_triples",
    "solve_linear",
    "steady_state",
    "stoichiometry_subspace",
    "thin_trajectory",
]
