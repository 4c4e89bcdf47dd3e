"""Exact counting of sublattices of bounded determinant, with the matching
asymptotic constants and brute-force identity checks."""
from ._config import CapacityError
from .exact import RankError, hnf, snf, saturate, integer_kernel, det_squared
from .lattice import (
    Lattice,
    MinimaProfile,
    Sublattice,
    diagonal_lattice,
    identity_lattice,
    lattice_from_spec,
    lll_reduce,
    minima_filtration,
    orthogonal,
    polar,
    project_quotient,
    random_lattice,
    shortest_vector,
    successive_minima,
)
from .counting import (
    CountResult,
    FlagCount,
    HeightBudget,
    count_affine_ball,
    count_all,
    count_avoiding,
    count_flags,
    count_primitive,
    duality_count,
    enumerate_primitive,
    split_p1_p2,
)
from .arithmetic import HeckeRep, hecke_count, hecke_dirichlet, hecke_reps, sigma_d
from .asymptotics import (
    AsymptoticModel,
    FlagModel,
    a_const,
    b_exp,
    ball_volume,
    c_const,
    epsilon_min,
    predict_flag_main,
    predict_leading_error,
    predict_P,
    zeta,
)
from .harness import SweepConfig, SweepReport, emit, run_sweep, verify

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "RankError",
    "hnf",
    "snf",
    "saturate",
    "integer_kernel",
    "det_squared",
    "Lattice",
    "MinimaProfile",
    "Sublattice",
    "diagonal_lattice",
    "identity_lattice",
    "lattice_from_spec",
    "lll_reduce",
    "minima_filtration",
    "orthogonal",
    "polar",
    "project_quotient",
    "random_lattice",
    "shortest_vector",
    "successive_minima",
    "CountResult",
    "FlagCount",
    "HeightBudget",
    "count_affine_ball",
    "count_all",
    "count_avoiding",
    "count_flags",
    "count_primitive",
    "duality_count",
    "enumerate_primitive",
    "split_p1_p2",
    "HeckeRep",
    "hecke_count",
    "hecke_dirichlet",
    "hecke_reps",
    "sigma_d",
    "AsymptoticModel",
    "FlagModel",
    "a_const",
    "b_exp",
    "ball_volume",
    "c_const",
    "epsilon_min",
    "predict_flag_main",
    "predict_leading_error",
    "predict_P",
    "zeta",
    "SweepConfig",
    "SweepReport",
    "emit",
    "run_sweep",
    "verify",
]
