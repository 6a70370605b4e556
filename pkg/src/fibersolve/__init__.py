"""Exact solvers over lattice fibers.

Computes truncated Markov bases and Groebner bases of integer lattices by
project-and-lift and Buchberger-style completion, and uses them to decide
feasibility and solve integer programs by group relaxations.  All arithmetic
is exact (arbitrary-precision integers and rationals).
"""

from .intlinalg import IntMatrix, hnf, kernel_lattice, lattice_member, particular_solution, select_pivot_columns
from .core import FiberProblem, Lattice, LatticeVector, Projection, TermOrder, direct
from .ratlp import cost_compatible, dual_cone_witness, is_bounded_coordinate, saturating_vector, span_feasible
from .engine import TruncationOracle, complete, minimal_markov, normal_form, reduce_basis
from .drivers import (BoundedReformulation, MinimizeResult, bounded_reformulation,
                      eliminate_cost_components, feasible_point, feasible_points,
                      markov_basis, minimize, minimize_by_increment)
from .bridge import (IntegerInfeasible, IpInstance, NotRewritable, extend_solution,
                     fiber_to_ip, ip_to_fiber)

__all__ = [
    "IntMatrix",
    "hnf",
    "kernel_lattice",
    "lattice_member",
    "particular_solution",
    "select_pivot_columns",
    "FiberProblem",
    "Lattice",
    "LatticeVector",
    "Projection",
    "TermOrder",
    "direct",
    "cost_compatible",
    "dual_cone_witness",
    "is_bounded_coordinate",
    "saturating_vector",
    "span_feasible",
    "TruncationOracle",
    "complete",
    "minimal_markov",
    "normal_form",
    "reduce_basis",
    "BoundedReformulation",
    "MinimizeResult",
    "bounded_reformulation",
    "eliminate_cost_components",
    "feasible_point",
    "feasible_points",
    "markov_basis",
    "minimize",
    "minimize_by_increment",
    "IntegerInfeasible",
    "IpInstance",
    "NotRewritable",
    "extend_solution",
    "fiber_to_ip",
    "ip_to_fiber",
]

__version__ = "0.1.0"
