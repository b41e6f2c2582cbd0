"""Open XXX spin chain with upper-triangular boundaries: operators, Bethe vectors and numerical checks."""
from .bethe import BetheState, BetheVector, SolverConfig, build_bethe_vector, enumerate_index_sets, solve_bethe, \
    verify_eigenpair
from .errors import (FormMismatchError, InputError, NotTriangularizableError, NumericalError, OpenChainError,
                     PoleError, SingularityError, SizeError, ZeroVectorError)
from .kernels import GeneralBoundary, IndexSet, ModelParams, TriangularBoundary, eigenvalue_Lambda
from .lattice import (TransferFamily, build_double_row, build_hamiltonian, build_K, build_monodromy, build_R,
                      build_transfer, reference_state)
from .reports import CheckReport
from .triangular import constraint_value, triangularize

__version__ = "0.1.0"
