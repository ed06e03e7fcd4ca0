"""Closest stable and unstable non-negative and Metzler matrices in the Frobenius norm."""
from ._engine import (DestabResult, SolverOptions, StabilizeResult,
                      StationarityCertificate, TraceStep)
from ._validation import ConvergenceError, PreconditionError
from .estimators import NearestStableMatrix, NearestUnstableMatrix
from .hurwitz import (HurwitzResult, closest_hurwitz_unstable,
                      hurwitz_stabilize, verify_hurwitz_stationary)
from .partitions import (OrderedPartition, enumerate_local_minima,
                         lower_dominant_example, partition_local_minimum)
from .schur import (closest_unstable, inner_relax, optimize_cyclic_weights,
                    positive_candidate, stabilize, verify_stationary)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DestabResult", "HurwitzResult", "NearestStableMatrix",
    "NearestUnstableMatrix", "OrderedPartition", "PreconditionError", "SolverOptions",
    "StabilizeResult", "StationarityCertificate", "TraceStep", "closest_hurwitz_unstable",
    "closest_unstable", "enumerate_local_minima", "hurwitz_stabilize", "inner_relax",
    "lower_dominant_example", "optimize_cyclic_weights", "partition_local_minimum",
    "positive_candidate", "stabilize", "verify_hurwitz_stationary", "verify_stationary",
]
