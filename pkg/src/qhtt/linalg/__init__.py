from .density import outcome_probabilities, purity, reduced_density, schmidt_rank
from .gates import GATES, Gate
from .kernels import BACKEND
from .subspace import (
    Subspace,
    apply_to_subspace,
    embed,
    equal,
    includes,
    intersect,
    span,
    sum_,
    tensor_subspaces,
)
from .symvec import (
    DEFAULT_MAX_REGISTERS,
    Amp,
    SymVector,
    apply_gate,
    apply_map,
    permute,
    project_registers,
    tensor,
)

__all__ = [
    "Amp",
    "BACKEND",
    "DEFAULT_MAX_REGISTERS",
    "GATES",
    "Gate",
    "Subspace",
    "SymVector",
    "apply_gate",
    "apply_map",
    "apply_to_subspace",
    "embed",
    "equal",
    "includes",
    "intersect",
    "outcome_probabilities",
    "permute",
    "project_registers",
    "purity",
    "reduced_density",
    "schmidt_rank",
    "span",
    "sum_",
    "tensor",
    "tensor_subspaces",
]
