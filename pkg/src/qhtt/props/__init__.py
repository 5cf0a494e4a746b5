from .expr import BIT_FUNCTIONS, EvalEnv, eval_bit, eval_state, eval_vector
from .layout import GHOST, QUBIT, UGHOST, RegisterLayout
from .sampling import DEFAULT_SAMPLES, DEFAULT_SEED, sample_points, seed_from_env
from .semantics import (
    EXACT,
    SAMPLED,
    StatePred,
    StateView,
    Verdict,
    coefficient_match,
    denote_subspace,
    desugar,
    entails,
    is_subspace_expressible,
    prop_parameters,
    satisfies,
)

__all__ = [
    "BIT_FUNCTIONS", "DEFAULT_SAMPLES", "DEFAULT_SEED", "EXACT", "GHOST", "QUBIT", "SAMPLED", "UGHOST",
    "EvalEnv", "RegisterLayout", "StatePred", "StateView", "Verdict", "coefficient_match",
    "denote_subspace", "desugar", "entails", "eval_bit", "eval_state", "eval_vector",
    "is_subspace_expressible", "prop_parameters", "sample_points", "satisfies", "seed_from_env",
]
