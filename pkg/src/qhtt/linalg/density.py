"""Partial traces and the quantities derived from them."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..errors import NeedsInstantiation, TargetError
from .symvec import SymVector


def _concrete(s, params):
    if isinstance(s, SymVector):
        if params is None and s.is_symbolic:
            raise NeedsInstantiation("reduced density of a symbolic state needs parameter values")
        return s.instantiate(params or {})
    return np.asarray(s, dtype=np.complex128)


def reduced_density(s, subset: Sequence[int], params: Mapping | None = None) -> np.ndarray:
    """Density matrix of ``subset`` after tracing out every other register."""
    v = _concrete(s, params)
    n = v.shape[0].bit_length() - 1
    subset = list(subset)
    if len(set(subset)) != len(subset) or any(r < 0 or r >= n for r in subset):
        raise TargetError(f"bad register subset {subset}")
    rest = [r for r in range(n) if r not in subset]
    m = np.transpose(v.reshape((2,) * n), subset + rest).reshape(2 ** len(subset), -1)
    return m @ m.conj().T


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def outcome_probabilities(s, subset: Sequence[int], params: Mapping | None = None) -> np.ndarray:
    return np.real(np.diag(reduced_density(s, subset, params)))


def schmidt_rank(v: np.ndarray, part: Sequence[int], tol=1e-7) -> int:
    """Number of Schmidt coefficients above ``tol`` across ``part | rest``."""
    v = np.asarray(v, dtype=np.complex128)
    n = v.shape[0].bit_length() - 1
    part = list(part)
    if not part or len(part) == n:
        return 1 if np.linalg.norm(v) > tol else 0
    rest = [r for r in range(n) if r not in part]
    m = np.transpose(v.reshape((2,) * n), part + rest).reshape(2 ** len(part), -1)
    return int(np.sum(np.linalg.svd(m, compute_uv=False) > tol))
