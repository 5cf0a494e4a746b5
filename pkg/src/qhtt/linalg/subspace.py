"""Closed subspaces of a 2**n dimensional space, as orthonormal column bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DimError
from .gates import Gate
from .symvec import SymVector, apply_gate

RANK_TOL = 1e-9  # construction
INCLUDE_TOL = 1e-7  # comparison


@dataclass(frozen=True, eq=False)
class Subspace:
    dim: int
    basis: np.ndarray  # dim x rank, orthonormal columns

    @property
    def rank(self):
        return self.basis.shape[1]

    @property
    def n_qubits(self):
        return self.dim.bit_length() - 1

    @classmethod
    def top(cls, dim):
        return cls(dim, np.eye(dim, dtype=np.complex128))

    @classmethod
    def bottom(cls, dim):
        return cls(dim, np.zeros((dim, 0), dtype=np.complex128))

    def projector(self):
        return self.basis @ self.basis.conj().T

    def residual(self, v: np.ndarray) -> float:
        """Distance from ``v`` to the subspace."""
        v = np.asarray(v, dtype=np.complex128)
        return float(np.linalg.norm(v - self.basis @ (self.basis.conj().T @ v)))

    def contains(self, v, tol=INCLUDE_TOL) -> bool:
        return self.residual(v) <= tol

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={self.rank})"


def orthonormalize(cols: np.ndarray, tol=RANK_TOL) -> np.ndarray:
    cols = np.asarray(cols, dtype=np.complex128)
    if cols.ndim == 1:
        cols = cols[:, None]
    if cols.shape[1] == 0:
        return cols
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    return u[:, s > tol]


def span(vectors: Sequence, params=None, tol=RANK_TOL) -> Subspace:
    """Smallest subspace containing ``vectors`` (instantiated at ``params``)."""
    cols = []
    for v in vectors:
        if isinstance(v, SymVector):
            v = v.instantiate(params or {})
        cols.append(np.asarray(v, dtype=np.complex128))
    if not cols:
        raise DimError("span of no vectors needs an ambient dimension; use Subspace.bottom")
    dims = {len(c) for c in cols}
    if len(dims) != 1:
        raise DimError(f"span over mixed dimensions {sorted(dims)}")
    return Subspace(cols[0].shape[0], orthonormalize(np.stack(cols, axis=1), tol))


def _same_dim(p, q):
    if p.dim != q.dim:
        raise DimError(f"subspaces of dimension {p.dim} and {q.dim}")


def sum_(p: Subspace, q: Subspace) -> Subspace:
    _same_dim(p, q)
    return Subspace(p.dim, orthonormalize(np.concatenate([p.basis, q.basis], axis=1)))


def intersect(p: Subspace, q: Subspace) -> Subspace:
    """Solve ``P x = Q y`` through the null space of ``[P, -Q]``."""
    _same_dim(p, q)
    if p.rank == 0 or q.rank == 0:
        return Subspace.bottom(p.dim)
    stacked = np.concatenate([p.basis, -q.basis], axis=1)
    _, s, vh = np.linalg.svd(stacked)
    s_full = np.zeros(stacked.shape[1])
    s_full[: len(s)] = s
    null = vh.conj().T[:, s_full <= RANK_TOL]
    if null.shape[1] == 0:
        return Subspace.bottom(p.dim)
    return Subspace(p.dim, orthonormalize(p.basis @ null[: p.rank]))


def includes(p: Subspace, q: Subspace, tol=INCLUDE_TOL) -> bool:
    """True iff ``p`` is contained in ``q``."""
    _same_dim(p, q)
    if p.rank == 0:
        return True
    res = p.basis - q.basis @ (q.basis.conj().T @ p.basis)
    return bool(np.all(np.linalg.norm(res, axis=0) <= tol))


def equal(p: Subspace, q: Subspace, tol=INCLUDE_TOL) -> bool:
    return p.rank == q.rank and includes(p, q, tol) and includes(q, p, tol)


def apply_to_subspace(g: Gate | np.ndarray, targets: Sequence[int], p: Subspace, controls=()) -> Subspace:
    if p.rank == 0:
        return p
    out = apply_gate(g, targets, SymVector(p.basis, [()] * p.rank), controls)
    return Subspace(p.dim, out.coeffs)


def tensor_subspaces(p: Subspace, q: Subspace) -> Subspace:
    return Subspace(p.dim * q.dim, np.kron(p.basis, q.basis))


def embed(local: Subspace, regs: Sequence[int], n: int) -> Subspace:
    """``local`` on registers ``regs`` tensored with the full space elsewhere."""
    k = len(regs)
    if local.dim != 2**k:
        raise DimError(f"subspace of dimension {local.dim} placed on {k} registers")
    rest = [r for r in range(n) if r not in regs]
    full = np.kron(local.basis, np.eye(2 ** len(rest), dtype=np.complex128))
    # registers currently ordered regs + rest; move them to 0..n-1
    order = list(regs) + rest
    inv = [order.index(r) for r in range(n)]
    cols = full.shape[1]
    t = full.reshape((2,) * n + (cols,))
    t = np.transpose(t, inv + [n]).reshape(2**n, cols)
    return Subspace(2**n, t)
