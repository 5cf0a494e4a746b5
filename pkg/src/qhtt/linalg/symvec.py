"""State vectors whose amplitudes are linear in symbolic parameters.

A :class:`SymVector` stores one coefficient column per monomial.  Monomials
are sorted tuples of parameter names; the empty tuple is the constant term.
Gates act column-wise, so every operation the language can perform keeps the
representation closed.  Tensoring two symbolic vectors multiplies monomials.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import CapacityError, DimError, NeedsInstantiation, TargetError
from . import kernels
from .gates import Gate

DEFAULT_MAX_REGISTERS = 12
AMP_TOL = 1e-9

Monomial = tuple


class Amp:
    """Formal linear combination ``c0 + sum(ci * mi)`` over monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, complex] | None = None):
        self.terms = {m: complex(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def param(cls, name):
        return cls({(name,): 1})

    def __add__(self, other):
        other = other if isinstance(other, Amp) else Amp.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Amp(out)

    __radd__ = __add__

    def __neg__(self):
        return Amp({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Amp) else -complex(other))

    def __mul__(self, other):
        if isinstance(other, Amp):
            out: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(sorted(m1 + m2))
                    out[m] = out.get(m, 0) + c1 * c2
            return Amp(out)
        return Amp({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def equals(self, other, tol=AMP_TOL):
        other = other if isinstance(other, Amp) else Amp.const(other)
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol for k in keys)

    def __eq__(self, other):
        if isinstance(other, (Amp, int, float, complex)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        return sum((c * monomial_value(m, values) for m, c in self.terms.items()), 0j)

    @property
    def is_constant(self):
        return all(m == () for m in self.terms)

    def __repr__(self):
        if not self.terms:
            return "Amp(0)"
        parts = [f"{c:.4g}" if m == () else f"{c:.4g}*{'*'.join(m)}" for m, c in sorted(self.terms.items())]
        return "Amp(" + " + ".join(parts) + ")"


def monomial_value(m: Monomial, values: Mapping[str, complex]) -> complex:
    v = 1 + 0j
    for p in m:
        try:
            v *= values[p]
        except KeyError:
            raise NeedsInstantiation(f"no value for symbolic parameter {p}") from None
    return v


class SymVector:
    __slots__ = ("coeffs", "monomials")

    def __init__(self, coeffs, monomials: Sequence[Monomial] = ((),)):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        if coeffs.shape[1] != len(monomials):
            raise DimError("coefficient columns do not match monomials")
        dim = coeffs.shape[0]
        if dim & (dim - 1) or dim == 0:
            raise DimError(f"dimension {dim} is not a power of two")
        self.coeffs = np.ascontiguousarray(coeffs)
        self.monomials = tuple(tuple(m) for m in monomials)

    # construction

    @classmethod
    def scalar_one(cls):
        return cls(np.ones((1, 1)))

    @classmethod
    def basis(cls, bits: str | Sequence[int]):
        bits = "".join(str(b) for b in bits)
        v = np.zeros(2 ** len(bits), dtype=np.complex128)
        v[int(bits, 2) if bits else 0] = 1
        return cls(v)

    @classmethod
    def constant(cls, vec):
        return cls(np.asarray(vec, dtype=np.complex128))

    @classmethod
    def symbolic(cls, name: str, dim: int):
        """Generic vector whose i-th amplitude is the parameter ``name[i]``."""
        return cls(np.eye(dim, dtype=np.complex128), [(param_name(name, i),) for i in range(dim)])

    @classmethod
    def from_amps(cls, amps: Sequence[Amp]):
        monos = sorted({m for a in amps for m in a.terms} | {()})
        col = {m: j for j, m in enumerate(monos)}
        c = np.zeros((len(amps), len(monos)), dtype=np.complex128)
        for i, a in enumerate(amps):
            for m, v in a.terms.items():
                c[i, col[m]] = v
        return cls(c, monos).canonical()

    # properties

    @property
    def dim(self):
        return self.coeffs.shape[0]

    @property
    def n_qubits(self):
        return self.dim.bit_length() - 1

    @property
    def is_symbolic(self):
        return any(m != () for m, col in zip(self.monomials, self.coeffs.T) if np.any(col != 0))

    @property
    def parameters(self) -> set:
        return {p for m in self.monomials for p in m}

    @property
    def entries(self) -> list[Amp]:
        return [Amp({m: self.coeffs[i, j] for j, m in enumerate(self.monomials)}) for i in range(self.dim)]

    def copy(self):
        return SymVector(self.coeffs.copy(), self.monomials)

    def canonical(self):
        """Merge duplicate monomials, drop zero columns, sort columns."""
        acc: dict = {}
        for j, m in enumerate(self.monomials):
            acc[m] = acc[m] + self.coeffs[:, j] if m in acc else self.coeffs[:, j].copy()
        keep = sorted(m for m, col in acc.items() if m == () or np.any(col != 0))
        if () not in keep:
            keep.insert(0, ())
        cols = [acc.get(m, np.zeros(self.dim, dtype=np.complex128)) for m in keep]
        return SymVector(np.stack(cols, axis=1), keep)

    # arithmetic

    def instantiate(self, values: Mapping[str, complex]) -> np.ndarray:
        mv = np.array([monomial_value(m, values) for m in self.monomials], dtype=np.complex128)
        return self.coeffs @ mv

    def concrete(self) -> np.ndarray:
        if self.is_symbolic:
            raise NeedsInstantiation("vector still depends on symbolic parameters")
        return self.instantiate({})

    def scale(self, c):
        return SymVector(self.coeffs * c, self.monomials)

    def scale_amp(self, a: Amp):
        out = SymVector(np.zeros((self.dim, 1)), [()])
        for m, c in a.terms.items():
            monos = [tuple(sorted(m + mm)) for mm in self.monomials]
            out = out.add(SymVector(self.coeffs * c, monos))
        return out

    def add(self, other: "SymVector"):
        if other.dim != self.dim:
            raise DimError(f"cannot add vectors of dimension {self.dim} and {other.dim}")
        return SymVector(np.concatenate([self.coeffs, other.coeffs], axis=1), self.monomials + other.monomials).canonical()

    def equals(self, other: "SymVector", tol=AMP_TOL):
        if other.dim != self.dim:
            return False
        diff = self.add(other.scale(-1))
        return bool(np.all(np.abs(diff.coeffs) <= tol))

    def __repr__(self):
        return f"SymVector(dim={self.dim}, monomials={len(self.monomials)})"


def param_name(vec: str, i: int) -> str:
    return f"{vec}[{i}]"


def _check_cap(n, cap):
    cap = DEFAULT_MAX_REGISTERS if cap is None else cap
    if n > cap:
        raise CapacityError(f"state would need {n} registers (cap is {cap})")


def tensor(u: SymVector, v: SymVector, cap: int | None = None) -> SymVector:
    """Kronecker product; bilinear in the amplitudes."""
    _check_cap(u.n_qubits + v.n_qubits, cap)
    cols, monos = [], []
    for i, mu in enumerate(u.monomials):
        for j, mv in enumerate(v.monomials):
            cols.append(np.kron(u.coeffs[:, i], v.coeffs[:, j]))
            monos.append(tuple(sorted(mu + mv)))
    return SymVector(np.stack(cols, axis=1), monos).canonical()


def _bit(n, reg):
    return n - 1 - reg


def apply_gate(g: Gate | np.ndarray, targets: Sequence[int], s: SymVector, controls: Iterable[tuple[int, int]] = ()) -> SymVector:
    """Apply ``g`` to ``targets`` (padded with identity elsewhere).

    ``controls`` is a list of ``(register, value)`` pairs; the gate only acts
    on the part of the state where each control register holds ``value``.
    """
    u = g.matrix if isinstance(g, Gate) else np.asarray(g, dtype=np.complex128)
    targets = list(targets)
    arity = 1 if u.shape[0] == 2 else 2
    n = s.n_qubits
    if len(targets) != arity:
        raise TargetError(f"gate of arity {arity} applied to {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise TargetError(f"duplicate gate targets {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise TargetError(f"target out of range for {n} registers")
    mask = val = 0
    for reg, bit in controls:
        if reg in targets:
            raise TargetError("control register coincides with a target")
        mask |= 1 << _bit(n, reg)
        val |= (bit & 1) << _bit(n, reg)
    out = s.coeffs.copy()
    if arity == 1:
        kernels.apply_1q(out, u, _bit(n, targets[0]), mask, val)
    else:
        kernels.apply_2q(out, u, _bit(n, targets[0]), _bit(n, targets[1]), mask, val)
    return SymVector(out, s.monomials)


def apply_map(s: SymVector, m: np.ndarray, in_regs: Sequence[int], n_out: int, cap: int | None = None) -> SymVector:
    """Contract the linear map ``m`` (``2**n_out x 2**len(in_regs)``) into ``s``.

    The result orders its registers as the ``n_out`` output registers first,
    followed by the untouched registers in their original order.
    """
    n = s.n_qubits
    in_regs = list(in_regs)
    if m.shape != (2**n_out, 2 ** len(in_regs)):
        raise DimError(f"map shape {m.shape} does not fit {len(in_regs)} -> {n_out} registers")
    rest = [r for r in range(n) if r not in in_regs]
    _check_cap(n_out + len(rest), cap)
    k = s.coeffs.shape[1]
    t = s.coeffs.reshape((2,) * n + (k,))
    t = np.transpose(t, in_regs + rest + [n]).reshape(2 ** len(in_regs), -1)
    out = (m @ t).reshape(2 ** (n_out + len(rest)), k)
    return SymVector(out, s.monomials)


def permute(s: SymVector, order: Sequence[int]) -> SymVector:
    """Reorder registers: new register ``i`` is old register ``order[i]``."""
    n = s.n_qubits
    k = s.coeffs.shape[1]
    t = s.coeffs.reshape((2,) * n + (k,))
    t = np.transpose(t, list(order) + [n])
    return SymVector(t.reshape(s.dim, k), s.monomials)


def project_registers(s: SymVector, values: Mapping[int, int]) -> SymVector:
    """Keep the branch where each register in ``values`` holds that bit and drop those registers."""
    n = s.n_qubits
    k = s.coeffs.shape[1]
    t = s.coeffs.reshape((2,) * n + (k,))
    index = tuple(values.get(r, slice(None)) for r in range(n)) + (slice(None),)
    t = t[index]
    return SymVector(np.ascontiguousarray(t).reshape(-1, k), s.monomials)
