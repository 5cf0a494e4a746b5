"""Evaluation of bit and state expressions appearing in propositions."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from ..errors import QTypeError, Unsupported
from ..linalg import GATES, SymVector, apply_gate, tensor
from ..surface import ast as A
from ..surface.parser import amp_arity

_S = 1 / np.sqrt(2)

# the four one-bit functions, as (f(0), f(1))
BIT_FUNCTIONS = {"const0": (0, 0), "const1": (1, 1), "id": (0, 1), "not": (1, 0)}


BUILTIN_VECTORS = {
    "beta00": SymVector.constant([_S, 0, 0, _S]),
    "beta01": SymVector.constant([0, _S, _S, 0]),
    "beta10": SymVector.constant([_S, 0, 0, -_S]),
    "beta11": SymVector.constant([0, _S, -_S, 0]),
}


@dataclass
class EvalEnv:
    bits: Mapping[str, int] = field(default_factory=dict)
    funcs: Mapping[str, tuple] = field(default_factory=dict)
    vectors: Mapping[str, SymVector] = field(default_factory=dict)
    gates: Mapping = field(default_factory=lambda: GATES)
    free_vectors: bool = True  # unbound names become generic symbolic vectors
    cap: int | None = None

    def extend(self, bits=None, funcs=None, vectors=None, **kw) -> "EvalEnv":
        """Copy with extra bindings merged in (``kw`` replaces fields)."""
        return replace(
            self,
            bits={**self.bits, **(bits or {})},
            funcs={**self.funcs, **(funcs or {})},
            vectors={**self.vectors, **(vectors or {})},
            **kw,
        )


def eval_bit(b, env: EvalEnv) -> int:
    if isinstance(b, A.BConst):
        return b.value
    if isinstance(b, A.BVar):
        if b.name not in env.bits:
            raise QTypeError(f"no value for bit {b.name}", b.span)
        return env.bits[b.name] & 1
    if isinstance(b, A.BApp):
        if b.fn not in env.funcs:
            raise QTypeError(f"unknown classical function {b.fn}", b.span)
        return env.funcs[b.fn][eval_bit(b.arg, env)]
    if isinstance(b, A.BXor):
        return eval_bit(b.left, env) ^ eval_bit(b.right, env)
    raise TypeError(f"not a bit expression: {b!r}")


def state_arity(e, env: EvalEnv):
    if isinstance(e, A.VecName):
        v = env.vectors.get(e.name, BUILTIN_VECTORS.get(e.name))
        return None if v is None else v.n_qubits
    if isinstance(e, (A.AddE, A.SubE)):
        a = state_arity(e.left, env)
        return a if a is not None else state_arity(e.right, env)
    if isinstance(e, A.MulE):
        a = amp_arity(e.left)
        return state_arity(e.right if a == "scalar" else e.left, env)
    if isinstance(e, (A.DivE,)):
        return state_arity(e.left, env)
    if isinstance(e, A.NegE):
        return state_arity(e.arg, env)
    if isinstance(e, A.TensorE):
        a, b = state_arity(e.left, env), state_arity(e.right, env)
        return None if a is None or b is None else a + b
    a = amp_arity(e)
    return None if a == "scalar" else a


def _is_scalar(x):
    return not isinstance(x, SymVector)


def eval_state(e, env: EvalEnv, nq: int | None = None):
    """Evaluate ``e`` to a :class:`SymVector` (or a complex scalar).

    ``nq`` is the expected qubit count; it fixes the dimension of otherwise
    unconstrained vector names.
    """
    if isinstance(e, A.KetE):
        return SymVector.basis([eval_bit(b, env) for b in e.bits])
    if isinstance(e, A.KetSym):
        return SymVector.constant([_S, _S if e.symbol == "+" else -_S])
    if isinstance(e, A.NumE):
        return complex(float(e.text))
    if isinstance(e, A.ImagE):
        return 1j
    if isinstance(e, A.SqrtE):
        x = eval_state(e.arg, env)
        if not _is_scalar(x):
            raise QTypeError("sqrt of a state", e.span)
        return cmath.sqrt(x)
    if isinstance(e, A.VecName):
        v = env.vectors.get(e.name, BUILTIN_VECTORS.get(e.name))
        if v is not None:
            if nq is not None and v.n_qubits != nq:
                raise QTypeError(f"{e.name} has {v.n_qubits} qubits, expected {nq}", e.span)
            return v
        if not env.free_vectors:
            raise QTypeError(f"unbound vector {e.name}", e.span)
        if nq is None:
            raise Unsupported(f"cannot infer the dimension of {e.name}", e.span)
        return SymVector.symbolic(e.name, 2**nq)
    if isinstance(e, (A.AddE, A.SubE)):
        hint = nq if nq is not None else state_arity(e, env)
        left, right = eval_state(e.left, env, hint), eval_state(e.right, env, hint)
        if isinstance(e, A.SubE):
            right = -right if _is_scalar(right) else right.scale(-1)
        if _is_scalar(left) and _is_scalar(right):
            return left + right
        if _is_scalar(left) or _is_scalar(right):
            raise QTypeError("adding a scalar to a state", e.span)
        return left.add(right)
    if isinstance(e, A.MulE):
        left = eval_state(e.left, env, None if amp_arity(e.left) == "scalar" else nq)
        right = eval_state(e.right, env, nq if _is_scalar(left) else None)
        if _is_scalar(left) and _is_scalar(right):
            return left * right
        if _is_scalar(left):
            return right.scale(left)
        if _is_scalar(right):
            return left.scale(right)
        raise QTypeError("product of two states", e.span)
    if isinstance(e, A.DivE):
        left, right = eval_state(e.left, env, nq), eval_state(e.right, env)
        if not _is_scalar(right):
            raise QTypeError("division by a state", e.span)
        return left / right if _is_scalar(left) else left.scale(1 / right)
    if isinstance(e, A.NegE):
        x = eval_state(e.arg, env, nq)
        return -x if _is_scalar(x) else x.scale(-1)
    if isinstance(e, A.TensorE):
        la, ra = state_arity(e.left, env), state_arity(e.right, env)
        if la is None and ra is not None and nq is not None:
            la = nq - ra
        if ra is None and la is not None and nq is not None:
            ra = nq - la
        left, right = eval_state(e.left, env, la), eval_state(e.right, env, ra)
        if _is_scalar(left) or _is_scalar(right):
            raise QTypeError("tensor product with a scalar", e.span)
        return tensor(left, right, env.cap)
    if isinstance(e, A.GateAppE):
        g = env.gates[e.gate]
        arity = 1 if g.matrix.shape[0] == 2 else 2
        x = eval_state(e.arg, env, arity)
        if _is_scalar(x) or x.n_qubits != arity:
            raise QTypeError(f"gate {e.gate} applied to a value of the wrong size", e.span)
        if e.power is not None and eval_bit(e.power, env) == 0:
            return x
        return apply_gate(g, list(range(arity)), x)
    if isinstance(e, A.PowE):
        base = eval_state(e.base, env)
        if not _is_scalar(base):
            raise QTypeError("power of a state", e.span)
        return base ** eval_bit(e.exp, env)
    raise TypeError(f"not a state expression: {e!r}")


def eval_vector(e, env: EvalEnv, nq: int) -> SymVector:
    v = eval_state(e, env, nq)
    if _is_scalar(v) or v.n_qubits != nq:
        raise QTypeError(f"expected a {nq}-qubit state", getattr(e, "span", None))
    return v
