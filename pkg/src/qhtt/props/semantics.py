"""Meaning of propositions: subspace denotation, entailment, satisfaction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..errors import NotSubspaceExpressible, QTypeError, UseAfterMeasure
from ..linalg import Subspace, SymVector, embed, includes, intersect, span, sum_
from ..linalg.density import outcome_probabilities, purity, reduced_density
from ..linalg.subspace import INCLUDE_TOL, apply_to_subspace
from ..surface import ast as A
from .expr import EvalEnv, eval_bit, eval_vector
from .layout import RegisterLayout
from .sampling import DEFAULT_SAMPLES, DEFAULT_SEED, sample_points

PRED_TOL = 1e-9
EXACT, SAMPLED = "exact", "sampled"


@dataclass
class Verdict:
    holds: bool
    mode: str = EXACT
    counterexample: dict | None = None
    detail: str = ""

    def __bool__(self):
        return self.holds

    def to_dict(self):
        out = {"holds": self.holds, "mode": self.mode}
        if self.counterexample is not None:
            out["counterexample"] = {k: _fmt_complex(v) for k, v in sorted(self.counterexample.items())}
        if self.detail:
            out["detail"] = self.detail
        return out


def _fmt_complex(c) -> str:
    c = complex(c)
    return f"{c.real:.6g}{c.imag:+.6g}i"


@dataclass(frozen=True)
class StatePred:
    """Marker left by :func:`desugar` for predicates that are not subspaces."""

    kind: str  # uniform | separable | class | biteq
    payload: object


@dataclass
class StateView:
    """What :func:`satisfies` needs to know about an execution state."""

    vector: SymVector
    layout: RegisterLayout
    bits: Mapping[str, tuple] = field(default_factory=dict)  # name -> ("lit", v) | ("link", register)
    consumed: Mapping[str, str] = field(default_factory=dict)  # qubit -> reason


# ------------------------------------------------------------ desugaring


def desugar(p):
    """Rewrite ``=q`` into ``∈q span``; state predicates become :class:`StatePred`."""
    if isinstance(p, A.EqQ):
        return A.InQ(p.vars, A.SpanE((p.state,), span=p.span), span=p.span)
    if isinstance(p, A.Uniform):
        return StatePred("uniform", p.vars)
    if isinstance(p, A.Separable):
        return StatePred("separable", p.vars)
    if isinstance(p, A.Class):
        return StatePred("class", p.vars)
    if isinstance(p, A.EqC):
        return StatePred("biteq", (p.bit, p.value))
    if isinstance(p, (A.And, A.Or, A.Implies)):
        return type(p)(desugar(p.left), desugar(p.right), span=p.span)
    if isinstance(p, A.UnitaryOn):
        return A.UnitaryOn(p.gate, p.vars, desugar(p.prop), span=p.span)
    return p


def is_subspace_expressible(p) -> bool:
    if isinstance(p, (A.Top, A.Bottom, A.InQ, A.EqQ, A.EquivQ, A.EquivCl)):
        return True
    if isinstance(p, (A.And, A.Or)):
        return is_subspace_expressible(p.left) and is_subspace_expressible(p.right)
    if isinstance(p, A.UnitaryOn):
        return is_subspace_expressible(p.prop)
    return False


# ------------------------------------------------------------ denotation


def _regs(layout: RegisterLayout, names, span=None):
    try:
        return layout.indices(names)
    except KeyError as exc:
        raise QTypeError(f"unknown quantum variable {exc.args[0]}", span) from None


def swap_fixed_space(left, right, n) -> Subspace:
    """Eigenvalue-1 eigenspace of SWAP(left, right) on ``n`` registers."""
    cols = []
    for b in range(2**n):
        bits = [(b >> (n - 1 - r)) & 1 for r in range(n)]
        sw = list(bits)
        for x, y in zip(left, right):
            sw[x], sw[y] = bits[y], bits[x]
        b2 = int("".join(map(str, sw)), 2) if n else 0
        v = np.zeros(2**n, dtype=np.complex128)
        if b2 == b:
            v[b] = 1
        elif b < b2:
            v[b] = v[b2] = 1 / np.sqrt(2)
        else:
            continue
        cols.append(v)
    return Subspace(2**n, np.stack(cols, axis=1))


def classical_eq_space(left, right, n) -> Subspace:
    cols = []
    for b in range(2**n):
        bits = [(b >> (n - 1 - r)) & 1 for r in range(n)]
        if all(bits[x] == bits[y] for x, y in zip(left, right)):
            v = np.zeros(2**n, dtype=np.complex128)
            v[b] = 1
            cols.append(v)
    return Subspace(2**n, np.stack(cols, axis=1))


def denote_subspace(p, layout: RegisterLayout, env: EvalEnv | None = None, values: Mapping | None = None) -> Subspace:
    """Subspace of the ``2**layout.n`` space denoted by ``p`` at parameter ``values``."""
    env = env or EvalEnv()
    values = values or {}
    n = layout.n
    dim = 2**n
    if isinstance(p, A.Top):
        return Subspace.top(dim)
    if isinstance(p, A.Bottom):
        return Subspace.bottom(dim)
    if isinstance(p, A.EqQ):
        p = desugar(p)
    if isinstance(p, A.InQ):
        regs = _regs(layout, p.vars, p.span)
        vecs = [eval_vector(v, env, len(regs)).instantiate(values) for v in p.subspace.vectors]
        local = span(vecs)
        return embed(local, regs, n)
    if isinstance(p, A.EquivQ):
        return swap_fixed_space(_regs(layout, p.left, p.span), _regs(layout, p.right, p.span), n)
    if isinstance(p, A.EquivCl):
        return classical_eq_space(_regs(layout, p.left, p.span), _regs(layout, p.right, p.span), n)
    if isinstance(p, A.And):
        return intersect(denote_subspace(p.left, layout, env, values), denote_subspace(p.right, layout, env, values))
    if isinstance(p, A.Or):
        return sum_(denote_subspace(p.left, layout, env, values), denote_subspace(p.right, layout, env, values))
    if isinstance(p, A.UnitaryOn):
        inner = denote_subspace(p.prop, layout, env, values)
        return apply_to_subspace(env.gates[p.gate], _regs(layout, p.vars, p.span), inner)
    what = type(p).__name__ if not isinstance(p, StatePred) else p.kind
    raise NotSubspaceExpressible(f"{what} does not denote a subspace", getattr(p, "span", None))


def prop_parameters(p, layout: RegisterLayout, env: EvalEnv | None = None) -> set:
    """Symbolic parameters introduced by the state expressions of ``p``."""
    env = env or EvalEnv()
    out: set = set()
    if isinstance(p, (A.And, A.Or, A.Implies)):
        return prop_parameters(p.left, layout, env) | prop_parameters(p.right, layout, env)
    if isinstance(p, A.UnitaryOn):
        return prop_parameters(p.prop, layout, env)
    vecs = ()
    if isinstance(p, A.EqQ):
        vecs = (p.state,)
    elif isinstance(p, A.InQ):
        vecs = p.subspace.vectors
    for v in vecs:
        out |= eval_vector(v, env, len(p.vars)).parameters
    return out


# ------------------------------------------------------------ entailment


def entails(p, q, layout: RegisterLayout, env: EvalEnv | None = None, samples=DEFAULT_SAMPLES,
            seed=DEFAULT_SEED, extra_params=()) -> Verdict:
    """Does ``p`` entail ``q``?  Decided by subspace inclusion."""
    env = env or EvalEnv()
    if isinstance(q, A.Implies):
        return entails(A.And(p, q.left), q.right, layout, env, samples, seed, extra_params)
    for side in (p, q):
        if not is_subspace_expressible(side):
            raise NotSubspaceExpressible("entailment needs subspace propositions", getattr(side, "span", None))
    params = prop_parameters(p, layout, env) | prop_parameters(q, layout, env) | set(extra_params)
    points = sample_points(params, samples, seed)
    mode = SAMPLED if params else EXACT
    for point in points:
        if not includes(denote_subspace(p, layout, env, point), denote_subspace(q, layout, env, point)):
            return Verdict(False, mode, point if params else None)
    return Verdict(True, mode)


# ------------------------------------------------------------ satisfaction


def _quantum_names(view: StateView, names, what, span):
    regs = []
    for x in names:
        if x in view.bits:
            raise QTypeError(f"{what}: only defined for quantum variables", span)
        if x in view.consumed:
            regs.append(None)
            continue
        if x not in view.layout:
            raise QTypeError(f"{what}: unknown quantum variable {x}", span)
        regs.append(view.layout.index(x))
    return regs


def check_prop_names(p, view: StateView):
    """Reject ill-sorted variable uses before any numerics run."""
    if isinstance(p, (A.And, A.Or, A.Implies)):
        check_prop_names(p.left, view)
        check_prop_names(p.right, view)
    elif isinstance(p, A.UnitaryOn):
        _live(view, p.vars, f"({p.gate} on …)", p.span)
        check_prop_names(p.prop, view)
    elif isinstance(p, (A.Uniform, A.Separable, A.Class)):
        what = type(p).__name__.lower()
        regs = _quantum_names(view, p.vars, what, p.span)
        if what != "class" and None in regs:
            raise UseAfterMeasure(f"{what}: {p.vars[regs.index(None)]} was measured", p.span)
    elif isinstance(p, (A.InQ, A.EqQ)):
        _live(view, p.vars, "=q" if isinstance(p, A.EqQ) else "∈q", p.span)
    elif isinstance(p, (A.EquivQ, A.EquivCl)):
        _live(view, p.left + p.right, "≡q" if isinstance(p, A.EquivQ) else "≡cl", p.span)
    elif isinstance(p, A.EqC):
        if p.bit not in view.bits:
            raise QTypeError(f"=c: {p.bit} is not a classical bit", p.span)


def _live(view, names, what, span):
    regs = _quantum_names(view, names, what, span)
    for x, r in zip(names, regs):
        if r is None:
            raise UseAfterMeasure(f"{what}: {x} was measured", span)


def _biteq_holds(view: StateView, bit, value, env: EvalEnv, v: np.ndarray) -> bool:
    linked = {name: b[1] for name, b in view.bits.items() if b[0] == "link"}
    lits = {name: b[1] for name, b in view.bits.items() if b[0] == "lit"}
    n = view.layout.n
    nz = np.nonzero(np.abs(v) > PRED_TOL)[0]
    for idx in nz:
        bits = dict(lits)
        for name, reg in linked.items():
            r = view.layout.index(reg)
            bits[name] = (int(idx) >> (n - 1 - r)) & 1
        e = env.extend(bits=bits)
        if bits.get(bit) is None or bits[bit] != eval_bit(value, e):
            return False
    return True


def _holds_at(p, view: StateView, env: EvalEnv, v: np.ndarray, point, tol=INCLUDE_TOL) -> bool:
    if isinstance(p, A.And):
        return _holds_at(p.left, view, env, v, point, tol) and _holds_at(p.right, view, env, v, point, tol)
    if isinstance(p, A.Implies):
        return (not _holds_at(p.left, view, env, v, point, tol)) or _holds_at(p.right, view, env, v, point, tol)
    if isinstance(p, A.Or) and not is_subspace_expressible(p):
        return _holds_at(p.left, view, env, v, point, tol) or _holds_at(p.right, view, env, v, point, tol)
    if is_subspace_expressible(p):
        return denote_subspace(p, view.layout, env, point).contains(v, tol)
    if isinstance(p, A.Uniform):
        regs = view.layout.indices(p.vars)
        probs = outcome_probabilities(v, regs)
        return bool(np.all(np.abs(probs - 1 / 2 ** len(regs)) <= PRED_TOL))
    if isinstance(p, A.Separable):
        return purity(reduced_density(v, view.layout.indices(p.vars))) >= 1 - PRED_TOL
    if isinstance(p, A.Class):
        for x in p.vars:
            if x in view.consumed:
                continue
            rho = reduced_density(v, [view.layout.index(x)])
            d = np.real(np.diag(rho))
            off = abs(rho[0, 1])
            if off > PRED_TOL or not (abs(d[0] - 1) <= PRED_TOL or abs(d[1] - 1) <= PRED_TOL):
                return False
        return True
    if isinstance(p, A.EqC):
        return _biteq_holds(view, p.bit, p.value, env, v)
    if isinstance(p, A.Bottom):
        return np.linalg.norm(v) <= INCLUDE_TOL
    raise TypeError(f"cannot evaluate {p!r}")


def satisfies(view: StateView, p, env: EvalEnv | None = None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED,
               tol=INCLUDE_TOL) -> Verdict:
    """Does the (possibly symbolic) state in ``view`` satisfy ``p``?"""
    env = env or EvalEnv()
    check_prop_names(p, view)
    params = set(view.vector.parameters) | prop_parameters(p, view.layout, env)
    points = sample_points(params, samples, seed)
    mode = SAMPLED if params else EXACT
    for point in points:
        v = view.vector.instantiate(point)
        if not _holds_at(p, view, env, v, point, tol):
            return Verdict(False, mode, point if params else None)
    return Verdict(True, mode)


# ------------------------------------------------------------ exact coefficient matching


def coefficient_match(s: SymVector, regs, e: SymVector, tol=1e-9):
    """Is ``s`` exactly ``e`` on ``regs`` times some factor on the rest?

    Returns True, False, or None when the question cannot be settled
    symbolically (a symbolic ``e`` that does not factor with a constant rest).
    The rest factor absorbs any global phase.
    """
    n = s.n_qubits
    k = len(regs)
    rest = [r for r in range(n) if r not in regs]
    kk = s.coeffs.shape[1]
    t = np.transpose(s.coeffs.reshape((2,) * n + (kk,)), list(regs) + rest + [n]).reshape(2**k, 2 ** len(rest), kk)
    scols = dict(zip(s.monomials, np.moveaxis(t, 2, 0)))
    ecols = {m: c for m, c in zip(e.monomials, e.coeffs.T) if np.linalg.norm(c) > tol}
    if not ecols:
        return all(np.linalg.norm(c) <= tol for c in scols.values())
    if set(ecols) == {()}:
        ev = ecols[()]
        r = {m: ev.conj() @ c / np.vdot(ev, ev) for m, c in scols.items()}
        ok = all(np.allclose(scols[m], np.outer(ev, r[m]), atol=tol) for m in scols)
        return ok and any(np.linalg.norm(x) > tol for x in r.values())
    m0, ev0 = next(iter(ecols.items()))
    if m0 not in scols:
        return None
    r = ev0.conj() @ scols[m0] / np.vdot(ev0, ev0)
    if np.linalg.norm(r) <= tol:
        return None
    expect = {m: np.outer(c, r) for m, c in ecols.items()}
    keys = set(expect) | {m for m, c in scols.items() if np.linalg.norm(c) > tol}
    z = np.zeros((2**k, 2 ** len(rest)))
    ok = all(np.allclose(scols.get(m, z), expect.get(m, z), atol=tol) for m in keys)
    return True if ok else None
