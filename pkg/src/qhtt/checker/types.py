"""Type formation and term typing."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import QTypeError
from ..props.expr import BUILTIN_VECTORS
from ..props.subst import prop_names
from ..surface import ast as A

SPEC_ONLY = ("vector", "complex")
GHOST_TYPES = ("qbit", "vector", "prop", "bit")
GATE_ARITY = {"I": 1, "X": 1, "Y": 1, "Z": 1, "H": 1, "CX": 2, "CZ": 2}


@dataclass
class TypeCtx:
    vars: dict = field(default_factory=dict)  # name -> QType
    ghosts: dict = field(default_factory=dict)  # ghost name -> QType (props only)
    decls: dict = field(default_factory=dict)  # top-level name -> QType

    def bind(self, name, ty, span=None) -> "TypeCtx":
        if name == "_":
            return self
        if name in self.vars or name in self.ghosts:
            raise QTypeError(f"{name} is already bound", span)
        return replace(self, vars={**self.vars, name: ty})

    def with_ghosts(self, ghosts) -> "TypeCtx":
        g = dict(self.ghosts)
        for name, ty in ghosts:
            g[name] = ty
        return replace(self, ghosts=g)

    def lookup(self, name):
        if name in self.vars:
            return self.vars[name]
        return self.decls.get(name)


def type_eq(a, b) -> bool:
    """Structural equality up to binder names; Hoare types compare shapes only."""
    if type(a) is not type(b):
        return False
    if isinstance(a, A.TBase):
        return a.name == b.name
    if isinstance(a, A.TPair):
        return type_eq(a.left, b.left) and type_eq(a.right, b.right)
    if isinstance(a, A.TPi):
        return type_eq(a.dom, b.dom) and type_eq(a.cod, b.cod)
    if isinstance(a, A.THoare):
        return (
            type_eq(a.rtype, b.rtype)
            and len(a.ghosts) == len(b.ghosts)
            and all(type_eq(x[1], y[1]) for x, y in zip(a.ghosts, b.ghosts))
        )
    return a == b


def bind_pattern(ctx: TypeCtx, pat, ty, span=None) -> TypeCtx:
    if isinstance(pat, A.PVar):
        return ctx.bind(pat.name, ty, span or pat.span)
    if not isinstance(ty, A.TPair):
        raise QTypeError(f"pattern {pat!r} needs a pair type", span or pat.span)
    return bind_pattern(bind_pattern(ctx, pat.left, ty.left, span), pat.right, ty.right, span)


def pattern_types(pat, ty) -> dict:
    if isinstance(pat, A.PVar):
        return {} if pat.name == "_" else {pat.name: ty}
    if not isinstance(ty, A.TPair):
        raise QTypeError("pattern does not match its type", pat.span)
    return {**pattern_types(pat.left, ty.left), **pattern_types(pat.right, ty.right)}


# ------------------------------------------------------------ formation


def wf_type(ctx: TypeCtx, t, position="program"):
    """Raise :class:`QTypeError` unless ``t`` is well formed."""
    if isinstance(t, A.TBase):
        if position == "program" and t.name in SPEC_ONLY:
            raise QTypeError(f"{t.name} may only appear in specifications", t.span)
        return
    if isinstance(t, A.TPair):
        wf_type(ctx, t.left, position)
        wf_type(ctx, t.right, position)
        return
    if isinstance(t, A.TPi):
        wf_type(ctx, t.dom, position)
        inner = replace(ctx, vars={**ctx.vars, t.binder: t.dom}) if t.binder != "_" else ctx
        wf_type(inner, t.cod, position)
        return
    if isinstance(t, A.THoare):
        wf_type(ctx, t.rtype, "program")
        for name, gty in t.ghosts:
            if not (isinstance(gty, A.TBase) and gty.name in GHOST_TYPES):
                raise QTypeError(f"ghost {name} must have type qbit, vector, prop or bit", t.span)
        inner = ctx.with_ghosts(t.ghosts)
        wf_prop(inner, t.pre, t.span)
        results = pattern_types(t.result, t.rtype)
        wf_prop(replace(inner, vars={**inner.vars, **results}), t.post, t.span)
        return
    raise QTypeError(f"not a type: {t!r}")


def _is_bit_fn(ty):
    return isinstance(ty, A.TPi) and ty.dom == A.BIT and ty.cod == A.BIT


def wf_prop(ctx: TypeCtx, p, span=None):
    """Every name used in ``p`` must be in scope with a plausible sort.

    Quantum predicates applied to bits are deliberately *not* rejected here:
    that mistake surfaces when the proposition is checked, as a failed
    obligation carrying the diagnostic.
    """
    qs, vecs, bits, funcs = prop_names(p)
    scope = {**ctx.vars, **ctx.ghosts}
    where = getattr(p, "span", None) or span
    for q in qs:
        if q not in scope:
            raise QTypeError(f"unknown variable {q} in proposition", where)
    for v in vecs:
        ty = scope.get(v)
        if v in BUILTIN_VECTORS and ty is None:
            continue
        if ty != A.VECTOR:
            raise QTypeError(f"{v} is not a vector ghost", where)
    for b in bits:
        if scope.get(b) != A.BIT:
            raise QTypeError(f"{b} is not a bit", where)
    for f in funcs:
        if not _is_bit_fn(scope.get(f)):
            raise QTypeError(f"{f} is not a function bit -> bit", where)


# ------------------------------------------------------------ terms


def infer_term(ctx: TypeCtx, t):
    if isinstance(t, A.Var):
        if t.name in ctx.ghosts and t.name not in ctx.vars:
            raise QTypeError(f"ghost in program term: {t.name}", t.span)
        ty = ctx.lookup(t.name)
        if ty is None:
            raise QTypeError(f"unbound variable {t.name}", t.span)
        return ty
    if isinstance(t, A.BitLit):
        return A.BIT
    if isinstance(t, A.UnitLit):
        return A.UNIT
    if isinstance(t, A.GateConst):
        if t.name not in GATE_ARITY:
            raise QTypeError(f"unknown gate {t.name}", t.span)
        return A.UNITARY
    if isinstance(t, A.PairI):
        return A.TPair(infer_term(ctx, t.left), infer_term(ctx, t.right))
    if isinstance(t, (A.Fst, A.Snd)):
        ty = infer_term(ctx, t.arg)
        if not isinstance(ty, A.TPair):
            raise QTypeError("projection from a non-pair", t.span)
        return ty.left if isinstance(t, A.Fst) else ty.right
    if isinstance(t, A.Lambda):
        if t.ptype is None:
            raise QTypeError(f"parameter {t.param} needs a type annotation", t.span)
        wf_type(ctx, t.ptype)
        body = infer_term(ctx.bind(t.param, t.ptype, t.span), t.body)
        return A.TPi(t.param, t.ptype, body)
    if isinstance(t, A.App):
        fty = infer_term(ctx, t.fn)
        if not isinstance(fty, A.TPi):
            raise QTypeError("application of a non-function", t.span)
        aty = infer_term(ctx, t.arg)
        if not type_eq(aty, fty.dom):
            raise QTypeError("argument type does not match the parameter type", t.arg.span or t.span)
        return fty.cod
    if isinstance(t, A.Do):
        rtype = infer_comp(ctx, t.body)
        return A.THoare(A.PVar("_"), rtype, (), A.Top(), A.Top())
    raise QTypeError(f"not a term: {t!r}")


def check_term(ctx: TypeCtx, t, expected):
    ty = infer_term(ctx, t)
    if not type_eq(ty, expected):
        raise QTypeError("term does not have the expected type", t.span)
    return ty


def _targets_type(n):
    return A.QBIT if n == 1 else A.TPair(A.QBIT, A.QBIT)


def infer_cmd(ctx: TypeCtx, cmd):
    if isinstance(cmd, A.Init):
        return A.QBIT
    if isinstance(cmd, A.Meas):
        check_term(ctx, cmd.qubit, A.QBIT)
        return A.BIT
    if isinstance(cmd, A.Apply):
        check_term(ctx, cmd.gate, A.UNITARY)
        arity = GATE_ARITY.get(cmd.gate.name, None) if isinstance(cmd.gate, A.GateConst) else None
        tty = infer_term(ctx, cmd.targets)
        if arity is not None and not type_eq(tty, _targets_type(arity)):
            raise QTypeError(f"gate {cmd.gate.name} expects {arity} qubit target(s)", cmd.span)
        return A.UNIT
    raise QTypeError(f"not a command: {cmd!r}")


def call_result_type(ctx: TypeCtx, fn, args, span=None):
    ty = infer_term(ctx, fn)
    for a in args:
        if not isinstance(ty, A.TPi):
            raise QTypeError("too many arguments", span)
        aty = infer_term(ctx, a)
        if not type_eq(aty, ty.dom):
            raise QTypeError("argument type does not match the parameter type", a.span or span)
        ty = ty.cod
    if not isinstance(ty, A.THoare):
        raise QTypeError("call target is not a computation (missing arguments?)", span)
    return ty


def infer_comp(ctx: TypeCtx, c):
    """Result type of a computation, checking every statement on the way."""
    while True:
        if isinstance(c, A.Return):
            return infer_term(ctx, c.value)
        if isinstance(c, A.BindCmd):
            ctx = bind_pattern(ctx, c.pattern, infer_cmd(ctx, c.cmd), c.span)
        elif isinstance(c, A.BindCall):
            hoare = call_result_type(ctx, c.fn, c.args, c.span)
            ghost_names = {g for g, _ in hoare.ghosts}
            for name, _ in c.ghosts:
                if name not in ghost_names:
                    raise QTypeError(f"{name} is not a ghost of the callee", c.span)
            ctx = bind_pattern(ctx, c.pattern, hoare.rtype, c.span)
        elif isinstance(c, A.IfThenElse):
            check_term(ctx, c.cond, A.BIT)
            for branch in (c.then, c.orelse):
                if not type_eq(infer_comp(ctx, branch), A.UNIT):
                    raise QTypeError("if branches must return ()", branch.span or c.span)
        else:
            raise QTypeError(f"not a computation: {c!r}")
        c = c.rest
