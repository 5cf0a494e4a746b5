"""Checking declarations: typing, case analysis, execution and the final post check."""

from __future__ import annotations

import itertools
import time

from ..errors import QhttError, QTypeError, Unsupported
from ..linalg import includes
from ..props.expr import BIT_FUNCTIONS, EvalEnv, eval_bit, eval_vector
from ..props.semantics import (
    EXACT,
    SAMPLED,
    StateView,
    Verdict,
    coefficient_match,
    denote_subspace,
    satisfies,
)
from ..props.subst import prop_names, subst_prop
from ..surface import ast as A
from ..surface.pretty import pretty_prop
from .engine import Engine, Options, _Abort, is_bit_fn, rename_type, returns_hoare
from .render import render_snapshot
from .report import (
    CONSQ,
    POSTCHECK,
    UNIT_V,
    BVal,
    CalleeV,
    CaseReport,
    DeclReport,
    Failure,
    FuncV,
    Obligation,
    PairV,
    QVal,
)
from .types import TypeCtx, infer_comp, infer_term, type_eq, wf_type


def split_signature(ty, params):
    """Peel one Pi per parameter, renaming binders to the parameter names.

    Returns ``([(param, domain type)], remaining type)``.
    """
    out = []
    for p in params:
        if not isinstance(ty, A.TPi):
            raise QTypeError(f"parameter {p} has no matching argument type", getattr(ty, "span", None))
        names = {ty.binder: p} if ty.binder not in ("_", p) else {}
        out.append((p, ty.dom))
        ty = rename_type(ty.cod, names)
    return out, ty


def _body_comp(body, sig, span):
    """Strip ``fun`` binders not covered by the parameter list; return (extra params, comp)."""
    extra = []
    while isinstance(body, A.Lambda):
        extra.append(body.param)
        body = body.body
    if not isinstance(body, A.Do):
        raise Unsupported("declaration body is not a computation", span)
    return extra, body.body


# ------------------------------------------------------------ static typing


def typecheck_decl(decl, decls):
    """Raise :class:`QTypeError` unless the declaration is well typed."""
    ctx = TypeCtx(decls=decls)
    wf_type(ctx, decl.type, "program")
    ty = decl.type
    if not returns_hoare(ty):
        body_ty = infer_term(ctx, decl.body) if not decl.params else None
        if body_ty is not None and not type_eq(body_ty, ty):
            raise QTypeError(f"{decl.name}: body does not have the declared type", decl.span)
        return
    extra, comp = _body_comp(decl.body, None, decl.span)
    sig, hoare = split_signature(ty, list(decl.params) + extra)
    if not isinstance(hoare, A.THoare):
        raise QTypeError(f"{decl.name}: too few parameters for its type", decl.span)
    for p, dom in sig:
        ctx = ctx.bind(p, dom, decl.span)
    ctx = ctx.with_ghosts(hoare.ghosts)
    rtype = infer_comp(ctx, comp)
    if not type_eq(rtype, hoare.rtype):
        raise QTypeError(f"{decl.name}: returns a value of the wrong type", decl.span)


# ------------------------------------------------------------ case analysis


def enumerate_cases(sig, hoare, env):
    """Concrete classical inputs: bit parameters, bit -> bit parameters and bit ghosts.

    Yields ``(label, bits, funcs)``; cases contradicting an ``=c`` fact of the
    precondition are skipped.
    """
    axes = []
    for p, dom in sig:
        if dom == A.BIT:
            axes.append(("bit", p, (0, 1)))
        elif is_bit_fn(dom):
            axes.append(("fn", p, tuple(BIT_FUNCTIONS)))
        elif isinstance(dom, A.TPi) and not returns_hoare(dom):
            raise Unsupported(f"classical parameter {p} has an unsupported type (only bit -> bit)")
    pre_bits = prop_names(hoare.pre)[2]
    for g, gty in hoare.ghosts:
        if gty == A.BIT and g in pre_bits:
            axes.append(("bit", g, (0, 1)))
    eqc = [c for c in A.conjuncts(hoare.pre) if isinstance(c, A.EqC)]
    for combo in itertools.product(*[vals for _, _, vals in axes]):
        bits, funcs, label = {}, {}, []
        for (kind, name, _), v in zip(axes, combo):
            if kind == "bit":
                bits[name] = v
            else:
                funcs[name] = BIT_FUNCTIONS[v]
            label.append(f"{name}={v}")
        e = env.extend(bits=bits, funcs=funcs)
        try:
            if any(c.bit in bits and bits[c.bit] != eval_bit(c.value, e) for c in eqc):
                continue
        except QhttError:
            pass
        yield ", ".join(label), bits, {n: (BIT_FUNCTIONS_NAME[f], f) for n, f in funcs.items()}


BIT_FUNCTIONS_NAME = {v: k for k, v in BIT_FUNCTIONS.items()}


# ------------------------------------------------------------ one case


def _value_names(value, pat, hoare):
    """Map result names to what they denote: register names or bit bindings."""
    regs, bits = {}, {}

    def go(p, v):
        if isinstance(p, A.PVar):
            if isinstance(v, QVal):
                regs[p.name] = v.reg
            elif isinstance(v, BVal):
                bits[p.name] = v
            return
        if not isinstance(v, PairV):
            raise QTypeError("returned value does not match the result pattern", pat.span)
        go(p.left, v.left)
        go(p.right, v.right)

    go(pat, value)
    return regs, bits


def _bit_entry(v: BVal):
    if v.kind == "lit":
        return ("lit", v.value)
    if v.kind == "link":
        return ("link", v.value)
    return ("unknown", None)


def post_check(eng: Engine, hoare, value, sig, bits_in, env, opts: Options, span):
    """Discharge the declared postcondition against the final state."""
    rregs, rbits = _value_names(value, hoare.result, hoare)
    names = {}
    for p, dom in sig:
        v = eng.vars.get(p)
        if dom == A.QBIT and isinstance(v, QVal):
            names[p] = v.reg
    names.update(rregs)
    for rn, bv in rbits.items():
        if bv.kind == "link":
            names[f"e_{rn}"] = bv.value
    post = subst_prop(hoare.post, names)
    bits = {b: ("lit", v) for b, v in bits_in.items()}
    bits.update({rn: _bit_entry(bv) for rn, bv in rbits.items()})
    after = pretty_prop(post)
    before = render_snapshot(eng.snapshot())

    if eng.prop_mode:
        return _consq(eng, post, env, opts, before, after, span)

    view = StateView(eng.vector, eng.layout, bits, dict(eng.dead))
    try:
        verdict = satisfies(view, post, env, opts.samples, opts.seed, opts.tol)
    except QhttError as e:
        return Obligation(POSTCHECK, getattr(e, "span", None) or span, before, after, Verdict(False, EXACT), e.message)
    details = []
    for c in A.conjuncts(post):
        if not isinstance(c, A.EqQ):
            continue
        target = eval_vector(c.state, env, len(c.vars))
        m = coefficient_match(eng.vector, eng.layout.indices(c.vars), target, tol=1e-9)
        word = {True: "exact", False: "mismatch", None: "undecided"}[m]
        details.append(f"{pretty_prop(c)}: coefficients {word}")
        if m is False and verdict.holds:
            verdict = Verdict(False, EXACT)
    verdict.detail = "; ".join(details)
    msg = "" if verdict.holds else f"final state does not establish {after}"
    return Obligation(POSTCHECK, span, before, after, verdict, msg)


def _consq(eng, post, env, opts, before, after, span):
    mode = SAMPLED if eng.points != [{}] else EXACT
    try:
        for point, space in zip(eng.points, eng.spaces):
            goal = denote_subspace(post, eng.layout, env, point)
            if not includes(space, goal, opts.tol):
                cx = point if mode == SAMPLED else None
                return Obligation(CONSQ, span, before, after, Verdict(False, mode, cx),
                                  f"strongest postcondition does not entail {after}")
    except QhttError as e:
        return Obligation(CONSQ, span, before, after, Verdict(False, mode), e.message)
    return Obligation(CONSQ, span, before, after, Verdict(True, mode))


def check_case(program, decl, sig, hoare, comp, label, bits, funcs, opts: Options, callees) -> CaseReport:
    env = EvalEnv(bits=bits, funcs={n: t for n, (_, t) in funcs.items()}, gates=opts.gates, cap=opts.max_registers)
    eng = Engine(program, opts, env, callees)
    report = CaseReport(label, inputs={**bits, **{n: name for n, (name, _) in funcs.items()}})
    qparams = []
    for p, dom in sig:
        if dom == A.QBIT:
            qparams.append(p)
            eng.vars[p] = QVal(p)
        elif dom == A.BIT:
            eng.vars[p] = BVal("lit", bits[p])
        elif is_bit_fn(dom):
            eng.vars[p] = FuncV(*funcs[p])
        elif returns_hoare(dom):
            eng.vars[p] = CalleeV(p, dom, opaque=True)
        elif dom == A.UNIT:
            eng.vars[p] = UNIT_V
        else:
            raise Unsupported(f"parameter {p} has an unsupported type", decl.span)
    ghost_bits = {g: bits[g] for g, t in hoare.ghosts if t == A.BIT and g in bits}
    try:
        eng.init_from_pre(hoare.pre, qparams, hoare.ghosts)
        report.mode = "prop" if eng.prop_mode else "state"
        report.initial = eng.snapshot()
        report.initial_prop = render_snapshot(report.initial)
        value = eng.run(comp, steps=report.steps)
        bit_inputs = {p: bits[p] for p, dom in sig if dom == A.BIT}
        bit_inputs.update(ghost_bits)
        eng.obligations.append(post_check(eng, hoare, value, sig, bit_inputs, env, opts, hoare.post.span or decl.span))
    except _Abort:
        pass
    except QhttError as e:
        report.error = Failure(type(e).__name__, e.message, e.span)
    report.obligations = eng.obligations
    return report


# ------------------------------------------------------------ declarations and programs


def callee_table(program):
    return {d.name: CalleeV(d.name, d.type) for d in program.decls}


def check_decl(program, decl, options: Options | None = None) -> DeclReport:
    opts = options or Options()
    t0 = time.perf_counter()
    report = DeclReport(decl.name, decl.span)
    decls = {d.name: d.type for d in program.decls}
    try:
        typecheck_decl(decl, decls)
    except QTypeError as e:
        report.error = Failure(type(e).__name__, e.message, e.span, type_error=True)
        report.seconds = time.perf_counter() - t0
        return report
    if not returns_hoare(decl.type):
        report.seconds = time.perf_counter() - t0
        return report
    try:
        extra, comp = _body_comp(decl.body, None, decl.span)
        sig, hoare = split_signature(decl.type, list(decl.params) + extra)
        env = EvalEnv(gates=opts.gates, cap=opts.max_registers)
        cases = list(enumerate_cases(sig, hoare, env))
        callees = callee_table(program)
        for label, bits, funcs in cases:
            report.cases.append(check_case(program, decl, sig, hoare, comp, label, bits, funcs, opts, callees))
    except QhttError as e:
        report.error = Failure(type(e).__name__, e.message, e.span)
    report.seconds = time.perf_counter() - t0
    return report


def check_program(program, options: Options | None = None, names=None) -> list[DeclReport]:
    return [check_decl(program, d, options) for d in program.decls if names is None or d.name in names]
