"""Capture-free renaming inside propositions and state expressions."""

from __future__ import annotations

from typing import Mapping

from ..surface import ast as A


def subst_bit(b, bits: Mapping[str, object], funcs: Mapping[str, str] = {}):
    """``bits`` maps a bit name to a replacement BitExpr or a new name."""
    if isinstance(b, A.BVar):
        r = bits.get(b.name)
        if r is None:
            return b
        return A.BVar(r, span=b.span) if isinstance(r, str) else r
    if isinstance(b, A.BApp):
        return A.BApp(funcs.get(b.fn, b.fn), subst_bit(b.arg, bits, funcs), span=b.span)
    if isinstance(b, A.BXor):
        return A.BXor(subst_bit(b.left, bits, funcs), subst_bit(b.right, bits, funcs), span=b.span)
    return b


def subst_amp(e, vecs: Mapping[str, object], bits, funcs={}):
    if isinstance(e, A.VecName):
        r = vecs.get(e.name)
        if r is None:
            return e
        return A.VecName(r, span=e.span) if isinstance(r, str) else r
    if isinstance(e, A.KetE):
        return A.KetE(tuple(subst_bit(b, bits, funcs) for b in e.bits), span=e.span)
    if isinstance(e, (A.AddE, A.SubE, A.MulE, A.DivE, A.TensorE)):
        return type(e)(subst_amp(e.left, vecs, bits, funcs), subst_amp(e.right, vecs, bits, funcs), span=e.span)
    if isinstance(e, (A.NegE, A.SqrtE)):
        return type(e)(subst_amp(e.arg, vecs, bits, funcs), span=e.span)
    if isinstance(e, A.GateAppE):
        power = None if e.power is None else subst_bit(e.power, bits, funcs)
        return A.GateAppE(e.gate, power, subst_amp(e.arg, vecs, bits, funcs), span=e.span)
    if isinstance(e, A.PowE):
        return A.PowE(subst_amp(e.base, vecs, bits, funcs), subst_bit(e.exp, bits, funcs), span=e.span)
    return e


def subst_prop(p, names: Mapping[str, str] = {}, vecs: Mapping[str, object] = {}, bits: Mapping[str, object] = {},
               funcs: Mapping[str, str] = {}):
    """Rename quantum variables (``names``), vector names, bits and functions."""

    def rn(vs):
        return tuple(names.get(v, v) for v in vs)

    if isinstance(p, (A.And, A.Or, A.Implies)):
        return type(p)(subst_prop(p.left, names, vecs, bits, funcs), subst_prop(p.right, names, vecs, bits, funcs), span=p.span)
    if isinstance(p, A.InQ):
        vs = tuple(subst_amp(v, vecs, bits, funcs) for v in p.subspace.vectors)
        return A.InQ(rn(p.vars), A.SpanE(vs, span=p.subspace.span), span=p.span)
    if isinstance(p, A.EqQ):
        return A.EqQ(rn(p.vars), subst_amp(p.state, vecs, bits, funcs), span=p.span)
    if isinstance(p, (A.EquivQ, A.EquivCl)):
        return type(p)(rn(p.left), rn(p.right), span=p.span)
    if isinstance(p, (A.Uniform, A.Separable, A.Class)):
        return type(p)(rn(p.vars), span=p.span)
    if isinstance(p, A.EqC):
        target = bits.get(p.bit, p.bit)
        if not isinstance(target, str):
            target = target.name if isinstance(target, A.BVar) else p.bit
        return A.EqC(target, subst_bit(p.value, bits, funcs), span=p.span)
    if isinstance(p, A.UnitaryOn):
        return A.UnitaryOn(p.gate, rn(p.vars), subst_prop(p.prop, names, vecs, bits, funcs), span=p.span)
    return p


def amp_names(e, out=None) -> tuple[set, set, set]:
    """(vector names, bit names, function names) occurring in ``e``."""
    vecs, bits, funcs = out or (set(), set(), set())
    if isinstance(e, A.VecName):
        vecs.add(e.name)
    elif isinstance(e, A.KetE):
        for b in e.bits:
            bit_names(b, bits, funcs)
    elif isinstance(e, (A.AddE, A.SubE, A.MulE, A.DivE, A.TensorE)):
        amp_names(e.left, (vecs, bits, funcs))
        amp_names(e.right, (vecs, bits, funcs))
    elif isinstance(e, (A.NegE, A.SqrtE)):
        amp_names(e.arg, (vecs, bits, funcs))
    elif isinstance(e, A.GateAppE):
        if e.power is not None:
            bit_names(e.power, bits, funcs)
        amp_names(e.arg, (vecs, bits, funcs))
    elif isinstance(e, A.PowE):
        amp_names(e.base, (vecs, bits, funcs))
        bit_names(e.exp, bits, funcs)
    return vecs, bits, funcs


def bit_names(b, bits: set, funcs: set):
    if isinstance(b, A.BVar):
        bits.add(b.name)
    elif isinstance(b, A.BApp):
        funcs.add(b.fn)
        bit_names(b.arg, bits, funcs)
    elif isinstance(b, A.BXor):
        bit_names(b.left, bits, funcs)
        bit_names(b.right, bits, funcs)


def prop_names(p):
    """(quantum vars, vector names, bit names, function names) used by ``p``."""
    qs, vecs, bits, funcs = [], set(), set(), set()

    def walk(p):
        if isinstance(p, (A.And, A.Or, A.Implies)):
            walk(p.left)
            walk(p.right)
        elif isinstance(p, A.InQ):
            qs.extend(p.vars)
            for v in p.subspace.vectors:
                amp_names(v, (vecs, bits, funcs))
        elif isinstance(p, A.EqQ):
            qs.extend(p.vars)
            amp_names(p.state, (vecs, bits, funcs))
        elif isinstance(p, (A.EquivQ, A.EquivCl)):
            qs.extend(p.left + p.right)
        elif isinstance(p, (A.Uniform, A.Separable, A.Class)):
            qs.extend(p.vars)
        elif isinstance(p, A.EqC):
            bits.add(p.bit)
            bit_names(p.value, bits, funcs)
        elif isinstance(p, A.UnitaryOn):
            qs.extend(p.vars)
            walk(p.prop)

    walk(p)
    seen = []
    for q in qs:
        if q not in seen:
            seen.append(q)
    return seen, vecs, bits, funcs
