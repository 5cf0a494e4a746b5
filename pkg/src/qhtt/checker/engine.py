"""Symbolic execution of computations and discharge of their obligations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import (
    AmbiguousGhostBinding,
    FrameSepViolation,
    PreconditionFailure,
    QhttError,
    QTypeError,
    TargetError,
    UnderdeterminedPostcondition,
    UnknownBitOrigin,
    Unsupported,
    UnsupportedBranchEffect,
    UseAfterMeasure,
)
from ..linalg import GATES, SymVector, apply_gate, apply_map, permute, span, tensor
from ..linalg.density import schmidt_rank
from ..linalg.subspace import INCLUDE_TOL, apply_to_subspace, tensor_subspaces
from ..props import layout as L
from ..props.expr import EvalEnv, eval_bit, eval_vector
from ..props.sampling import DEFAULT_SAMPLES, DEFAULT_SEED, sample_points
from ..props.semantics import (
    EXACT,
    SAMPLED,
    Verdict,
    denote_subspace,
    is_subspace_expressible,
    prop_parameters,
)
from ..props.subst import prop_names, subst_prop
from ..surface import ast as A
from ..surface.pretty import pretty_prop, pretty_term, stmt_lines
from .render import frame_facts, render_snapshot
from .report import (
    CALLPRE,
    FRAMESEP,
    UNIT_V,
    BVal,
    CalleeV,
    FuncV,
    GateV,
    Obligation,
    PairV,
    QVal,
    Snapshot,
    Step,
)
from .types import GATE_ARITY

MAP_TOL = 1e-9


@dataclass
class Options:
    tol: float = INCLUDE_TOL
    max_registers: int = 12
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    gates: dict = field(default_factory=lambda: GATES)


class _Abort(Exception):
    """Stop executing a case after a failed blocking obligation."""


def is_bit_fn(ty):
    return isinstance(ty, A.TPi) and ty.dom == A.BIT and ty.cod == A.BIT


def returns_hoare(ty):
    while isinstance(ty, A.TPi):
        ty = ty.cod
    return isinstance(ty, A.THoare)


# ------------------------------------------------------------ renaming inside types


def rename_type(ty, names):
    """Rename free quantum/bit/function names inside Hoare specifications."""
    if not names:
        return ty
    if isinstance(ty, A.TPi):
        inner = {k: v for k, v in names.items() if k != ty.binder}
        return A.TPi(ty.binder, rename_type(ty.dom, names), rename_type(ty.cod, inner), span=ty.span)
    if isinstance(ty, A.TPair):
        return A.TPair(rename_type(ty.left, names), rename_type(ty.right, names), span=ty.span)
    if isinstance(ty, A.THoare):
        bound = {g for g, _ in ty.ghosts} | set(A.pattern_names(ty.result))
        m = {k: v for k, v in names.items() if k not in bound}
        return replace(ty, pre=subst_prop(ty.pre, m, {}, m, m), post=subst_prop(ty.post, m, {}, m, m))
    return ty


def flatten_pattern(pat, ty):
    """[(name, type)] leaves of a pattern against its type."""
    if isinstance(pat, A.PVar):
        return [(pat.name, ty)]
    if not isinstance(ty, A.TPair):
        raise QTypeError("pattern does not match its type", pat.span)
    return flatten_pattern(pat.left, ty.left) + flatten_pattern(pat.right, ty.right)


# ------------------------------------------------------------ the engine


class Engine:
    """Executes one case of one declaration."""

    def __init__(self, program, options: Options, env: EvalEnv, callees: dict):
        self.program = program
        self.opts = options
        self.env = env
        self.callees = callees  # name -> CalleeV for declarations
        self.layout = L.RegisterLayout()
        self.vector: SymVector | None = SymVector.scalar_one()
        self.spaces = None  # prop mode: one subspace per sample point
        self.points = None
        self.vars: dict = {}
        self.consumed: dict = {}  # variable -> reason
        self.dead: dict = {}  # register -> reason
        self.controls: list = []
        self.obligations: list = []
        self._fresh = itertools.count(1)

    # ----------------------------------------------------- state helpers

    @property
    def prop_mode(self):
        return self.vector is None

    def snapshot(self) -> Snapshot:
        return Snapshot(self.layout, self.vector, self.spaces, self.points, dict(self.vars), dict(self.consumed))

    def fresh_name(self, base):
        taken = set(self.layout.names) | set(self.vars) | set(self.dead)
        if base not in taken:
            return base
        while True:
            cand = f"{base}{next(self._fresh)}"
            if cand not in taken:
                return cand

    def _reg_index(self, reg, span=None):
        if reg in self.dead:
            raise UseAfterMeasure(f"qubit {reg} was consumed ({self.dead[reg]})", span)
        return self.layout.index(reg)

    def _qubit(self, v, span, what="operand"):
        if not isinstance(v, QVal):
            raise QTypeError(f"{what} is not a qubit", span)
        self._reg_index(v.reg, span)
        return v.reg

    def _cap(self, n):
        if n > self.opts.max_registers:
            from ..errors import CapacityError

            raise CapacityError(f"state would need {n} registers (cap is {self.opts.max_registers})")

    # ----------------------------------------------------- terms

    def eval_term(self, t):
        if isinstance(t, A.Var):
            if t.name in self.consumed and t.name in self.vars and isinstance(self.vars[t.name], QVal):
                raise UseAfterMeasure(f"{t.name} was consumed ({self.consumed[t.name]})", t.span)
            if t.name in self.vars:
                return self.vars[t.name]
            if t.name in self.callees:
                return self.callees[t.name]
            raise QTypeError(f"unbound variable {t.name}", t.span)
        if isinstance(t, A.BitLit):
            return BVal("lit", t.value)
        if isinstance(t, A.UnitLit):
            return UNIT_V
        if isinstance(t, A.GateConst):
            return GateV(t.name)
        if isinstance(t, A.PairI):
            return PairV(self.eval_term(t.left), self.eval_term(t.right))
        if isinstance(t, (A.Fst, A.Snd)):
            v = self.eval_term(t.arg)
            if not isinstance(v, PairV):
                raise QTypeError("projection from a non-pair", t.span)
            return v.left if isinstance(t, A.Fst) else v.right
        raise Unsupported(f"term {pretty_term(t)} cannot be evaluated here", t.span)

    def bind(self, pat, value, span=None):
        if isinstance(pat, A.PVar):
            if pat.name != "_":
                self.vars[pat.name] = value
            return
        if not isinstance(value, PairV):
            raise QTypeError("pattern expects a pair", span)
        self.bind(pat.left, value.left, span)
        self.bind(pat.right, value.right, span)

    # ----------------------------------------------------- initial state

    def init_from_pre(self, pre, qparams, ghosts):
        """Build the initial state from the declared precondition."""
        qghosts = [g for g, ty in ghosts if ty == A.QBIT]
        facts, other = [], []
        for c in A.conjuncts(pre):
            if isinstance(c, A.EqC):
                continue
            if isinstance(c, A.EqQ) or (isinstance(c, A.InQ) and len(c.subspace.vectors) == 1):
                facts.append(c)
            else:
                other.append(c)
        covered = [v for f in facts for v in f.vars]
        determining = (
            not other
            and len(covered) == len(set(covered))
            and all(v in qparams or v in qghosts for v in covered)
        )
        if determining:
            vec = SymVector.scalar_one()
            order = []
            for f in facts:
                e = f.state if isinstance(f, A.EqQ) else f.subspace.vectors[0]
                vec = tensor(vec, eval_vector(e, self.env, len(f.vars)), self.opts.max_registers)
                order.extend(f.vars)
            free = [q for q in qparams if q not in covered]
            if free:
                name = "in_" + "_".join(free)
                vec = tensor(vec, SymVector.symbolic(name, 2 ** len(free)), self.opts.max_registers)
                order.extend(free)
            want = [q for q in qparams] + [g for g in order if g not in qparams]
            vec = permute(vec, [order.index(r) for r in want])
            self.vector = vec
            self.layout = L.RegisterLayout(tuple((r, L.QUBIT if r in qparams else L.GHOST) for r in want))
            return
        # proposition mode
        used = [v for v in prop_names(pre)[0] if v in qghosts]
        names = list(qparams) + used
        self._cap(len(names))
        self.layout = L.RegisterLayout(tuple((r, L.QUBIT if r in qparams else L.GHOST) for r in names))
        if not is_subspace_expressible(pre):
            raise Unsupported("precondition neither determines a state nor denotes a subspace", pre.span)
        self.points = sample_points(prop_parameters(pre, self.layout, self.env), self.opts.samples, self.opts.seed)
        self.spaces = [denote_subspace(pre, self.layout, self.env, p) for p in self.points]
        self.vector = None

    # ----------------------------------------------------- commands

    def exec_init(self, pat, cmd):
        if not isinstance(pat, A.PVar):
            raise QTypeError("init binds a single qubit", cmd.span)
        if self.controls:
            raise UnsupportedBranchEffect("init inside a measurement-controlled branch", cmd.span)
        name = pat.name if pat.name != "_" else self.fresh_name("_q")
        if name in self.layout or name in self.dead:
            name = self.fresh_name(name)
        self._cap(self.layout.n + 1)
        self.layout = self.layout.append(name, L.QUBIT)
        ket = SymVector.basis([cmd.bit])
        if self.prop_mode:
            local = span([ket.concrete()])
            self.spaces = [tensor_subspaces(s, local) for s in self.spaces]
        else:
            self.vector = tensor(self.vector, ket, self.opts.max_registers)
        if pat.name != "_":
            self.vars[pat.name] = QVal(name)

    def exec_apply(self, cmd):
        g = self.eval_term(cmd.gate)
        if not isinstance(g, GateV):
            raise Unsupported("only gate constants can be applied", cmd.span)
        gate = self.opts.gates[g.name]
        tv = self.eval_term(cmd.targets)
        regs = [tv] if not isinstance(tv, PairV) else [tv.left, tv.right]
        if any(isinstance(r, PairV) for r in regs):
            raise TargetError("too many targets", cmd.span)
        regs = [self._qubit(r, cmd.span, "gate target") for r in regs]
        if len(regs) != GATE_ARITY[g.name]:
            raise TargetError(f"gate {g.name} takes {GATE_ARITY[g.name]} target(s)", cmd.span)
        if len(set(regs)) != len(regs):
            raise TargetError(f"duplicate gate targets {regs}", cmd.span)
        idx = [self.layout.index(r) for r in regs]
        ctl = [(self.layout.index(r), v) for r, v in self.controls]
        if self.prop_mode:
            self.spaces = [apply_to_subspace(gate, idx, s, ctl) for s in self.spaces]
        else:
            self.vector = apply_gate(gate, idx, self.vector, ctl)

    def exec_meas(self, pat, cmd):
        if not isinstance(pat, A.PVar):
            raise QTypeError("meas binds a single bit", cmd.span)
        if self.controls:
            raise UnsupportedBranchEffect("meas inside a measurement-controlled branch", cmd.span)
        if self.prop_mode:
            raise Unsupported("measurement is not supported when the state is only known as a subspace", cmd.span)
        reg = self._qubit(self.eval_term(cmd.qubit), cmd.span, "measured value")
        bit = pat.name if pat.name != "_" else self.fresh_name("_b")
        ghost = self.fresh_name(f"e_{bit}")
        self.layout = self.layout.rename(reg, ghost, L.GHOST)
        self.dead[reg] = "meas"
        for name, v in self.vars.items():
            if v == QVal(reg):
                self.consumed[name] = "meas"
        if pat.name != "_":
            self.vars[pat.name] = BVal("link", ghost)

    def _unitary_only(self, c):
        while not isinstance(c, A.Return):
            if isinstance(c, A.BindCmd) and isinstance(c.cmd, A.Apply):
                pass
            elif isinstance(c, A.IfThenElse):
                self._unitary_only(c.then)
                self._unitary_only(c.orelse)
            else:
                what = type(c.cmd).__name__.lower() if isinstance(c, A.BindCmd) else "call"
                raise UnsupportedBranchEffect(f"{what} inside a branch on a measured bit", c.span)
            c = c.rest
        if not isinstance(c.value, A.UnitLit):
            raise UnsupportedBranchEffect("branches on a measured bit must return ()", c.span)

    def exec_if(self, c: A.IfThenElse):
        cond = self.eval_term(c.cond)
        if not isinstance(cond, BVal):
            raise QTypeError("if condition is not a bit", c.span)
        if cond.kind == "lit":
            saved = dict(self.vars)
            self.run(c.then if cond.value else c.orelse)
            self.vars = saved
            return
        if cond.kind != "link":
            raise UnknownBitOrigin(f"cannot branch on {pretty_term(c.cond)}: its origin is unknown", c.span)
        self._unitary_only(c.then)
        self._unitary_only(c.orelse)
        self._reg_index(cond.value, c.span)
        for branch, val in ((c.then, 1), (c.orelse, 0)):
            self.controls.append((cond.value, val))
            try:
                self.run(branch)
            finally:
                self.controls.pop()

    # ----------------------------------------------------- computations

    def run(self, c, top=False, steps=None):
        """Execute ``c`` and return the value it returns."""
        while True:
            if isinstance(c, A.Return):
                return self.eval_term(c.value)
            notes = []
            if isinstance(c, A.BindCmd):
                if isinstance(c.cmd, A.Init):
                    self.exec_init(c.pattern, c.cmd)
                elif isinstance(c.cmd, A.Meas):
                    self.exec_meas(c.pattern, c.cmd)
                else:
                    self.exec_apply(c.cmd)
                    if c.pattern != A.PVar("_"):
                        self.bind(c.pattern, UNIT_V, c.span)
            elif isinstance(c, A.BindCall):
                if self.controls:
                    raise UnsupportedBranchEffect("call inside a branch on a measured bit", c.span)
                notes = self.exec_call(c)
            elif isinstance(c, A.IfThenElse):
                self.exec_if(c)
            else:
                raise TypeError(c)
            if steps is not None:
                text = " ".join(next(stmt_lines(replace(c, rest=A.Return(A.UnitLit()))))[1].split())
                snap = self.snapshot()
                steps.append(Step(len(steps), c.span, text, snap, render_snapshot(snap), notes))
            c = c.rest

    # ----------------------------------------------------- calls

    def _sample_points(self, extra=()):
        params = set(extra)
        if self.vector is not None:
            params |= self.vector.parameters
        return sample_points(params, self.opts.samples, self.opts.seed)

    def exec_call(self, c: A.BindCall):
        callee = self.eval_term(c.fn)
        if not isinstance(callee, CalleeV):
            raise QTypeError(f"{pretty_term(c.fn)} is not callable", c.span)
        if self.prop_mode:
            raise Unsupported("calls are not supported when the state is only known as a subspace", c.span)
        ty = callee.type
        qmap, bitargs, funcs = {}, {}, {}
        for i, arg in enumerate(c.args):
            if not isinstance(ty, A.TPi):
                raise QTypeError("too many arguments", c.span)
            v = self.eval_term(arg)
            b = ty.binder if ty.binder != "_" else f"_arg{i}"
            if ty.dom == A.QBIT:
                qmap[b] = self._qubit(v, arg.span or c.span, "argument")
            elif ty.dom == A.BIT:
                bitargs[b] = v
            elif is_bit_fn(ty.dom):
                if not isinstance(v, FuncV):
                    raise Unsupported("function arguments must be bit -> bit parameters", arg.span)
                funcs[b] = v.table
            elif ty.dom == A.UNIT:
                pass
            else:
                raise Unsupported("only qubit, bit, unit and bit -> bit arguments are supported", arg.span)
            ty = ty.cod
        if not isinstance(ty, A.THoare):
            raise Unsupported("partial application of a computation", c.span)
        hoare = ty
        if len(set(qmap.values())) != len(qmap):
            raise TargetError("the same qubit is passed twice", c.span)

        gtypes = dict(hoare.ghosts)
        for g, gt in hoare.ghosts:
            if gt == A.PROP:
                raise Unsupported(f"prop ghost {g} is not supported at call sites", c.span)
        pre_q = prop_names(hoare.pre)[0]
        pre_ghosts = [g for g in pre_q if gtypes.get(g) == A.QBIT]
        bit_ghosts = [g for g, t in hoare.ghosts if t == A.BIT]
        explicit = dict(c.ghosts)

        # classical arguments: literals are fixed, linked bits become controls
        ctl_regs, ctl_bits, fixed_bits = [], {}, {}
        for b, v in bitargs.items():
            if not isinstance(v, BVal) or v.kind == "unknown":
                raise UnknownBitOrigin(f"argument {b} has no known origin", c.span)
            if v.kind == "lit":
                fixed_bits[b] = v.value
            else:
                self._reg_index(v.value, c.span)
                if v.value not in ctl_bits:
                    ctl_regs.append(v.value)
                    ctl_bits[v.value] = []
                ctl_bits[v.value].append(b)
        bit_ghost_choices = []
        for g in bit_ghosts:
            if g in explicit:
                val = explicit[g]
                bv = self.eval_term(val) if isinstance(val, A.Var) else None
                if not isinstance(bv, BVal) or bv.kind != "lit":
                    raise Unsupported(f"ghost {g} must be bound to a literal bit", c.span)
                bit_ghost_choices.append((bv.value,))
            else:
                bit_ghost_choices.append((0, 1))

        # result naming
        results = flatten_pattern(hoare.result, hoare.rtype)
        if isinstance(c.pattern, A.PVar) and len(results) > 1:
            if c.pattern.name != "_":
                raise Unsupported("bind structured results with a matching tuple pattern", c.span)
            caller = [A.PVar("_")] * len(results)
        else:
            caller = [p for p, _ in flatten_pattern(c.pattern, hoare.rtype)]
            caller = [A.PVar(p) for p in caller]
        res_names = {}
        for (rn, _), cp in zip(results, caller):
            res_names[rn] = cp.name if cp.name != "_" else self.fresh_name("_r")

        # frame-independent pieces of the effect
        post_facts, post_class, post_bits = [], [], []
        for f in A.conjuncts(hoare.post):
            if isinstance(f, A.EqQ) or (isinstance(f, A.InQ) and len(f.subspace.vectors) == 1):
                post_facts.append(f)
            elif isinstance(f, A.Class):
                post_class.extend(f.vars)
            elif isinstance(f, A.EqC):
                post_bits.append(f)
        pre_facts = []
        for f in A.conjuncts(hoare.pre):
            if isinstance(f, A.EqQ) or (isinstance(f, A.InQ) and len(f.subspace.vectors) == 1):
                pre_facts.append(f)
            elif isinstance(f, (A.EqC, A.Top)):
                continue
            else:
                raise Unsupported("callee precondition must be a conjunction of =q facts", f.span)
        fp_names = list(qmap) + pre_ghosts  # callee-side names of the footprint
        covered = [v for f in pre_facts for v in f.vars]
        if len(set(covered)) != len(covered) or any(v not in fp_names for v in covered):
            raise Unsupported("callee precondition facts must cover distinct arguments or ghosts", hoare.pre.span)
        out_names = [v for f in post_facts for v in f.vars]
        if len(set(out_names)) != len(out_names):
            raise UnderdeterminedPostcondition("callee postcondition constrains a qubit twice", hoare.post.span)

        ctl_combos = list(itertools.product((0, 1), repeat=len(ctl_regs)))
        maps, projs = [], []
        for combo in ctl_combos:
            bits = dict(fixed_bits)
            for r, val in zip(ctl_regs, combo):
                for b in ctl_bits[r]:
                    bits[b] = val
            m, p = self._call_map(pre_facts, post_facts, post_bits, fp_names, out_names, covered,
                                  bits, bit_ghosts, bit_ghost_choices, funcs, c.span)
            maps.append(m)
            projs.append(p)
        big_map = _block_diag(maps, len(ctl_regs))
        big_proj = _block_diag(projs, len(ctl_regs))

        # ghost binding
        arg_regs = list(qmap.values())
        bound = {}
        for g in pre_ghosts:
            if g in explicit:
                bound[g] = self._explicit_register(explicit[g], c.span)
        search = [g for g in pre_ghosts if g not in bound]
        pre_text = pretty_prop(hoare.pre)
        if search:
            candidates = [r for r in self.layout.names if r not in arg_regs and r not in ctl_regs and r not in bound.values()]
            ok = []
            for choice in itertools.permutations(candidates, len(search)):
                trial = {**bound, **dict(zip(search, choice))}
                regs = ctl_regs + arg_regs + [trial[g] for g in pre_ghosts]
                if self._pre_holds(big_proj, regs):
                    ok.append(trial)
            if len(ok) > 1:
                opts = "; ".join(", ".join(f"{g} := {r}" for g, r in sorted(t.items())) for t in ok)
                raise AmbiguousGhostBinding(
                    f"ghosts of {callee.name} can be bound in several ways ({opts}); use `with {{...}}`", c.span)
            if not ok:
                self.obligations.append(Obligation(CALLPRE, c.span, render_snapshot(self.snapshot()), pre_text,
                                                   Verdict(False, EXACT), f"no binding of ghosts {', '.join(search)} satisfies the precondition of {callee.name}"))
                raise _Abort()
            bound = ok[0]
        names_map = {**qmap, **bound}
        inst_pre = subst_prop(hoare.pre, names_map)
        fp_regs = ctl_regs + arg_regs + [bound[g] for g in pre_ghosts]

        # FrameSep
        rest = [r for r in self.layout.names if r not in fp_regs]
        frame = frame_facts(self.vector, self.layout.names, fp_regs) if rest else []
        before = render_snapshot(self.snapshot())
        if rest and fp_regs:
            part = [self.layout.index(r) for r in fp_regs]
            pts = self._sample_points()
            mode = SAMPLED if self.vector.parameters else EXACT
            bad = None
            for pt in pts:
                v = self.vector.instantiate(pt)
                if schmidt_rank(v, part, tol=1e-7) > 1:
                    bad = pt
                    break
            verdict = Verdict(bad is None, mode, bad if (bad is not None and mode == SAMPLED) else None)
            self.obligations.append(Obligation(FRAMESEP, c.span, before, f"separable({', '.join(fp_regs)})", verdict,
                                               "" if verdict.holds else f"footprint of {callee.name} is entangled with the frame"))
            if not verdict.holds:
                raise FrameSepViolation(f"footprint {', '.join(fp_regs)} of {callee.name} is entangled with the rest of the state", c.span)

        # CallPre
        holds = self._pre_holds(big_proj, fp_regs)
        detail = ", ".join(f"{g} := {bound[g]}" for g in pre_ghosts)
        self.obligations.append(Obligation(CALLPRE, c.span, before, pretty_prop(inst_pre),
                                           Verdict(holds, EXACT, detail=f"ghosts {detail}" if detail else ""),
                                           "" if holds else f"precondition of {callee.name} does not hold"))
        if not holds:
            raise PreconditionFailure(f"precondition of {callee.name} does not hold: {pretty_prop(inst_pre)}", c.span)

        # effect
        out_regs = []
        kinds = []
        result_bits = {rn: res_names[rn] for rn, rt in results if rt == A.BIT}
        for name in out_names:
            if name in qmap:
                out_regs.append(qmap[name])
                kinds.append(self.layout.kind(qmap[name]))
            elif name in bound:
                out_regs.append(bound[name])
                kinds.append(self.layout.kind(bound[name]))
            elif name in res_names:
                out_regs.append(res_names[name])
                kinds.append(L.QUBIT)
            elif gtypes.get(name) == A.QBIT:
                if name.startswith("e_") and name[2:] in result_bits:
                    base = f"e_{result_bits[name[2:]]}"
                else:
                    base = name
                taken = set(self.layout.names) - set(fp_regs)
                reg = base
                k = 1
                while reg in taken or reg in self.dead or reg in out_regs:
                    reg = f"{base}{k}"
                    k += 1
                out_regs.append(reg)
                kinds.append(L.GHOST)
            else:
                raise UnderdeterminedPostcondition(f"postcondition mentions unknown qubit {name}", hoare.post.span)
        in_idx = [self.layout.index(r) for r in fp_regs]
        self._cap(len(ctl_regs) + len(out_regs) + len(rest))
        self.vector = apply_map(self.vector, big_map, in_idx, len(ctl_regs) + len(out_regs), self.opts.max_registers)
        new_entries = [(r, self.layout.kind(r)) for r in ctl_regs] + list(zip(out_regs, kinds))
        new_entries += [(r, self.layout.kind(r)) for r in rest]
        self.layout = L.RegisterLayout(tuple(new_entries))

        # consumed inputs
        for cname, reg in list(qmap.items()) + list(bound.items()):
            if reg not in out_regs:
                reason = "class" if cname in post_class else "call"
                self.dead[reg] = reason
                for var, v in self.vars.items():
                    if v == QVal(reg):
                        self.consumed[var] = reason

        # results
        value_of = {}
        for rn, rt in results:
            cn = res_names[rn]
            if rt == A.QBIT:
                if cn not in out_regs:
                    raise UnderdeterminedPostcondition(f"result {rn} of {callee.name} is not determined by its postcondition", c.span)
                value_of[rn] = QVal(cn)
            elif rt == A.BIT:
                gname = f"e_{rn}"
                if gname in out_names:
                    value_of[rn] = BVal("link", out_regs[out_names.index(gname)])
                else:
                    value_of[rn] = self._result_bit(rn, post_bits, fixed_bits, funcs, ctl_regs)
            elif rt == A.UNIT:
                value_of[rn] = UNIT_V
            else:
                raise Unsupported("results must be qubits, bits or unit", c.span)
        self.bind(c.pattern, _rebuild(hoare.result, value_of), c.span)

        inst_post = subst_prop(hoare.post, {**names_map, **dict(zip(out_names, out_regs))},
                               bits={rn: res_names[rn] for rn, rt in results if rt == A.BIT})
        if any(g not in explicit for g in bit_ghosts):
            return []  # the callee post still mentions enumerated ghosts
        return [" ∧ ".join([pretty_prop(inst_post)] + frame)]

    def _explicit_register(self, val, span):
        if isinstance(val, A.Var):
            if val.name in self.vars:
                return self._qubit(self.vars[val.name], span, "ghost binding")
            if val.name in self.layout:
                return val.name
        raise QTypeError("qubit ghosts must be bound to a live qubit or register", span)

    def _pre_holds(self, proj, regs):
        idx = [self.layout.index(r) for r in regs]
        k = len(idx)
        resid = apply_map(self.vector, np.eye(2**k) - proj, idx, k, self.opts.max_registers)
        return bool(np.all(np.abs(resid.coeffs) <= MAP_TOL * 10))

    def _result_bit(self, rn, post_bits, fixed_bits, funcs, ctl_regs):
        for f in post_bits:
            if f.bit != rn:
                continue
            if ctl_regs:
                return BVal("unknown")
            try:
                env = self.env.extend(bits=fixed_bits, funcs=funcs)
                return BVal("lit", eval_bit(f.value, env))
            except QhttError:
                return BVal("unknown")
        return BVal("unknown")

    def _call_map(self, pre_facts, post_facts, post_bits, fp_names, out_names, covered,
                  bits, bit_ghosts, bit_ghost_choices, funcs, span):
        """Linear map induced by the callee specification for fixed classical inputs."""
        free = [n for n in fp_names if n not in covered]
        env = self.env.extend(funcs=funcs)
        cols_v, cols_w = [], []
        for gb in itertools.product(*bit_ghost_choices) if bit_ghosts else [()]:
            benv = env.extend(bits={**bits, **dict(zip(bit_ghosts, gb))})
            # symbolic pre and post over the callee's own vector ghosts
            pre_vec, order = SymVector.scalar_one(), []
            for f in pre_facts:
                e = f.state if isinstance(f, A.EqQ) else f.subspace.vectors[0]
                pre_vec = tensor(pre_vec, eval_vector(e, benv, len(f.vars)))
                order.extend(f.vars)
            post_vec, porder = SymVector.scalar_one(), []
            for f in post_facts:
                e = f.state if isinstance(f, A.EqQ) else f.subspace.vectors[0]
                post_vec = tensor(post_vec, eval_vector(e, benv, len(f.vars)))
                porder.extend(f.vars)
            if porder:
                post_vec = permute(post_vec, [porder.index(n) for n in out_names])
            params = pre_vec.parameters
            extra = post_vec.parameters - params
            if extra:
                raise UnderdeterminedPostcondition(
                    f"postcondition mentions {', '.join(sorted(extra))} which the precondition does not fix", span)
            basis_points = _basis_points(params)
            for pt in basis_points:
                pv = pre_vec.instantiate(pt)
                wv = post_vec.instantiate(pt)
                for j in range(2 ** len(free)):
                    fv = np.zeros(2 ** len(free), dtype=np.complex128)
                    fv[j] = 1
                    full = np.kron(pv, fv)
                    ordr = order + free
                    full = _reorder(full, ordr, fp_names)
                    cols_v.append(full)
                    cols_w.append(wv if not free else None)
        if free:
            raise UnderdeterminedPostcondition(
                f"precondition leaves {', '.join(free)} unconstrained; the effect is not determined", span)
        v = np.stack(cols_v, axis=1)
        w = np.stack(cols_w, axis=1)
        pinv = np.linalg.pinv(v, rcond=1e-10)
        m = w @ pinv
        if np.linalg.norm(m @ v - w) > 1e-7:
            raise Unsupported("callee postcondition is not a linear function of its precondition", span)
        if np.linalg.norm(v.conj().T @ v - w.conj().T @ w) > 1e-7:
            raise UnderdeterminedPostcondition("callee specification does not preserve norms; cannot compute its effect", span)
        return m, v @ pinv


def _reorder(vec, have, want):
    if have == want:
        return vec
    n = len(have)
    t = vec.reshape((2,) * n)
    t = np.transpose(t, [have.index(x) for x in want])
    return t.reshape(-1)


def _basis_points(params):
    """One assignment per basis vector of every symbolic vector in ``params``."""
    from ..props.sampling import group_parameters

    dims = group_parameters(params)
    if not dims:
        return [{}]
    names = sorted(dims)
    out = []
    for idx in itertools.product(*[range(dims[n]) for n in names]):
        pt = {}
        for n, i in zip(names, idx):
            for j in range(dims[n]):
                pt[f"{n}[{j}]"] = 1.0 if j == i else 0.0
        out.append(pt)
    return out


def _block_diag(mats, nctl):
    """sum_c |c><c| (x) M_c over control combinations in binary order."""
    if nctl == 0:
        return mats[0]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _rebuild(pat, values):
    if isinstance(pat, A.PVar):
        return values.get(pat.name, UNIT_V)
    return PairV(_rebuild(pat.left, values), _rebuild(pat.right, values))
