"""Pretty-printer.  Output re-parses to a structurally equal tree."""

from __future__ import annotations

from . import ast as A

INDENT = "  "

# amplitude precedence levels
_ADD, _MUL, _TENSOR, _NEG, _GATE, _POW, _ATOM = range(1, 8)


def _join(*parts):
    # "--" would start a comment
    out = ""
    for p in parts:
        if out.endswith("-") and p.startswith("-"):
            out += " "
        out += p
    return out


# ------------------------------------------------------------ types


def pretty_type(t) -> str:
    if isinstance(t, A.TBase):
        return t.name
    if isinstance(t, A.TPair):
        left = pretty_type(t.left)
        if isinstance(t.left, (A.TPair, A.TPi)):
            left = f"({left})"
        right = pretty_type(t.right)
        if isinstance(t.right, A.TPi):
            right = f"({right})"
        return f"{left} ⊗ {right}"
    if isinstance(t, A.TPi):
        if t.binder != "_":
            return f"({t.binder}: {pretty_type(t.dom)}) -> {pretty_type(t.cod)}"
        dom = pretty_type(t.dom)
        if isinstance(t.dom, A.TPi):
            dom = f"({dom})"
        return f"{dom} -> {pretty_type(t.cod)}"
    if isinstance(t, A.THoare):
        out = f"QST ({pretty_pattern(t.result)}: {pretty_type(t.rtype)})"
        if t.ghosts:
            out += " {" + ", ".join(f"{n}: {pretty_type(ty)}" for n, ty in t.ghosts) + "}"
        return out + f" (requires {{{pretty_prop(t.pre)}}}) (ensures {{{pretty_prop(t.post)}}})"
    raise TypeError(f"not a type: {t!r}")


def pretty_pattern(p) -> str:
    if isinstance(p, A.PVar):
        return p.name
    items = []
    while isinstance(p, A.PPair):
        items.append(pretty_pattern(p.left))
        p = p.right
    items.append(pretty_pattern(p))
    return "(" + ", ".join(items) + ")"


# ------------------------------------------------------------ bits and amplitudes


def pretty_bit(b, atom=False) -> str:
    if isinstance(b, A.BConst):
        return str(b.value)
    if isinstance(b, A.BVar):
        return b.name
    if isinstance(b, A.BApp):
        return f"{b.fn}({pretty_bit(b.arg)})"
    if isinstance(b, A.BXor):
        right = pretty_bit(b.right)
        if isinstance(b.right, A.BXor):
            right = f"({right})"
        s = f"{pretty_bit(b.left)} ⊕ {right}"
        return f"({s})" if atom else s
    raise TypeError(f"not a bit expression: {b!r}")


def _level(e) -> int:
    if isinstance(e, (A.AddE, A.SubE)):
        return _ADD
    if isinstance(e, (A.MulE, A.DivE)):
        return _MUL
    if isinstance(e, A.TensorE):
        return _TENSOR
    if isinstance(e, A.NegE):
        return _NEG
    if isinstance(e, A.GateAppE):
        return _GATE
    if isinstance(e, A.PowE):
        return _POW
    return _ATOM


def _amp_at(e, level) -> str:
    s = pretty_amp(e)
    return f"({s})" if _level(e) < level else s


def pretty_amp(e) -> str:
    if isinstance(e, A.KetE):
        if all(isinstance(b, A.BConst) for b in e.bits):
            return "|" + "".join(str(b.value) for b in e.bits) + "⟩"
        return "|" + ", ".join(pretty_bit(b) for b in e.bits) + "⟩"
    if isinstance(e, A.KetSym):
        return f"|{e.symbol}⟩"
    if isinstance(e, A.NumE):
        return e.text
    if isinstance(e, A.ImagE):
        return "i"
    if isinstance(e, A.SqrtE):
        return f"sqrt({pretty_amp(e.arg)})"
    if isinstance(e, A.VecName):
        return e.name
    for cls, op, lvl in ((A.AddE, "+", _ADD), (A.SubE, "-", _ADD), (A.MulE, "*", _MUL), (A.DivE, "/", _MUL)):
        if isinstance(e, cls):
            return _join(_amp_at(e.left, lvl), op, _amp_at(e.right, lvl + 1))
    if isinstance(e, A.TensorE):
        return f"{_amp_at(e.left, _TENSOR)} ⊗ {_amp_at(e.right, _TENSOR + 1)}"
    if isinstance(e, A.NegE):
        return _join("-", _amp_at(e.arg, _NEG))
    if isinstance(e, A.GateAppE):
        head = e.gate if e.power is None else f"{e.gate}^{pretty_bit(e.power, atom=True)}"
        return f"{head} · {_amp_at(e.arg, _GATE)}"
    if isinstance(e, A.PowE):
        return f"{_amp_at(e.base, _ATOM)}^{pretty_bit(e.exp, atom=True)}"
    raise TypeError(f"not a state expression: {e!r}")


# ------------------------------------------------------------ propositions


def _vars(names) -> str:
    return names[0] if len(names) == 1 else "(" + ", ".join(names) + ")"


def _prop_level(p) -> int:
    if isinstance(p, A.Implies):
        return 1
    if isinstance(p, A.Or):
        return 2
    if isinstance(p, A.And):
        return 3
    return 4


def _prop_at(p, level) -> str:
    s = pretty_prop(p)
    return f"({s})" if _prop_level(p) < level else s


def pretty_prop(p) -> str:
    if isinstance(p, A.Top):
        return "⊤"
    if isinstance(p, A.Bottom):
        return "⊥"
    if isinstance(p, A.Implies):
        return f"{_prop_at(p.left, 2)} => {_prop_at(p.right, 1)}"
    if isinstance(p, A.Or):
        return f"{_prop_at(p.left, 3)} ∨ {_prop_at(p.right, 2)}"
    if isinstance(p, A.And):
        return f"{_prop_at(p.left, 4)} ∧ {_prop_at(p.right, 3)}"
    if isinstance(p, A.InQ):
        return f"{_vars(p.vars)} ∈q span{{{', '.join(pretty_amp(v) for v in p.subspace.vectors)}}}"
    if isinstance(p, A.EqQ):
        return f"{_vars(p.vars)} =q {pretty_amp(p.state)}"
    if isinstance(p, A.EquivQ):
        return f"{_vars(p.left)} ≡q {_vars(p.right)}"
    if isinstance(p, A.EquivCl):
        return f"{_vars(p.left)} ≡cl {_vars(p.right)}"
    if isinstance(p, A.EqC):
        return f"{p.bit} =c {pretty_bit(p.value)}"
    if isinstance(p, A.Uniform):
        return f"uniform({', '.join(p.vars)})"
    if isinstance(p, A.Separable):
        return f"separable({', '.join(p.vars)})"
    if isinstance(p, A.Class):
        return f"class({', '.join(p.vars)})"
    if isinstance(p, A.UnitaryOn):
        return f"({p.gate} on {_vars(p.vars)}) · ({pretty_prop(p.prop)})"
    raise TypeError(f"not a proposition: {p!r}")


# ------------------------------------------------------------ terms and computations


def _term_atom(t, indent) -> str:
    s = pretty_term(t, indent)
    if isinstance(t, (A.App, A.Lambda, A.Do)):
        return f"({s})"
    return s


def pretty_term(t, indent=0) -> str:
    if isinstance(t, A.Var):
        return t.name
    if isinstance(t, A.BitLit):
        return str(t.value)
    if isinstance(t, A.UnitLit):
        return "()"
    if isinstance(t, A.GateConst):
        return t.name
    if isinstance(t, A.PairI):
        items = []
        while isinstance(t, A.PairI):
            items.append(pretty_term(t.left, indent))
            t = t.right
        items.append(pretty_term(t, indent))
        return "(" + ", ".join(items) + ")"
    if isinstance(t, A.Fst):
        return f"fst {_term_atom(t.arg, indent)}"
    if isinstance(t, A.Snd):
        return f"snd {_term_atom(t.arg, indent)}"
    if isinstance(t, A.Lambda):
        binder = t.param if t.ptype is None else f"({t.param}: {pretty_type(t.ptype)})"
        return f"fun {binder} -> {pretty_term(t.body, indent)}"
    if isinstance(t, A.App):
        fn = pretty_term(t.fn, indent) if isinstance(t.fn, A.App) else _term_atom(t.fn, indent)
        return f"{fn} {_term_atom(t.arg, indent)}"
    if isinstance(t, A.Do):
        if isinstance(t.body, A.Return):
            return f"do return {pretty_term(t.body.value, indent)}"
        return "do " + _block(t.body, indent)
    raise TypeError(f"not a term: {t!r}")


def _block(c, indent) -> str:
    lines = _stmts(c, indent + 1)
    if not lines:
        return "{ }"
    return "{\n" + "\n".join(lines) + "\n" + INDENT * indent + "}"


def _is_unit_return(c):
    return isinstance(c, A.Return) and isinstance(c.value, A.UnitLit)


def pretty_cmd(cmd, indent=0) -> str:
    if isinstance(cmd, A.Init):
        return f"init {cmd.bit}"
    if isinstance(cmd, A.Meas):
        return f"meas {_term_atom(cmd.qubit, indent)}"
    if isinstance(cmd, A.Apply):
        targets = pretty_term(cmd.targets, indent)
        if not isinstance(cmd.targets, A.PairI):
            targets = f"({targets})"
        return f"apply {_term_atom(cmd.gate, indent)} to {targets}"
    raise TypeError(f"not a command: {cmd!r}")


def _ghosts(ghosts) -> str:
    if not ghosts:
        return ""
    items = []
    for name, value in ghosts:
        v = value.name if isinstance(value, A.Var) else pretty_amp(value)
        items.append(f"{name} := {v}")
    return " with {" + ", ".join(items) + "}"


def stmt_lines(c, indent=0):
    """Yield ``(comp_node, text)`` for each statement of ``c``, final return included."""
    pad = INDENT * indent
    while True:
        if isinstance(c, A.Return):
            if not _is_unit_return(c):
                yield c, pad + f"return {pretty_term(c.value, indent)}"
            return
        if isinstance(c, A.BindCmd):
            cmd = pretty_cmd(c.cmd, indent)
            if isinstance(c.cmd, A.Apply) and c.pattern == A.PVar("_"):
                yield c, pad + cmd
            else:
                yield c, pad + f"{pretty_pattern(c.pattern)} <- {cmd}"
        elif isinstance(c, A.BindCall):
            call = " ".join([_term_atom(c.fn, indent)] + [_term_atom(a, indent) for a in c.args]) + _ghosts(c.ghosts)
            if c.pattern == A.PVar("_"):
                yield c, pad + call
            else:
                yield c, pad + f"{pretty_pattern(c.pattern)} <- {call}"
        elif isinstance(c, A.IfThenElse):
            s = f"if {pretty_term(c.cond, indent)} then {_block(c.then, indent)}"
            if not _is_unit_return(c.orelse):
                s += f" else {_block(c.orelse, indent)}"
            yield c, pad + s
        else:
            raise TypeError(f"not a computation: {c!r}")
        c = c.rest


def _stmts(c, indent):
    return [text for _, text in stmt_lines(c, indent)]


def pretty_comp(c, indent=0) -> str:
    return "\n".join(_stmts(c, indent))


# ------------------------------------------------------------ declarations


def pretty_decl(d: A.Declaration) -> str:
    head = " ".join((d.name,) + tuple(d.params))
    return f"{d.name} : {pretty_type(d.type)}\n{head} = {pretty_term(d.body)}\n"


def pretty_program(p: A.Program) -> str:
    return "\n".join(pretty_decl(d) for d in p.decls)


_TYPES = (A.TBase, A.TPair, A.TPi, A.THoare)
_PROPS = (
    A.Top, A.Bottom, A.And, A.Or, A.Implies, A.InQ, A.EqQ, A.EquivQ, A.EquivCl, A.EqC,
    A.Uniform, A.Separable, A.Class, A.UnitaryOn,
)
_AMPS = (
    A.KetE, A.KetSym, A.NumE, A.ImagE, A.SqrtE, A.VecName, A.AddE, A.SubE, A.MulE, A.DivE,
    A.NegE, A.TensorE, A.GateAppE, A.PowE,
)
_TERMS = (A.Var, A.BitLit, A.UnitLit, A.PairI, A.Fst, A.Snd, A.Lambda, A.App, A.Do, A.GateConst)
_COMPS = (A.Return, A.BindCmd, A.BindCall, A.IfThenElse)


def pretty(node) -> str:
    """Render any AST node as source text."""
    if isinstance(node, A.Program):
        return pretty_program(node)
    if isinstance(node, A.Declaration):
        return pretty_decl(node)
    if isinstance(node, _TYPES):
        return pretty_type(node)
    if isinstance(node, _PROPS):
        return pretty_prop(node)
    if isinstance(node, _AMPS):
        return pretty_amp(node)
    if isinstance(node, (A.BConst, A.BVar, A.BApp, A.BXor)):
        return pretty_bit(node)
    if isinstance(node, _TERMS):
        return pretty_term(node)
    if isinstance(node, _COMPS):
        return pretty_comp(node)
    if isinstance(node, (A.Init, A.Meas, A.Apply)):
        return pretty_cmd(node)
    if isinstance(node, (A.PVar, A.PPair)):
        return pretty_pattern(node)
    if isinstance(node, A.SpanE):
        return "span{" + ", ".join(pretty_amp(v) for v in node.vectors) + "}"
    raise TypeError(f"cannot pretty-print {type(node).__name__}")
