"""Abstract syntax for the QHTT surface language.

Every node carries a source ``span``; spans are excluded from equality so that
structurally identical trees compare equal regardless of where they came from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def merge(self, other: "Span | None") -> "Span":
        if other is None:
            return self
        return Span(self.line, self.col, other.end_line, other.end_col)

    def to_dict(self):
        return {"line": self.line, "col": self.col, "end_line": self.end_line, "end_col": self.end_col}


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class TBase:
    name: str  # unit | bit | qbit | vector | complex | unitary | prop
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class TPair:
    left: "QType"
    right: "QType"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class TPi:
    binder: str  # "_" when non-dependent
    dom: "QType"
    cod: "QType"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class THoare:
    result: "Pattern"
    rtype: "QType"
    ghosts: tuple  # ((name, QType), ...)
    pre: "Prop"
    post: "Prop"
    span: Optional[Span] = _span()


QType = Union[TBase, TPair, TPi, THoare]

BASE_TYPES = ("unit", "bit", "qbit", "vector", "complex", "unitary", "prop")
UNIT, BIT, QBIT, VECTOR, COMPLEX, UNITARY, PROP = (TBase(n) for n in BASE_TYPES)


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class PVar:
    name: str  # "_" discards
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PPair:
    left: "Pattern"
    right: "Pattern"
    span: Optional[Span] = _span()


Pattern = Union[PVar, PPair]


def pattern_names(p: Pattern) -> list[str]:
    if isinstance(p, PVar):
        return [p.name]
    return pattern_names(p.left) + pattern_names(p.right)


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BitLit:
    value: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class UnitLit:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PairI:
    left: "Term"
    right: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Fst:
    arg: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Snd:
    arg: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lambda:
    param: str
    ptype: Optional[QType]
    body: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Do:
    body: "Comp"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class GateConst:
    name: str  # I X Y Z H CX CZ
    span: Optional[Span] = _span()


Term = Union[Var, BitLit, UnitLit, PairI, Fst, Snd, Lambda, App, Do, GateConst]


# ---------------------------------------------------------------- commands and computations


@dataclass(frozen=True)
class Init:
    bit: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Meas:
    qubit: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Apply:
    gate: Term
    targets: Term
    span: Optional[Span] = _span()


Cmd = Union[Init, Meas, Apply]


@dataclass(frozen=True)
class Return:
    value: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BindCmd:
    pattern: Pattern
    cmd: Cmd
    rest: "Comp"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BindCall:
    pattern: Pattern
    fn: Term
    args: tuple  # (Term, ...)
    ghosts: tuple  # ((name, Term | AmpExpr), ...)
    rest: "Comp"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IfThenElse:
    cond: Term
    then: "Comp"
    orelse: "Comp"
    rest: "Comp"
    span: Optional[Span] = _span()


Comp = Union[Return, BindCmd, BindCall, IfThenElse]


# ---------------------------------------------------------------- bit expressions


@dataclass(frozen=True)
class BConst:
    value: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BVar:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BApp:
    fn: str
    arg: "BitExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BXor:
    left: "BitExpr"
    right: "BitExpr"
    span: Optional[Span] = _span()


BitExpr = Union[BConst, BVar, BApp, BXor]


# ---------------------------------------------------------------- amplitude / state expressions


@dataclass(frozen=True)
class KetE:
    bits: tuple  # (BitExpr, ...)
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class KetSym:
    symbol: str  # "+" or "-"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class NumE:
    text: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ImagE:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class SqrtE:
    arg: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class VecName:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class AddE:
    left: "AmpExpr"
    right: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class SubE:
    left: "AmpExpr"
    right: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MulE:
    left: "AmpExpr"
    right: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class DivE:
    left: "AmpExpr"
    right: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class NegE:
    arg: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class TensorE:
    left: "AmpExpr"
    right: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class GateAppE:
    gate: str
    power: Optional[BitExpr]
    arg: "AmpExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PowE:
    base: "AmpExpr"
    exp: BitExpr
    span: Optional[Span] = _span()


AmpExpr = Union[KetE, KetSym, NumE, ImagE, SqrtE, VecName, AddE, SubE, MulE, DivE, NegE, TensorE, GateAppE, PowE]


@dataclass(frozen=True)
class SpanE:
    vectors: tuple  # (AmpExpr, ...)
    span: Optional[Span] = _span()


# ---------------------------------------------------------------- propositions


@dataclass(frozen=True)
class Top:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Bottom:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class And:
    left: "Prop"
    right: "Prop"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Or:
    left: "Prop"
    right: "Prop"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Implies:
    left: "Prop"
    right: "Prop"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class InQ:
    vars: tuple
    subspace: SpanE
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class EqQ:
    vars: tuple
    state: AmpExpr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class EquivQ:
    left: tuple
    right: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class EquivCl:
    left: tuple
    right: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class EqC:
    bit: str
    value: BitExpr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Uniform:
    vars: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Separable:
    vars: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Class:
    vars: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class UnitaryOn:
    gate: str
    vars: tuple
    prop: "Prop"
    span: Optional[Span] = _span()


Prop = Union[Top, Bottom, And, Or, Implies, InQ, EqQ, EquivQ, EquivCl, EqC, Uniform, Separable, Class, UnitaryOn]

STATE_PREDICATES = (Uniform, Separable, Class)


def conjuncts(p: Prop) -> list:
    if isinstance(p, And):
        return conjuncts(p.left) + conjuncts(p.right)
    if isinstance(p, Top):
        return []
    return [p]


def conj(props) -> Prop:
    props = list(props)
    if not props:
        return Top()
    out = props[-1]
    for p in reversed(props[:-1]):
        out = And(p, out)
    return out


def prop_vars(p: Prop) -> list[str]:
    """Quantum variable names mentioned by ``p``, in order of appearance."""
    if isinstance(p, (And, Or, Implies)):
        out = prop_vars(p.left)
        return out + [v for v in prop_vars(p.right) if v not in out]
    if isinstance(p, (InQ, EqQ, Uniform, Separable, Class)):
        return list(p.vars)
    if isinstance(p, (EquivQ, EquivCl)):
        return list(p.left) + list(p.right)
    if isinstance(p, UnitaryOn):
        inner = prop_vars(p.prop)
        return list(p.vars) + [v for v in inner if v not in p.vars]
    return []


# ---------------------------------------------------------------- declarations


@dataclass(frozen=True)
class Declaration:
    name: str
    type: QType
    params: tuple  # (name, ...)
    body: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Program:
    decls: tuple
    span: Optional[Span] = _span()

    def get(self, name) -> Declaration:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)
