"""Recursive-descent parser for ``.qh`` sources.

Newlines separate statements inside ``{ ... }`` blocks and end top-level
definitions; everywhere else (types, propositions, anything in parentheses)
they are insignificant.
"""

from __future__ import annotations

from contextlib import contextmanager

from ..errors import ParseError
from . import ast as A
from .lexer import Token, tokenize

GATE_ARITY = {"I": 1, "X": 1, "Y": 1, "Z": 1, "H": 1, "CX": 2, "CZ": 2}

_SCALAR = "scalar"
_PRED_OPS = ("∈q", "=q", "≡q", "≡cl", "=c")


class Parser:
    def __init__(self, text: str):
        self.toks: list[Token] = tokenize(text)
        self.i = 0
        self.nl = [False]
        self._exp_pos = -1
        self._expected: set[str] = set()

    # ------------------------------------------------------------ token plumbing

    def _index(self, k=0):
        j = self.i
        sig = self.nl[-1]
        seen = -1
        while True:
            if not sig:
                while self.toks[j].kind == "NEWLINE":
                    j += 1
            seen += 1
            if seen == k or self.toks[j].kind == "EOF":
                return j
            j += 1

    def peek(self, k=0) -> Token:
        return self.toks[self._index(k)]

    def _note(self, what):
        j = self._index()
        if j != self._exp_pos:
            self._exp_pos, self._expected = j, set()
        self._expected.add(what)

    def at(self, kind, value=None, k=0) -> bool:
        t = self.peek(k)
        if k == 0:
            self._note(value if value is not None else kind)
        return t.kind == kind and (value is None or t.value == value)

    def at_sym(self, value, k=0):
        return self.at("SYM", value, k)

    def at_kw(self, value, k=0):
        return self.at("KW", value, k)

    def advance(self) -> Token:
        j = self._index()
        t = self.toks[j]
        self.i = j + 1
        return t

    def accept(self, kind, value=None):
        if self.at(kind, value):
            return self.advance()
        return None

    def expect(self, kind, value=None) -> Token:
        if self.at(kind, value):
            return self.advance()
        self.error(f"expected {value or kind}")

    def expect_sym(self, value):
        return self.expect("SYM", value)

    def expect_kw(self, value):
        return self.expect("KW", value)

    def error(self, message, tok=None):
        tok = tok or self.peek()
        got = "end of input" if tok.kind == "EOF" else repr(tok.value)
        expected = self._expected if self._exp_pos == self._index() else set()
        raise ParseError(f"{message}, got {got}", tok.span, expected)

    @contextmanager
    def newlines(self, significant: bool):
        self.nl.append(significant)
        try:
            yield
        finally:
            self.nl.pop()

    def skip_newlines(self):
        while self.toks[self.i].kind == "NEWLINE":
            self.i += 1

    def span_from(self, start: Token):
        prev = self.toks[self.i - 1] if self.i > 0 else start
        return start.span.merge(prev.span)

    # ------------------------------------------------------------ program

    def parse_program(self) -> A.Program:
        self.skip_newlines()
        if self.peek().kind == "EOF":
            self._note("declaration")
            self.error("expected declaration")
        start = self.peek()
        decls = []
        seen = set()
        while self.peek().kind != "EOF":
            d = self.parse_decl()
            if d.name in seen:
                raise ParseError(f"duplicate declaration {d.name}", d.span)
            seen.add(d.name)
            decls.append(d)
        return A.Program(tuple(decls), span=self.span_from(start))

    def parse_decl(self) -> A.Declaration:
        start = self.peek()
        name = self.expect("IDENT").value
        self.expect_sym(":")
        ty = self.parse_type()
        tok = self.expect("IDENT")
        if tok.value != name:
            raise ParseError(f"definition of {tok.value} follows the signature of {name}", tok.span, (name,))
        params = []
        while self.at("IDENT"):
            params.append(self.advance().value)
        self.expect_sym("=")
        with self.newlines(True):
            body = self.parse_term()
            if not (self.at("NEWLINE") or self.at("EOF")):
                self.error("expected end of definition")
        return A.Declaration(name, ty, tuple(params), body, span=self.span_from(start))

    # ------------------------------------------------------------ types

    def parse_type(self) -> A.QType:
        start = self.peek()
        if self.at_sym("(") and self.at("IDENT", k=1) and self.at_sym(":", k=2):
            self.advance()
            with self.newlines(False):
                binder = self.advance().value
                self.advance()
                dom = self.parse_type()
                self.expect_sym(")")
            self.expect_sym("->")
            cod = self.parse_type()
            return A.TPi(binder, dom, cod, span=self.span_from(start))
        left = self.parse_type_prod()
        if self.accept("SYM", "->"):
            cod = self.parse_type()
            return A.TPi("_", left, cod, span=self.span_from(start))
        return left

    def parse_type_prod(self):
        start = self.peek()
        left = self.parse_type_atom()
        if self.accept("SYM", "⊗"):
            right = self.parse_type_prod()
            return A.TPair(left, right, span=self.span_from(start))
        return left

    def parse_type_atom(self):
        start = self.peek()
        for name in A.BASE_TYPES:
            if self.at_kw(name):
                self.advance()
                return A.TBase(name, span=start.span)
        if self.at_kw("QST"):
            return self.parse_hoare()
        if self.accept("SYM", "("):
            with self.newlines(False):
                t = self.parse_type()
                self.expect_sym(")")
            return t
        self.error("expected type")

    def parse_hoare(self):
        start = self.expect_kw("QST")
        with self.newlines(False):
            self.expect_sym("(")
            result = self.parse_pattern()
            self.expect_sym(":")
            rtype = self.parse_type()
            self.expect_sym(")")
            ghosts = []
            if self.accept("SYM", "{"):
                names = set()
                if not self.at_sym("}"):
                    while True:
                        tok = self.expect("IDENT")
                        if tok.value in names:
                            raise ParseError(f"duplicate ghost {tok.value}", tok.span)
                        names.add(tok.value)
                        self.expect_sym(":")
                        ghosts.append((tok.value, self.parse_type()))
                        if not self.accept("SYM", ","):
                            break
                self.expect_sym("}")
            self.expect_sym("(")
            self.expect_kw("requires")
            pre = self.parse_braced_prop()
            self.expect_sym(")")
            self.expect_sym("(")
            self.expect_kw("ensures")
            post = self.parse_braced_prop()
            self.expect_sym(")")
        return A.THoare(result, rtype, tuple(ghosts), pre, post, span=self.span_from(start))

    def parse_pattern(self) -> A.Pattern:
        start = self.peek()
        if self.accept("SYM", "("):
            with self.newlines(False):
                items = [self.parse_pattern()]
                while self.accept("SYM", ","):
                    items.append(self.parse_pattern())
                self.expect_sym(")")
            out = items[-1]
            for p in reversed(items[:-1]):
                out = A.PPair(p, out, span=self.span_from(start))
            return out
        tok = self.expect("IDENT")
        return A.PVar(tok.value, span=tok.span)

    # ------------------------------------------------------------ propositions

    def parse_braced_prop(self):
        self.expect_sym("{")
        with self.newlines(False):
            p = self.parse_prop()
            self.expect_sym("}")
        return p

    def parse_prop(self) -> A.Prop:
        start = self.peek()
        p = self.parse_implies()
        if self.accept("SYM", ","):
            rest = self.parse_prop()
            return A.And(p, rest, span=self.span_from(start))
        return p

    def parse_implies(self):
        start = self.peek()
        left = self.parse_or()
        if self.accept("SYM", "=>"):
            return A.Implies(left, self.parse_implies(), span=self.span_from(start))
        return left

    def parse_or(self):
        start = self.peek()
        left = self.parse_and()
        if self.accept("SYM", "∨"):
            return A.Or(left, self.parse_or(), span=self.span_from(start))
        return left

    def parse_and(self):
        start = self.peek()
        left = self.parse_prop_atom()
        if self.accept("SYM", "∧"):
            return A.And(left, self.parse_and(), span=self.span_from(start))
        return left

    def parse_prop_atom(self):
        start = self.peek()
        if self.accept("SYM", "⊤"):
            return A.Top(span=start.span)
        if self.accept("SYM", "⊥"):
            return A.Bottom(span=start.span)
        for kw, cls in (("uniform", A.Uniform), ("separable", A.Separable), ("class", A.Class)):
            if self.at_kw(kw):
                self.advance()
                self.expect_sym("(")
                names = self.parse_name_list()
                self.expect_sym(")")
                return cls(names, span=self.span_from(start))
        if self.at_sym("(") and self.at("GATE", k=1) and self.at_kw("on", k=2):
            self.advance()
            gate = self.advance().value
            self.advance()
            names = self.parse_vars()
            self.expect_sym(")")
            self.expect_sym("·")
            inner = self.parse_prop_atom()
            self._check_vars(names, start)
            if GATE_ARITY[gate] != len(names):
                raise ParseError(f"gate {gate} applied to {len(names)} variables", self.span_from(start))
            return A.UnitaryOn(gate, names, inner, span=self.span_from(start))
        if self.at("IDENT") or self.at_sym("("):
            save = self.i
            try:
                names = self.parse_vars()
                ok = any(self.at_sym(op) for op in _PRED_OPS)
            except ParseError:
                ok = False
            if ok:
                return self.parse_predicate(names, start)
            self.i = save
        if self.accept("SYM", "("):
            p = self.parse_prop()
            self.expect_sym(")")
            return p
        self.error("expected proposition")

    def parse_name_list(self):
        names = [self.expect("IDENT").value]
        while self.accept("SYM", ","):
            names.append(self.expect("IDENT").value)
        return tuple(names)

    def parse_vars(self):
        if self.accept("SYM", "("):
            names = self.parse_name_list()
            self.expect_sym(")")
            return names
        return (self.expect("IDENT").value,)

    def _check_vars(self, names, start, *more):
        allv = list(names) + [n for m in more for n in m]
        if len(set(allv)) != len(allv):
            raise ParseError(f"variable list {', '.join(allv)} repeats a name", self.span_from(start))

    def parse_predicate(self, names, start):
        self._check_vars(names, start)
        if self.accept("SYM", "∈q"):
            sp_start = self.peek()
            self.expect_kw("span")
            self.expect_sym("{")
            vecs = [self.parse_amp()]
            while self.accept("SYM", ","):
                vecs.append(self.parse_amp())
            self.expect_sym("}")
            for v in vecs:
                self._check_arity(v, len(names), start)
            return A.InQ(names, A.SpanE(tuple(vecs), span=self.span_from(sp_start)), span=self.span_from(start))
        if self.accept("SYM", "=q"):
            e = self.parse_amp()
            self._check_arity(e, len(names), start)
            return A.EqQ(names, e, span=self.span_from(start))
        for op, cls in (("≡q", A.EquivQ), ("≡cl", A.EquivCl)):
            if self.accept("SYM", op):
                other = self.parse_vars()
                self._check_vars(names, start, other)
                if len(other) != len(names):
                    raise ParseError(f"{op} relates lists of different length", self.span_from(start))
                return cls(names, other, span=self.span_from(start))
        self.expect_sym("=c")
        if len(names) != 1:
            raise ParseError("=c compares a single bit", self.span_from(start))
        return A.EqC(names[0], self.parse_bitexpr(), span=self.span_from(start))

    def _check_arity(self, e, n, start):
        ar = amp_arity(e)
        if ar == _SCALAR:
            raise ParseError("expected a state, found a scalar", self.span_from(start))
        if ar is not None and ar != n:
            raise ParseError(f"state on {ar} qubits assigned to {n} variables", self.span_from(start))

    # ------------------------------------------------------------ bit expressions

    def parse_bitexpr(self):
        start = self.peek()
        left = self.parse_bitatom()
        while self.accept("SYM", "⊕"):
            left = A.BXor(left, self.parse_bitatom(), span=self.span_from(start))
        return left

    def parse_bitatom(self):
        start = self.peek()
        if self.at("NUM"):
            tok = self.advance()
            if tok.value not in ("0", "1"):
                raise ParseError(f"bit literal must be 0 or 1, got {tok.value}", tok.span)
            return A.BConst(int(tok.value), span=tok.span)
        if self.at("IDENT"):
            name = self.advance().value
            if self.at_sym("(") and self.peek().span.col == self.toks[self.i - 1].span.end_col:
                self.advance()
                with self.newlines(False):
                    arg = self.parse_bitexpr()
                    self.expect_sym(")")
                return A.BApp(name, arg, span=self.span_from(start))
            return A.BVar(name, span=start.span)
        if self.accept("SYM", "("):
            with self.newlines(False):
                e = self.parse_bitexpr()
                self.expect_sym(")")
            return e
        self.error("expected bit expression")

    # ------------------------------------------------------------ amplitude expressions

    def parse_amp(self):
        start = self.peek()
        left = self.parse_amp_mul()
        while True:
            if self.accept("SYM", "+"):
                left = A.AddE(left, self.parse_amp_mul(), span=self.span_from(start))
            elif self.accept("SYM", "-"):
                left = A.SubE(left, self.parse_amp_mul(), span=self.span_from(start))
            else:
                return left

    def parse_amp_mul(self):
        start = self.peek()
        left = self.parse_amp_tensor()
        while True:
            if self.accept("SYM", "*"):
                left = A.MulE(left, self.parse_amp_tensor(), span=self.span_from(start))
            elif self.accept("SYM", "/"):
                left = A.DivE(left, self.parse_amp_tensor(), span=self.span_from(start))
            else:
                return left

    def parse_amp_tensor(self):
        start = self.peek()
        left = self.parse_amp_unary()
        while self.accept("SYM", "⊗"):
            left = A.TensorE(left, self.parse_amp_unary(), span=self.span_from(start))
        return left

    def parse_amp_unary(self):
        start = self.peek()
        if self.accept("SYM", "-"):
            return A.NegE(self.parse_amp_unary(), span=self.span_from(start))
        if self.at("GATE"):
            gate = self.advance().value
            power = None
            if self.accept("SYM", "^"):
                power = self.parse_bitatom()
            self.expect_sym("·")
            return A.GateAppE(gate, power, self.parse_amp_unary_gate(), span=self.span_from(start))
        return self.parse_amp_pow()

    def parse_amp_unary_gate(self):
        if self.at("GATE"):
            return self.parse_amp_unary()
        return self.parse_amp_pow()

    def parse_amp_pow(self):
        start = self.peek()
        base = self.parse_amp_atom()
        if self.accept("SYM", "^"):
            return A.PowE(base, self.parse_bitatom(), span=self.span_from(start))
        return base

    def parse_amp_atom(self):
        start = self.peek()
        if self.at("KET"):
            tok = self.advance()
            if tok.value in ("+", "-"):
                return A.KetSym(tok.value, span=tok.span)
            return A.KetE(tuple(A.BConst(int(c)) for c in tok.value), span=tok.span)
        if self.accept("SYM", "|"):
            with self.newlines(False):
                bits = [self.parse_bitexpr()]
                while self.accept("SYM", ","):
                    bits.append(self.parse_bitexpr())
                self.expect_sym(">")
            return A.KetE(tuple(bits), span=self.span_from(start))
        if self.at("NUM"):
            tok = self.advance()
            return A.NumE(tok.value, span=tok.span)
        if self.at_kw("sqrt"):
            self.advance()
            if self.at("NUM"):  # √2
                tok = self.advance()
                return A.SqrtE(A.NumE(tok.value, span=tok.span), span=self.span_from(start))
            self.expect_sym("(")
            with self.newlines(False):
                arg = self.parse_amp()
                self.expect_sym(")")
            return A.SqrtE(arg, span=self.span_from(start))
        if self.at("IDENT"):
            tok = self.advance()
            if tok.value == "i":
                return A.ImagE(span=tok.span)
            return A.VecName(tok.value, span=tok.span)
        if self.accept("SYM", "("):
            with self.newlines(False):
                e = self.parse_amp()
                self.expect_sym(")")
            return e
        self.error("expected state expression")

    # ------------------------------------------------------------ terms

    def parse_term(self) -> A.Term:
        start = self.peek()
        if self.at_kw("fun"):
            self.advance()
            ptype = None
            if self.accept("SYM", "("):
                with self.newlines(False):
                    param = self.expect("IDENT").value
                    self.expect_sym(":")
                    ptype = self.parse_type()
                    self.expect_sym(")")
            else:
                param = self.expect("IDENT").value
            self.expect_sym("->")
            body = self.parse_term()
            return A.Lambda(param, ptype, body, span=self.span_from(start))
        if self.at_kw("do"):
            self.advance()
            self.skip_newlines()
            if self.at_kw("return"):
                self.advance()
                value = self.parse_term()
                body = A.Return(value, span=self.span_from(start))
            else:
                body = self.parse_block()
            return A.Do(body, span=self.span_from(start))
        atoms = self.parse_app_atoms()
        out = atoms[0]
        for a in atoms[1:]:
            out = A.App(out, a, span=self.span_from(start))
        return out

    def _starts_atom(self):
        return (
            self.at("IDENT") or self.at("GATE") or self.at("NUM") or self.at_sym("(")
            or self.at_kw("fst") or self.at_kw("snd")
        )

    def parse_app_atoms(self):
        if not self._starts_atom():
            self.error("expected term")
        atoms = [self.parse_term_atom()]
        while self._starts_atom():
            atoms.append(self.parse_term_atom())
        return atoms

    def parse_term_atom(self) -> A.Term:
        start = self.peek()
        if self.at("IDENT"):
            tok = self.advance()
            return A.Var(tok.value, span=tok.span)
        if self.at("GATE"):
            tok = self.advance()
            return A.GateConst(tok.value, span=tok.span)
        if self.at("NUM"):
            tok = self.advance()
            if tok.value not in ("0", "1"):
                raise ParseError(f"bit literal must be 0 or 1, got {tok.value}", tok.span)
            return A.BitLit(int(tok.value), span=tok.span)
        if self.at_kw("fst") or self.at_kw("snd"):
            kw = self.advance().value
            arg = self.parse_term_atom()
            cls = A.Fst if kw == "fst" else A.Snd
            return cls(arg, span=self.span_from(start))
        if self.accept("SYM", "("):
            with self.newlines(False):
                if self.accept("SYM", ")"):
                    return A.UnitLit(span=self.span_from(start))
                items = [self.parse_term()]
                while self.accept("SYM", ","):
                    items.append(self.parse_term())
                self.expect_sym(")")
            out = items[-1]
            for t in reversed(items[:-1]):
                out = A.PairI(t, out, span=self.span_from(start))
            return out
        self.error("expected term")

    # ------------------------------------------------------------ computations

    def parse_block(self) -> A.Comp:
        self.expect_sym("{")
        with self.newlines(True):
            comp = self.parse_stmts(closing="}")
            self.expect_sym("}")
        return comp

    def _skip_separators(self):
        while self.at("NEWLINE") or self.at_sym(";"):
            self.advance()

    def _end_stmt(self, closing):
        if self.at("NEWLINE") or self.at_sym(";"):
            return
        if closing == "}" and self.at_sym("}"):
            return
        if closing is None and self.at("EOF"):
            return
        self.error("expected end of statement")

    def _at_close(self, closing):
        return self.at_sym("}") if closing == "}" else self.at("EOF")

    def parse_stmts(self, closing) -> A.Comp:
        self._skip_separators()
        start = self.peek()
        if self._at_close(closing):
            return A.Return(A.UnitLit(span=start.span), span=start.span)
        if self.at_kw("return"):
            self.advance()
            value = self.parse_term()
            self._skip_separators()
            if not self._at_close(closing):
                self.error("return must end its block")
            return A.Return(value, span=self.span_from(start))
        if self.at_kw("if"):
            self.advance()
            cond = self.parse_term()
            self.skip_newlines()
            self.expect_kw("then")
            self.skip_newlines()
            then = self.parse_block()
            orelse = None
            j = self.i
            while self.toks[j].kind == "NEWLINE":
                j += 1
            if self.toks[j].kind == "KW" and self.toks[j].value == "else":
                self.i = j + 1
                self.skip_newlines()
                orelse = self.parse_block()
            self._end_stmt(closing)
            stmt_span = self.span_from(start)
            if orelse is None:
                orelse = A.Return(A.UnitLit(span=stmt_span), span=stmt_span)
            rest = self.parse_stmts(closing)
            return A.IfThenElse(cond, then, orelse, rest, span=stmt_span)
        if self.at_kw("apply"):
            cmd = self.parse_apply()
            self._end_stmt(closing)
            stmt_span = self.span_from(start)
            rest = self.parse_stmts(closing)
            return A.BindCmd(A.PVar("_", span=start.span), cmd, rest, span=stmt_span)
        pattern = None
        save = self.i
        if self.at("IDENT") or self.at_sym("("):
            try:
                pattern = self.parse_pattern()
                if not self.accept("SYM", "<-"):
                    pattern = None
            except ParseError:
                pattern = None
            if pattern is None:
                self.i = save
        if pattern is not None:
            cmd_start = self.peek()
            cmd = None
            if self.at_kw("init"):
                self.advance()
                tok = self.expect("NUM")
                if tok.value not in ("0", "1"):
                    raise ParseError("init takes 0 or 1", tok.span)
                cmd = A.Init(int(tok.value), span=self.span_from(cmd_start))
            elif self.at_kw("meas"):
                self.advance()
                cmd = A.Meas(self.parse_term_atom(), span=self.span_from(cmd_start))
            elif self.at_kw("apply"):
                cmd = self.parse_apply()
            if cmd is not None:
                self._end_stmt(closing)
                stmt_span = self.span_from(start)
                rest = self.parse_stmts(closing)
                return A.BindCmd(pattern, cmd, rest, span=stmt_span)
        else:
            pattern = A.PVar("_", span=start.span)
        atoms = self.parse_app_atoms()
        ghosts = self.parse_ghost_bindings()
        self._end_stmt(closing)
        stmt_span = self.span_from(start)
        rest = self.parse_stmts(closing)
        return A.BindCall(pattern, atoms[0], tuple(atoms[1:]), ghosts, rest, span=stmt_span)

    def parse_apply(self):
        start = self.expect_kw("apply")
        gate = self.parse_term_atom()
        self.expect_kw("to")
        tstart = self.peek()
        if not self.at_sym("("):
            self.error("expected parenthesised targets")
        targets = self.parse_term_atom()
        if isinstance(gate, A.GateConst):
            n = 2 if isinstance(targets, A.PairI) else 1
            if isinstance(targets, A.PairI) and isinstance(targets.right, A.PairI):
                n = 3
            if n != GATE_ARITY[gate.name]:
                raise ParseError(f"gate {gate.name} takes {GATE_ARITY[gate.name]} target(s), got {n}", self.span_from(tstart))
            if n == 2 and targets.left == targets.right:
                raise ParseError("two-qubit gate targets must be distinct", self.span_from(tstart))
        return A.Apply(gate, targets, span=self.span_from(start))

    def parse_ghost_bindings(self):
        if not self.at_kw("with"):
            return ()
        self.advance()
        self.expect_sym("{")
        out = []
        with self.newlines(False):
            if not self.at_sym("}"):
                while True:
                    name = self.expect("IDENT").value
                    self.expect_sym(":=")
                    if self.at("IDENT") and (self.at_sym(",", k=1) or self.at_sym("}", k=1)):
                        tok = self.advance()
                        value = A.Var(tok.value, span=tok.span)
                    else:
                        value = self.parse_amp()
                    out.append((name, value))
                    if not self.accept("SYM", ","):
                        break
            self.expect_sym("}")
        names = [n for n, _ in out]
        if len(set(names)) != len(names):
            self.error("ghost bound twice")
        return tuple(out)


def amp_arity(e):
    """Qubit count of a state expression, ``"scalar"`` for scalars, None if unknown."""
    if isinstance(e, A.KetE):
        return len(e.bits)
    if isinstance(e, A.KetSym):
        return 1
    if isinstance(e, (A.NumE, A.ImagE, A.SqrtE, A.PowE)):
        return _SCALAR
    if isinstance(e, A.VecName):
        return None
    if isinstance(e, A.NegE):
        return amp_arity(e.arg)
    if isinstance(e, (A.AddE, A.SubE)):
        a, b = amp_arity(e.left), amp_arity(e.right)
        if a is None:
            return b
        if b is not None and a != b:
            raise ParseError("adding expressions of different arity", e.span)
        return a
    if isinstance(e, A.MulE):
        a, b = amp_arity(e.left), amp_arity(e.right)
        if a == _SCALAR:
            return b
        if b == _SCALAR:
            return a
        raise ParseError("product of two states; use ⊗ for tensor products", e.span)
    if isinstance(e, A.DivE):
        if amp_arity(e.right) not in (_SCALAR,):
            raise ParseError("division by a state", e.span)
        return amp_arity(e.left)
    if isinstance(e, A.TensorE):
        a, b = amp_arity(e.left), amp_arity(e.right)
        if _SCALAR in (a, b):
            raise ParseError("tensor product with a scalar", e.span)
        return None if a is None or b is None else a + b
    if isinstance(e, A.GateAppE):
        a = amp_arity(e.arg)
        if a == _SCALAR:
            raise ParseError("gate applied to a scalar", e.span)
        if a is not None and a != GATE_ARITY[e.gate]:
            raise ParseError(f"gate {e.gate} applied to a {a}-qubit state", e.span)
        return GATE_ARITY[e.gate]
    raise TypeError(f"not an amplitude expression: {e!r}")


def parse(text: str) -> A.Program:
    """Parse a whole ``.qh`` source file."""
    return Parser(text).parse_program()


def _parse_fragment(text, fn, newline_sensitive=False):
    p = Parser(text)
    with p.newlines(newline_sensitive):
        out = fn(p)
        p._skip_separators() if newline_sensitive else None
        if p.peek().kind != "EOF":
            p.error("unexpected trailing input")
    return out


def parse_type(text: str) -> A.QType:
    return _parse_fragment(text, Parser.parse_type)


def parse_prop(text: str) -> A.Prop:
    return _parse_fragment(text, Parser.parse_prop)


def parse_amp(text: str):
    return _parse_fragment(text, Parser.parse_amp)


def parse_term(text: str) -> A.Term:
    return _parse_fragment(text, Parser.parse_term, newline_sensitive=True)


def parse_comp(text: str) -> A.Comp:
    """Parse a statement sequence (no surrounding braces)."""
    return _parse_fragment(text, lambda p: p.parse_stmts(closing=None), newline_sensitive=True)
