"""Tokenizer.  Unicode symbols and their ASCII aliases produce identical tokens."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from .ast import Span

KEYWORDS = {
    "do", "return", "init", "meas", "apply", "to", "if", "then", "else", "with", "fun",
    "fst", "snd", "QST", "requires", "ensures", "span", "on", "uniform", "separable",
    "class", "unit", "bit", "qbit", "vector", "complex", "unitary", "prop", "sqrt",
}
GATES = {"I", "X", "Y", "Z", "H", "CX", "CZ"}

# word aliases that turn into symbols
WORD_SYMBOLS = {"top": "⊤", "bot": "⊥", "xor": "⊕", "inq": "∈q"}

GREEK = {
    "α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "θ": "theta", "λ": "lambda",
    "μ": "mu", "π": "pi", "ρ": "rho", "σ": "sigma", "τ": "tau", "φ": "phi", "ϕ": "phi",
    "χ": "chi", "ψ": "psi", "ω": "omega", "Φ": "Phi", "Ψ": "Psi",
}

_SYMBOLS = [
    ("(*)", "⊗"), ("==cl", "≡cl"), ("==q", "≡q"), ("≡cl", "≡cl"), ("≡q", "≡q"), ("∈q", "∈q"),
    ("=q", "=q"), ("=c", "=c"), (":=", ":="), ("<-", "<-"), ("←", "<-"), ("->", "->"),
    ("→", "->"), ("=>", "=>"), ("⇒", "=>"), ("/\\", "∧"), ("\\/", "∨"), ("∧", "∧"), ("∨", "∨"),
    ("⊤", "⊤"), ("⊥", "⊥"), ("⊗", "⊗"), ("⊕", "⊕"), ("·", "·"), (".", "·"), ("√", "sqrt"),
    ("(", "("), (")", ")"), ("{", "{"), ("}", "}"), ("[", "["), ("]", "]"), (",", ","),
    (";", ";"), (":", ":"), ("=", "="), ("+", "+"), ("-", "-"), ("*", "*"), ("/", "/"),
    ("^", "^"), ("⟩", ">"), (">", ">"), ("|", "|"),
]
_WORDY = {"=q", "=c", "==q", "≡q"}  # must not run into an identifier

_TOKEN_RE = re.compile(
    r"(?P<nl>\r?\n)|(?P<ws>[ \t\f]+)|(?P<comment>--[^\n]*)"
    r"|(?P<ket>\|(?P<ketbody>[01]+|\+|-)(⟩|>))"
    r"|(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<ident>[^\W\d]\w*'*)"
)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT GATE NUM KET KW SYM NEWLINE EOF
    value: str
    span: Span

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.span.line}:{self.span.col}"


def _normalize_ident(word: str) -> str:
    return "".join(GREEK.get(ch, ch) for ch in word)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    n = len(text)
    if text.startswith("﻿"):
        pos = 1

    def emit(kind, value, length):
        tokens.append(Token(kind, value, Span(line, col, line, col + length)))

    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m and m.lastgroup:
            kind, s = m.lastgroup, m.group(0)
            if kind == "nl":
                emit("NEWLINE", "\n", 1)
                pos, line, col = m.end(), line + 1, 1
                continue
            if kind == "ket":
                emit("KET", m.group("ketbody"), len(s))
            elif kind == "num":
                emit("NUM", s, len(s))
            elif kind == "ident":
                if s in GATES:
                    emit("GATE", s, len(s))
                elif s in KEYWORDS:
                    emit("KW", s, len(s))
                elif s == "λ":
                    emit("KW", "fun", 1)
                elif s in WORD_SYMBOLS:
                    emit("SYM", WORD_SYMBOLS[s], len(s))
                elif re.fullmatch(r"ket[01]+", s):
                    emit("KET", s[3:], len(s))
                elif s in ("ketplus", "ketminus"):
                    emit("KET", "+" if s == "ketplus" else "-", len(s))
                else:
                    emit("IDENT", _normalize_ident(s), len(s))
            # ws and comments are skipped
            col += len(s)
            pos = m.end()
            continue
        for src, canon in _SYMBOLS:
            if text.startswith(src, pos):
                end = pos + len(src)
                if src in _WORDY and end < n and (text[end].isalnum() or text[end] == "_"):
                    continue
                kind = "KW" if canon == "sqrt" else "SYM"
                emit(kind, canon, len(src))
                pos, col = end, col + len(src)
                break
        else:
            raise ParseError(f"unexpected character {text[pos]!r}", Span(line, col, line, col + 1))
    tokens.append(Token("EOF", "", Span(line, col, line, col)))
    return tokens
