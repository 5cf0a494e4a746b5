from . import ast
from .lexer import tokenize
from .parser import parse, parse_amp, parse_comp, parse_prop, parse_term, parse_type
from .pretty import pretty

__all__ = ["ast", "parse", "parse_amp", "parse_comp", "parse_prop", "parse_term", "parse_type", "pretty", "tokenize"]
