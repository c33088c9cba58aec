"""Surface syntax: AST, parser, printer and alpha-equivalence."""

from .alpha import alpha_equiv, canonical
from .ast import *  # noqa: F401,F403
from .parser import ParseError, parse_index, parse_program, parse_term, parse_type
from .printer import format_fraction, pretty_print
