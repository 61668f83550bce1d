"""Surface syntax: term and type parsing/printing, script parsing."""

from .names import RESERVED_TERM_NAMES, NameEnvironment
from .terms import lex_term, parse_term, parse_type, print_term, print_type
from .script import lex_script, parse_script

__all__ = [
    "NameEnvironment",
    "RESERVED_TERM_NAMES",
    "lex_term",
    "lex_script",
    "parse_term",
    "parse_type",
    "parse_script",
    "print_term",
    "print_type",
]
