from .evaluator import DEFAULT_RECURSION_LIMIT, Interpreter, match_pattern

__all__ = ["DEFAULT_RECURSION_LIMIT", "Interpreter", "match_pattern"]
