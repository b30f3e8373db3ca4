"""Small arithmetic-expression evaluator built on :mod:`ast`.

Grammar (after ``^`` is rewritten to ``**``)::

    expr   := expr (+|-) expr | expr (*|/) expr | expr ** int | -expr | atom
    atom   := integer | decimal | name | ( expr )

``i`` is the imaginary unit. A literal directly followed by ``i`` (``5i``,
``1/5i``) is read as that literal times ``i``, so ``3/7+1/5i`` is
``3/7 + (1/5)*i``. Other names are resolved by a caller-supplied lookup.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Callable

from udfverify.scalars import GaussQ

_IMAG_LITERAL = re.compile(r"(\d+(?:\.\d+)?(?:/\d+(?:\.\d+)?)?)\s*i\b")

_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


class ExpressionError(ValueError):
    pass


def _prepare(text: str) -> str:
    text = text.replace("^", "**")
    return _IMAG_LITERAL.sub(lambda m: f"(({m.group(1)})*i)", text)


def _div(a, b):
    if isinstance(b, int) and not isinstance(b, bool):
        b = Fraction(b)
    if isinstance(a, int) and isinstance(b, Fraction):
        return Fraction(a) / b
    return a / b


def evaluate_expression(text: str, lookup: Callable[[str], object]):
    """Evaluate ``text``; ``lookup(name)`` returns a value or ``None`` if unknown."""
    try:
        tree = ast.parse(_prepare(text.strip()), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            v = node.value
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ExpressionError(f"unsupported literal {v!r}")
            if isinstance(v, float):
                return Fraction(repr(v))
            return v
        if isinstance(node, ast.Name):
            if node.id == "i":
                return GaussQ(0, 1)
            value = lookup(node.id)
            if value is None:
                raise ExpressionError(f"unknown name {node.id!r}")
            return value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            a = ev(node.left)
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                try:
                    return _div(a, b)
                except TypeError:
                    raise ExpressionError("division is only allowed by a scalar") from None
            if not isinstance(b, int) or b < 0:
                raise ExpressionError("exponents must be non-negative integers")
            return a ** b
        raise ExpressionError(f"unsupported syntax in {text!r}")

    return ev(tree)
