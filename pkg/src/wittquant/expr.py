"""Tiny arithmetic-expression evaluator shared by the element text formats.

Expressions use ``+ - *``, ``^`` (or ``**``) with natural exponents, integer
literals, parentheses and the variable names in ``names``.  Multiplication is
evaluated left to right, so non-commutative operands keep their order.
"""

from __future__ import annotations

import ast
from typing import Any, Callable, Mapping


class ParseError(ValueError):
    pass


def evaluate(
    text: str,
    names: Mapping[str, Any],
    *,
    on_list: Callable[[list], Any] | None = None,
):
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree.body, names, on_list, text)


def _eval(node, names, on_list, text):
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ParseError(f"unknown variable {node.id!r} in {text!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval(node.operand, names, on_list, text)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, names, on_list, text)
        if isinstance(node.op, ast.Pow):
            exp = _eval(node.right, {}, None, text)
            if not isinstance(exp, int) or exp < 0:
                raise ParseError(f"exponent must be a natural number in {text!r}")
            return left**exp
        right = _eval(node.right, names, on_list, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
    if isinstance(node, ast.List) and on_list is not None:
        return on_list([_eval(e, names, on_list, text) for e in node.elts])
    raise ParseError(f"unsupported syntax in {text!r}")
