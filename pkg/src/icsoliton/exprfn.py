"""Safe closed-form expressions of one variable ``r``.

Custom warping functions arrive from config files as strings like
``"r + r**3"`` or ``"sinh(r)"``.  We compile them through a whitelisted AST
walk instead of eval(); the resulting callable is jet-generic, so first and
second derivatives come from :mod:`icsoliton.jets` rather than the user.
"""

from __future__ import annotations

import ast
import operator

from . import jets

_FUNCTIONS = {
    "sin": jets.sin,
    "cos": jets.cos,
    "sinh": jets.sinh,
    "cosh": jets.cosh,
    "tanh": jets.tanh,
    "exp": jets.exp,
    "log": jets.log,
    "sqrt": jets.sqrt,
}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


class ExpressionError(ValueError):
    """Raised when an expression uses anything outside the whitelist."""


def _check(node):
    if isinstance(node, ast.Expression):
        _check(node.body)
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ExpressionError(f"operator {type(node.op).__name__} not allowed")
        _check(node.left)
        _check(node.right)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise ExpressionError("only unary +/- allowed")
        _check(node.operand)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ExpressionError(f"unknown function in expression")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError("functions take exactly one positional argument")
        _check(node.args[0])
    elif isinstance(node, ast.Name):
        if node.id != "r":
            raise ExpressionError(f"unknown name {node.id!r}; only 'r' is available")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError("only numeric constants allowed")
    else:
        raise ExpressionError(f"disallowed syntax: {type(node).__name__}")


def _evaluate(node, r):
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, r)
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_evaluate(node.left, r), _evaluate(node.right, r))
    if isinstance(node, ast.UnaryOp):
        v = _evaluate(node.operand, r)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call):
        return _FUNCTIONS[node.func.id](_evaluate(node.args[0], r))
    if isinstance(node, ast.Name):
        return r
    if isinstance(node, ast.Constant):
        return node.value
    raise ExpressionError(f"disallowed syntax: {type(node).__name__}")


def compile_expression(text):
    """Compile ``text`` into a jet-generic callable of r.

    Raises ExpressionError on anything outside {r, numbers, + - * / **,
    sin, cos, sinh, cosh, tanh, exp, log, sqrt}.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse expression {text!r}: {exc}") from exc
    _check(tree)

    def fn(r):
        return _evaluate(tree, r)

    fn.expression = text
    return fn
