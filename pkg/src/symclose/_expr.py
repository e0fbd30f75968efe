"""Evaluate small real-valued expressions such as ``acos(1/3)`` with mpmath.

Only numeric literals, ``pi`` and ``e``, the four arithmetic operators, powers
and a fixed set of elementary functions are accepted.  Decimal literals are
read from their source text, so they keep full working precision.
"""

import ast

import mpmath as mp

_FUNCS = {
    "acos": mp.acos,
    "arccos": mp.acos,
    "asin": mp.asin,
    "arcsin": mp.asin,
    "atan": mp.atan,
    "arctan": mp.atan,
    "cos": mp.cos,
    "sin": mp.sin,
    "tan": mp.tan,
    "sqrt": mp.sqrt,
    "exp": mp.exp,
    "log": mp.log,
}
_CONSTS = {"pi": lambda: +mp.pi, "e": lambda: +mp.e}


def parse_real(text: str):
    """Evaluate ``text`` at the current mpmath precision."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}") from exc
    return _eval(tree.body, text)


def _eval(node, src):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        seg = ast.get_source_segment(src.strip(), node)
        return mp.mpf(seg if seg is not None else node.value)
    if isinstance(node, ast.Name) and node.id in _CONSTS:
        return _CONSTS[node.id]()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, src)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        lhs, rhs = _eval(node.left, src), _eval(node.right, src)
        ops = {ast.Add: lambda p, q: p + q, ast.Sub: lambda p, q: p - q,
               ast.Mult: lambda p, q: p * q, ast.Div: lambda p, q: p / q,
               ast.Pow: lambda p, q: p ** q}
        for kind, fn in ops.items():
            if isinstance(node.op, kind):
                return fn(lhs, rhs)
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
        return _FUNCS[node.func.id](_eval(node.args[0], src))
    raise ValueError(f"unsupported construct in expression {src!r}")
