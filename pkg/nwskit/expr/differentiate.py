"""
Symbolic differentiation.

Rules are registered per node type with `functools.singledispatch`, so node
types defined elsewhere (antiderivatives, inverse functions) can add their own.
Results are built with the folding constructors; no other simplification.
"""
from functools import singledispatch

from .nodes import (
    Expr, Num, Const, Var, Func, Neg, Add, Sub, Mul, Div, Pow,
    ZERO, ONE, add, sub, mul, div, power, neg, func,
)


@singledispatch
def differentiate(e: Expr, var: str) -> Expr:
    """
    Exact derivative of an expression with respect to a variable.

    Args:
        e: The expression.
        var: Name of the variable.

    Returns:
        The derivative expression.
    """
    raise NotImplementedError(f"Cannot differentiate a {type(e).__name__}")


@differentiate.register(Num)
@differentiate.register(Const)
def _(e, var):
    return ZERO


@differentiate.register(Var)
def _(e, var):
    return ONE if e.name == var else ZERO


@differentiate.register(Neg)
def _(e, var):
    return neg(differentiate(e.arg, var))


@differentiate.register(Add)
def _(e, var):
    return add(differentiate(e.left, var), differentiate(e.right, var))


@differentiate.register(Sub)
def _(e, var):
    return sub(differentiate(e.left, var), differentiate(e.right, var))


@differentiate.register(Mul)
def _(e, var):
    f, g = e.left, e.right
    return add(mul(differentiate(f, var), g), mul(f, differentiate(g, var)))


@differentiate.register(Div)
def _(e, var):
    f, g = e.left, e.right
    df, dg = differentiate(f, var), differentiate(g, var)
    return sub(div(df, g), div(mul(f, dg), power(g, Num(2.0))))


@differentiate.register(Pow)
def _(e, var):
    f, g = e.left, e.right
    df = differentiate(f, var)
    if not g.depends_on(var):
        return mul(mul(g, power(f, sub(g, ONE))), df)
    dg = differentiate(g, var)
    if not f.depends_on(var):
        return mul(mul(func("ln", f), e), dg)
    return mul(e, add(mul(dg, func("ln", f)), div(mul(g, df), f)))


def _outer(name: str, arg: Expr) -> Expr:
    """Derivative of the named function evaluated at `arg`."""
    if name == "exp":
        return func("exp", arg)
    if name == "ln":
        return div(ONE, arg)
    if name == "sqrt":
        return div(ONE, mul(Num(2.0), func("sqrt", arg)))
    if name == "sin":
        return func("cos", arg)
    if name == "cos":
        return neg(func("sin", arg))
    if name == "tan":
        return div(ONE, power(func("cos", arg), Num(2.0)))
    if name == "sinh":
        return func("cosh", arg)
    if name == "cosh":
        return func("sinh", arg)
    if name == "tanh":
        return sub(ONE, power(func("tanh", arg), Num(2.0)))
    if name == "coth":
        return sub(ONE, power(func("coth", arg), Num(2.0)))
    if name == "abs":
        # undefined at 0: evaluates to a pole there
        return div(arg, func("abs", arg))
    raise NotImplementedError(name)


@differentiate.register(Func)
def _(e, var):
    inner = differentiate(e.arg, var)
    if inner.is_number(0.0):
        return ZERO
    return mul(_outer(e.name, e.arg), inner)
