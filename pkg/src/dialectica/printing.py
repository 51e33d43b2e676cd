"""Pretty-printer emitting the ASCII surface grammar read by :mod:`dialectica.parsing`."""

from __future__ import annotations

from .syntax import (
    App,
    Arrow,
    Bind,
    Ground,
    Lam,
    Monad,
    Pair,
    Plus,
    Prim,
    Prod,
    Proj,
    Ret,
    Term,
    Type,
    Var,
    Zero,
)

# term precedence levels
_SUM, _BIND, _APP, _ATOM = 0, 1, 2, 3


def pretty_type(t: Type, prec: int = 0) -> str:
    if isinstance(t, Ground):
        return t.name
    if isinstance(t, Monad):
        return f"M[{pretty_type(t.inner)}]"
    if isinstance(t, Prod):
        s = f"{pretty_type(t.left, 2)} * {pretty_type(t.right, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Arrow):
        s = f"{pretty_type(t.dom, 1)} -> {pretty_type(t.cod, 0)}"
        return f"({s})" if prec > 0 else s
    # type metavariables from the typechecker print themselves
    return str(t)


def pretty(t: Term) -> str:
    return _pp(t, _SUM, True)


pretty_source = pretty_target = pretty


def _paren(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def _pp(t: Term, prec: int, tail: bool) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Prim):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Ret):
        return f"[{_pp(t.inner, _SUM, True)}]"
    if isinstance(t, Pair):
        return f"<{_pp(t.fst, _SUM, True)}, {_pp(t.snd, _SUM, True)}>"
    if isinstance(t, Proj):
        return f"{_pp(t.of, _ATOM, False)}^{t.index}"
    if isinstance(t, Lam):
        binder = t.var if t.ty is None else f"({t.var}:{pretty_type(t.ty)})"
        return _paren(f"\\{binder}. {_pp(t.body, _SUM, True)}", not tail)
    if isinstance(t, App):
        wrap = prec > _APP
        s = f"{_pp(t.fun, _APP, False)} {_pp(t.arg, _ATOM, wrap or tail)}"
        return _paren(s, wrap)
    if isinstance(t, Bind):
        wrap = prec > _BIND
        s = f"{_pp(t.action, _BIND, False)} >>= {_pp(t.cont, _APP, wrap or tail)}"
        return _paren(s, wrap)
    if isinstance(t, Plus):
        wrap = prec > _SUM
        s = f"{_pp(t.left, _SUM, False)} + {_pp(t.right, _BIND, wrap or tail)}"
        return _paren(s, wrap)
    raise TypeError(f"not a term: {t!r}")
