"""Formula AST, printer, and the subformula orderings the checkers walk.

Coalition modalities carry a per-resource bound; the all-INF bound plays the
role of the plain (unbounded) strategic modality.  `sub_ordered` produces the
dependency order used by the general checker (each all-INF variant strictly
before its bounded original); `sub_plus` produces the bound-increasing order
with split-generated variants used by the consumption-only engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormulaError
from .vectors import INF, Vec, all_inf, is_all_inf, is_bound_vec, split, vec_sort_key


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class TrueConst(Formula):
    def __repr__(self):
        return "true"


@dataclass(frozen=True)
class FalseConst(Formula):
    def __repr__(self):
        return "false"


TRUE = TrueConst()
FALSE = FalseConst()


@dataclass(frozen=True)
class Prop(Formula):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


def _norm_coalition(names) -> tuple[str, ...]:
    return tuple(sorted(set(names)))


def _norm_bound(bound) -> Vec:
    b = tuple(bound)
    if not is_bound_vec(b):
        raise FormulaError(f"bound components must be naturals or inf: {b!r}")
    return b


@dataclass(frozen=True)
class CoalitionNext(Formula):
    coalition: tuple[str, ...]
    bound: Vec
    child: Formula

    def __post_init__(self):
        object.__setattr__(self, "coalition", _norm_coalition(self.coalition))
        object.__setattr__(self, "bound", _norm_bound(self.bound))


@dataclass(frozen=True)
class CoalitionAlways(Formula):
    coalition: tuple[str, ...]
    bound: Vec
    child: Formula

    def __post_init__(self):
        object.__setattr__(self, "coalition", _norm_coalition(self.coalition))
        object.__setattr__(self, "bound", _norm_bound(self.bound))


@dataclass(frozen=True)
class CoalitionUntil(Formula):
    coalition: tuple[str, ...]
    bound: Vec
    hold: Formula
    goal: Formula

    def __post_init__(self):
        object.__setattr__(self, "coalition", _norm_coalition(self.coalition))
        object.__setattr__(self, "bound", _norm_bound(self.bound))


MODAL_TYPES = (CoalitionNext, CoalitionAlways, CoalitionUntil)


def is_modal(f: Formula) -> bool:
    return isinstance(f, MODAL_TYPES)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.child,)
    if isinstance(f, (Or, And)):
        return (f.left, f.right)
    if isinstance(f, (CoalitionNext, CoalitionAlways)):
        return (f.child,)
    if isinstance(f, CoalitionUntil):
        return (f.hold, f.goal)
    return ()


def with_bound(f: Formula, bound: Vec) -> Formula:
    if isinstance(f, CoalitionNext):
        return CoalitionNext(f.coalition, bound, f.child)
    if isinstance(f, CoalitionAlways):
        return CoalitionAlways(f.coalition, bound, f.child)
    if isinstance(f, CoalitionUntil):
        return CoalitionUntil(f.coalition, bound, f.hold, f.goal)
    raise FormulaError(f"not a coalition modality: {f!r}")


def ast_size(f: Formula) -> int:
    return 1 + sum(ast_size(c) for c in children(f))


_KIND_RANK = {
    TrueConst: 0,
    FalseConst: 1,
    Prop: 2,
    Not: 3,
    Or: 4,
    And: 5,
    CoalitionNext: 6,
    CoalitionAlways: 7,
    CoalitionUntil: 8,
}


def _struct_key(f: Formula, bound_comp_key) -> tuple:
    rank = _KIND_RANK[type(f)]
    if isinstance(f, Prop):
        return (rank, f.name)
    if is_modal(f):
        return (
            rank,
            f.coalition,
            tuple(bound_comp_key(x) for x in f.bound),
            tuple(_struct_key(c, bound_comp_key) for c in children(f)),
        )
    return (rank,) + tuple(_struct_key(c, bound_comp_key) for c in children(f))


def _bound_comp_inf_first(x):
    return (0, 0) if x is INF else (1, x)


def _bound_comp_inf_last(x):
    return (1, 0) if x is INF else (0, x)


def _closure_with_inf_variants(root: Formula) -> set[Formula]:
    seen: set[Formula] = set()

    def collect(f: Formula):
        if f in seen:
            return
        seen.add(f)
        for c in children(f):
            collect(c)
        if is_modal(f) and not is_all_inf(f.bound):
            collect(with_bound(f, all_inf(len(f.bound))))

    collect(root)
    return seen


def sub_ordered(root: Formula) -> list[Formula]:
    """Subformula closure plus all-INF variants, in dependency order.

    Ordered by increasing AST size; among equal sizes the all-INF variant of
    a modality sorts strictly before any bounded version of the same shape,
    so its label is available when the bounded search consults it.
    """
    seen = _closure_with_inf_variants(root)
    return sorted(seen, key=lambda f: (ast_size(f), _struct_key(f, _bound_comp_inf_first)))


def sub_plus(root: Formula) -> list[Formula]:
    """Closure extended with split-generated bound variants, bounds increasing.

    For every until/always modality with bound b, the variants with bound d'
    for (d, d') in split(b) are added.  The order is a linear extension of
    the pointwise order on bounds, so each variant is labelled before any
    modality whose computation consults it.
    """
    seen = set(_closure_with_inf_variants(root))
    for f in list(seen):
        if isinstance(f, (CoalitionAlways, CoalitionUntil)):
            for _, dprime in split(f.bound):
                seen.add(with_bound(f, dprime))
    return sorted(seen, key=lambda f: (ast_size(f), _struct_key(f, _bound_comp_inf_last)))


_PREC_OR = 1
_PREC_AND = 2
_PREC_UNARY = 3
_PREC_ATOM = 4


def _prec(f: Formula) -> int:
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Not) or is_modal(f):
        return _PREC_UNARY
    return _PREC_ATOM


def _fmt_bound(bound: Vec) -> str:
    return ",".join("inf" if x is INF else str(x) for x in bound)


def _fmt_modal_prefix(f) -> str:
    return "<{%s}: %s>" % (",".join(f.coalition), _fmt_bound(f.bound))


def _fmt(f: Formula, min_prec: int) -> str:
    if isinstance(f, TrueConst):
        s = "true"
    elif isinstance(f, FalseConst):
        s = "false"
    elif isinstance(f, Prop):
        s = f.name
    elif isinstance(f, Not):
        s = "!" + _fmt(f.child, _PREC_UNARY)
    elif isinstance(f, Or):
        s = _fmt(f.left, _PREC_OR) + " | " + _fmt(f.right, _PREC_OR + 1)
    elif isinstance(f, And):
        s = _fmt(f.left, _PREC_AND) + " & " + _fmt(f.right, _PREC_AND + 1)
    elif isinstance(f, CoalitionNext):
        s = _fmt_modal_prefix(f) + " X " + _fmt(f.child, _PREC_UNARY)
    elif isinstance(f, CoalitionAlways):
        s = _fmt_modal_prefix(f) + " G " + _fmt(f.child, _PREC_UNARY)
    elif isinstance(f, CoalitionUntil):
        s = "%s (%s U %s)" % (
            _fmt_modal_prefix(f),
            _fmt(f.hold, 0),
            _fmt(f.goal, 0),
        )
    else:
        raise FormulaError(f"unknown formula node: {f!r}")
    if _prec(f) < min_prec:
        return "(" + s + ")"
    return s


def format_formula(f: Formula) -> str:
    """Concrete syntax for f; parse_formula(format_formula(f)) == f."""
    return _fmt(f, 0)
