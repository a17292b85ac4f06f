"""TimeML relation types, their inverses and the folding onto six classes."""
from enum import Enum

from .errors import UnknownRelation


class RelationType(str, Enum):
    BEFORE = "BEFORE"
    AFTER = "AFTER"
    IBEFORE = "IBEFORE"
    IAFTER = "IAFTER"
    INCLUDES = "INCLUDES"
    IS_INCLUDED = "IS_INCLUDED"
    DURING = "DURING"
    DURING_INV = "DURING_INV"
    BEGINS = "BEGINS"
    BEGUN_BY = "BEGUN_BY"
    ENDS = "ENDS"
    ENDED_BY = "ENDED_BY"
    SIMULTANEOUS = "SIMULTANEOUS"
    IDENTITY = "IDENTITY"

    def __str__(self):
        return self.value


class FoldedClass(str, Enum):
    BEFORE = "BEFORE"
    IBEFORE = "IBEFORE"
    BEGINS = "BEGINS"
    ENDS = "ENDS"
    INCLUDES = "INCLUDES"
    SIMULTANEOUS = "SIMULTANEOUS"

    def __str__(self):
        return self.value


R = RelationType
F = FoldedClass

_INVERSE = {
    R.BEFORE: R.AFTER,
    R.IBEFORE: R.IAFTER,
    R.INCLUDES: R.IS_INCLUDED,
    R.DURING: R.DURING_INV,
    R.BEGINS: R.BEGUN_BY,
    R.ENDS: R.ENDED_BY,
    R.SIMULTANEOUS: R.SIMULTANEOUS,
    R.IDENTITY: R.IDENTITY,
}
_INVERSE.update({v: k for k, v in list(_INVERSE.items())})

# relType -> (folded label, swap arguments)
_FOLD = {
    R.BEFORE: (F.BEFORE, False),
    R.AFTER: (F.BEFORE, True),
    R.IBEFORE: (F.IBEFORE, False),
    R.IAFTER: (F.IBEFORE, True),
    R.INCLUDES: (F.INCLUDES, False),
    R.IS_INCLUDED: (F.INCLUDES, True),
    R.BEGINS: (F.BEGINS, False),
    R.BEGUN_BY: (F.BEGINS, True),
    R.ENDS: (F.ENDS, False),
    R.ENDED_BY: (F.ENDS, True),
    R.SIMULTANEOUS: (F.SIMULTANEOUS, False),
    R.IDENTITY: (F.SIMULTANEOUS, False),
    # DURING is folded into SIMULTANEOUS, not the INCLUDES family
    R.DURING: (F.SIMULTANEOUS, False),
    R.DURING_INV: (F.SIMULTANEOUS, True),
}


def parse_relation(name):
    try:
        return RelationType(name.strip().upper())
    except (ValueError, AttributeError):
        raise UnknownRelation(f"unknown TimeML relType {name!r}") from None


def parse_folded(name):
    try:
        return FoldedClass(name.strip().upper())
    except (ValueError, AttributeError):
        raise UnknownRelation(f"unknown folded relation class {name!r}") from None


def invert(r):
    return _INVERSE[r]


def is_symmetric(r):
    return _INVERSE[r] is r


def fold(r):
    return _FOLD[r]


def unfold(label, swap_args):
    """Pick the relType that folds to ``(label, swap_args)``; DURING forms are never chosen."""
    for r in (R.BEFORE, R.AFTER, R.IBEFORE, R.IAFTER, R.INCLUDES, R.IS_INCLUDED, R.BEGINS,
              R.BEGUN_BY, R.ENDS, R.ENDED_BY, R.SIMULTANEOUS):
        if _FOLD[r] == (label, swap_args):
            return r
    # SIMULTANEOUS is symmetric: swapping its arguments keeps the relType
    return R.SIMULTANEOUS
