"""Repeated control-state reachability and omega-regular model checking for VASS0."""

from __future__ import annotations

import logging

from .budget import as_budget
from .errors import BudgetExhausted, UnknownState
from .model import (
    BuchiAutomaton,
    LabeledVassz,
    Vassz,
    build_repeated_product,
    buchi_product,
    encode_vassz_as_vasz,
)
from .oracles import NO, UNKNOWN, YES, Verdict, reach_decide
from .vasz_analysis import vasz_cover

log = logging.getLogger(__name__)

HOLDS, VIOLATED = "HOLDS", "VIOLATED"


def _state_coverable(s: Vassz, q: str, budget):
    """False when ``q`` is provably unreachable, True/None otherwise."""
    enc, layout = encode_vassz_as_vasz(s)
    k = layout.component(q) - 1
    sub = budget.sub(max(1, budget.remaining // 4))
    try:
        B = vasz_cover(enc, sub)
    except BudgetExhausted:
        if budget.remaining <= 0:
            raise
        return None
    return any(b[k] >= 1 for b in B.elems)


def repeated_state(s: Vassz, qf: str, budget=None) -> Verdict:
    """Is there an infinite run visiting ``qf`` infinitely often?

    YES needs one of two lassos from a reachable (qf, x) back to (qf, y). Either
    the loop avoids the zero test and x <= y, or the loop may test and
    x <= y with x(1) = y(1). Both become reachability of a sink
    configuration in the doubled product system. The witness is the product
    run projected onto the actions of ``s``.
    """
    budget = as_budget(budget)
    start = budget.used
    if qf not in s.states:
        raise UnknownState(f"unknown state {qf!r}")
    try:
        if _state_coverable(s, qf, budget) is False:
            return Verdict(NO, refutation="cover-refuted", steps=budget.used - start)
        prod, r_i, r_ii, origin = build_repeated_product(s, qf, with_origin=True)
        enc, layout = encode_vassz_as_vasz(prod)
        zero = (0,) * prod.dim
        answers = []
        for k, r in enumerate((r_i, r_ii)):
            share = budget.remaining if k == 1 else max(1, budget.remaining // 2)
            v = reach_decide(enc, layout.encode(zero, r), budget.sub(share))
            if v.answer == YES:
                word = tuple(origin[a] for _, a, _ in layout.decode_word(v.witness) if a in origin)
                return Verdict(YES, witness=word, steps=budget.used - start)
            answers.append(v)
    except BudgetExhausted:
        return Verdict(UNKNOWN, steps=budget.used - start)
    if all(v.answer == NO for v in answers):
        tags = sorted({v.refutation for v in answers})
        return Verdict(NO, refutation="+".join(tags), steps=budget.used - start)
    return Verdict(UNKNOWN, steps=budget.used - start)


def mc_omega_regular(ls: LabeledVassz, bad: BuchiAutomaton, budget=None) -> Verdict:
    """HOLDS when no infinite run is accepted by ``bad`` (the negated property).

    Only infinite runs produce traces; runs that deadlock are ignored.
    """
    budget = as_budget(budget)
    start = budget.used
    prod, accepting, labels = buchi_product(ls, bad)
    unknown = False
    for n, q in enumerate(accepting):
        left = len(accepting) - n
        v = repeated_state(prod, q, budget.sub(max(1, budget.remaining // left)))
        if v.answer == YES:
            return Verdict(VIOLATED, witness=v.witness, steps=budget.used - start)
        if v.answer == UNKNOWN:
            unknown = True
    if unknown:
        return Verdict(UNKNOWN, steps=budget.used - start)
    return Verdict(HOLDS, steps=budget.used - start)
