"""Filtered covers: filter/position translations, membership, and the basis driver."""

from __future__ import annotations

import itertools
import logging
from typing import Callable, Iterable

from .budget import Budget, as_budget
from .closed_sets import DownBasis, complement_down, complement_up, minimize_down, minimize_up
from .errors import BudgetExhausted, DimMismatch
from .model import Vas, build_vas_P
from .oracles import FILTER_REFUTED, NO, UNKNOWN, YES, Verdict, lim_member
from .omega import OMEGA, OmegaVec, check_positions, fmt_vec, onat

log = logging.getLogger(__name__)


def translate_P_to_f(P: Iterable[int], y: OmegaVec) -> OmegaVec:
    ps = check_positions(P, len(y))
    return tuple(onat(y[i - 1]) if i in ps else OMEGA for i in range(1, len(y) + 1))


def translate_f_to_P(f: OmegaVec, y: OmegaVec):
    """``None`` when ``y`` is not below ``f``; otherwise ``(P, z)``."""
    if len(f) != len(y):
        raise DimMismatch(f"filter of dimension {len(f)} vs vector of dimension {len(y)}")
    if not all(a <= b for a, b in zip(y, f)):
        return None
    P = frozenset(i for i in range(1, len(f) + 1) if f[i - 1] != OMEGA)
    z = tuple(f[i - 1] if i in P else y[i - 1] for i in range(1, len(f) + 1))
    return P, z


def filtered_member(v: Vas, f: OmegaVec, y: OmegaVec, budget=None) -> Verdict:
    """Is ``y`` in the f-filtered downward closure of Lim Post*(v)?"""
    budget = as_budget(budget)
    f = tuple(onat(a) for a in f)
    y = tuple(onat(a) for a in y)
    if len(f) != v.dim or len(y) != v.dim:
        raise DimMismatch(f"system of dimension {v.dim}, filter {len(f)}, vector {len(y)}")
    t = translate_f_to_P(f, y)
    if t is None:
        return Verdict(NO, refutation=FILTER_REFUTED)
    P, z = t
    # omega components of the initial vector never change: a pinned finite
    # value there is impossible, an unpinned one may as well be omega
    for i in range(v.dim):
        if v.init[i] == OMEGA:
            if (i + 1) in P:
                return Verdict(NO, refutation=FILTER_REFUTED)
            z = z[:i] + (OMEGA,) + z[i + 1:]
    return lim_member(build_vas_P(v, P), z, budget)


def _vectors_by_norm(b: OmegaVec) -> Iterable[tuple]:
    """Finite vectors below ``b``, by increasing l1 norm then lexicographically."""
    d = len(b)
    total = sum(b) if all(a != OMEGA for a in b) else None

    def rec(i, rest):
        if i == d - 1:
            if rest <= b[i]:
                yield (rest,)
            return
        for a in range(0, min(rest, b[i]) + 1 if b[i] != OMEGA else rest + 1):
            for tail in rec(i + 1, rest - a):
                yield (a,) + tail

    for n in itertools.count():
        if total is not None and n > total:
            return
        yield from rec(0, n)


def vj_basis(oracle: Callable[[OmegaVec], Verdict], dim: int, budget=None) -> DownBasis:
    """Basis of a limit-closed downward-closed set given a membership oracle.

    Keeps a growing set U of minimal non-members. Each round checks every
    element of the candidate basis complement_up(U). If one fails, the round
    looks for a finite non-member below it, shrinks that non-member greedily,
    and adds it to U.
    """
    budget = as_budget(budget)
    memo: dict = {}
    U: list = []

    def ask(y) -> bool:
        if y in memo:
            return memo[y]
        budget.spend()
        r = oracle(y)
        if r.answer == UNKNOWN:
            raise BudgetExhausted(f"oracle undecided on {fmt_vec(y)}",
                                  partial=minimize_up(U, dim))
        memo[y] = r.answer == YES
        return memo[y]

    try:
        while True:
            B = complement_up(minimize_up(U, dim))
            failing = next((b for b in B.elems if not ask(b)), None)
            if failing is None:
                return B
            w = next(w for w in _vectors_by_norm(failing) if not ask(w))
            w = list(w)
            for i in range(dim):
                while w[i] > 0:
                    w[i] -= 1
                    if ask(tuple(w)):
                        w[i] += 1
                        break
            log.debug("new minimal non-member %s", fmt_vec(w))
            U.append(tuple(w))
    except BudgetExhausted as e:
        if e.partial is None:
            e.partial = minimize_up(U, dim)
        raise


def vj_basis_enumerative(oracle: Callable[[OmegaVec], Verdict], dim: int, bound: int) -> DownBasis:
    """Slow cross-check: try every antichain over {0..bound, w}^dim.

    Returns the first candidate whose elements all get YES and whose
    complement generators all get NO. Meant for dim <= 2 and tiny bounds.
    """
    vals = list(range(bound + 1)) + [OMEGA]
    points = list(itertools.product(vals, repeat=dim))
    memo: dict = {}

    def ask(y):
        if y not in memo:
            r = oracle(y)
            if r.answer == UNKNOWN:
                raise BudgetExhausted(f"oracle undecided on {fmt_vec(y)}")
            memo[y] = r.answer == YES
        return memo[y]

    members = [p for p in points if ask(p)]
    for k in range(len(members) + 1):
        for cand in itertools.combinations(members, k):
            if any(a != b and all(x <= y for x, y in zip(a, b)) for a in cand for b in cand):
                continue
            B = minimize_down(cand, dim)
            if all(not ask(u) for u in complement_down(B).elems):
                return B
    raise ValueError("no basis within the given bound")


def filtered_cover_basis(v: Vas, f: OmegaVec, budget=None) -> DownBasis:
    budget = as_budget(budget)
    f = tuple(onat(a) for a in f)
    if len(f) != v.dim:
        raise DimMismatch(f"filter of dimension {len(f)} vs system of dimension {v.dim}")
    return vj_basis(lambda y: filtered_member(v, f, y, budget), v.dim, budget)
