"""Cover computation for VAS with one zero test, and the queries built on it.

The tree explored here only carries labels whose first component is 0.
Each node expands in two ways. A zero-test child is added when the test can
fire. Then one child is added per element of the (0, w, ..., w)-filtered
cover of the zero-test-free system restarted at the label. The cover itself
is the union of plain Karp-Miller covers restarted from every label.
"""

from __future__ import annotations

import logging
from collections import deque

from .budget import Budget, as_budget
from .closed_sets import DownBasis, down_member, down_union, minimize_down
from .errors import BadPosition, BudgetExhausted, DimMismatch, NotNormalized
from .filtered_cover import filtered_cover_basis
from .karp_miller import KmNode, KmTree, km_cover
from .model import Vas, Vassz, Vasz, _step, encode_vassz_as_vasz, normalize, reinit, strip_zero_test
from .oracles import NO, UNKNOWN, YES, Verdict, cover_search
from .omega import OMEGA, fmt_vec, onat

log = logging.getLogger(__name__)


def zero_filter(dim: int) -> tuple:
    return (0,) + (OMEGA,) * (dim - 1)


def _leq(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


def algorithm1_tree(vz: Vasz, budget=None) -> KmTree:
    budget = as_budget(budget)
    if not isinstance(vz, Vasz):
        raise TypeError("expected a VAS with one zero test")
    if not vz.is_normalized():
        raise NotNormalized("need init(1) = 0 and a zero test that leaves component 1 alone")
    f = zero_filter(vz.dim)
    stripped = strip_zero_test(vz)
    memo: dict = {}
    nodes = [KmNode(tuple(vz.init), None, None, 0)]
    tree = KmTree(nodes)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        budget.spend()
        n = nodes[i]
        anc = tree.ancestors(i)
        x = n.label
        if any(nodes[a].label == x for a in anc):
            n.closed = True
            continue
        for a in anc:
            x0 = nodes[a].label
            if _leq(x0, x):
                x = tuple(OMEGA if p < q else p for p, q in zip(x0, x))
        n.label = x
        budget.spend()
        y = _step(x, vz.ztest, vz)
        if y is not None:
            nodes.append(KmNode(y, i, None, n.depth + 1, tag=vz.ztest))
            n.children.append(len(nodes) - 1)
            queue.append(len(nodes) - 1)
        if x not in memo:
            memo[x] = filtered_cover_basis(reinit(stripped, x), f, budget)
        for b in memo[x].elems:
            nodes.append(KmNode(b, i, None, n.depth + 1, tag="B"))
            n.children.append(len(nodes) - 1)
            queue.append(len(nodes) - 1)
    log.debug("zero-test tree with %d nodes, %d filtered covers", len(nodes), len(memo))
    return tree


def algorithm1(vz: Vasz, budget=None) -> DownBasis:
    """Basis of the (0, w, ..., w)-filtered cover of ``vz``."""
    tree = algorithm1_tree(vz, budget)
    return minimize_down(tree.labels(), vz.dim)


def _cover_normalized(vz: Vasz, budget: Budget) -> DownBasis:
    R = algorithm1(vz, budget)
    stripped = strip_zero_test(vz)
    out = minimize_down([], vz.dim)
    for r in R.elems:
        out = down_union(out, km_cover(reinit(stripped, r), budget))
    return out


def vasz_cover(vz, budget=None) -> DownBasis:
    """Minimal basis of the cover of a VAS0.

    Inputs that are not normalised go through the start/zero-test gadgets and
    the state encoding; the result is projected back onto the counters.
    """
    budget = as_budget(budget)
    if isinstance(vz, Vas):
        return km_cover(vz, budget)
    if vz.init[0] == OMEGA:
        # the test can never pass
        return km_cover(strip_zero_test(vz), budget)
    if vz.is_normalized():
        return _cover_normalized(vz, budget)
    enc, layout = encode_vassz_as_vasz(normalize(vz))
    B = _cover_normalized(enc, budget)
    return minimize_down([b[: vz.dim] for b in B.elems], vz.dim)


def coverable(vz, x, budget=None) -> Verdict:
    """YES/NO from the cover; a covering word is attached when one is found in budget."""
    budget = as_budget(budget)
    start = budget.used
    x = tuple(onat(a) for a in x)
    if len(x) != vz.dim:
        raise DimMismatch(f"vector of dimension {len(x)} vs system of dimension {vz.dim}")
    try:
        B = vasz_cover(vz, budget)
    except BudgetExhausted:
        return Verdict(UNKNOWN, steps=budget.used - start)
    if not down_member(x, B):
        return Verdict(NO, refutation="cover-refuted", steps=budget.used - start)
    word = None
    try:
        word = cover_search(vz, x, budget.sub(max(1, budget.remaining)))
    except BudgetExhausted:
        pass
    return Verdict(YES, witness=word, steps=budget.used - start)


def place_bounded(vz, i: int, budget=None) -> Verdict:
    """YES when component ``i`` (1-indexed) is bounded over all reachable vectors."""
    budget = as_budget(budget)
    start = budget.used
    if not isinstance(i, int) or not 1 <= i <= vz.dim:
        raise BadPosition(f"position {i} outside 1..{vz.dim}")
    try:
        B = vasz_cover(vz, budget)
    except BudgetExhausted:
        return Verdict(UNKNOWN, steps=budget.used - start)
    if any(b[i - 1] == OMEGA for b in B.elems):
        return Verdict(NO, steps=budget.used - start)
    return Verdict(YES, steps=budget.used - start)
