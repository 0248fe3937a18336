"""Three-valued reachability and limit-membership oracles.

``reach_decide`` never guesses. YES comes with a firing word that replays to
the target. NO comes with one of three refutations:

* ``cover-refuted``: the target lies outside a Karp-Miller cover.
* ``state-equation-refuted``: no nonnegative integer Parikh vector solves
  init + sum n_a * delta(a) = target with a support that can be switched on
  forward from init and backward from the target.
* ``exhausted-finite-space``: exploration ran out of states.

Anything else is UNKNOWN.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .budget import DEFAULT_BUDGET, Budget, as_budget
from .errors import BudgetExhausted, DimMismatch, UnknownAction
from .karp_miller import km_cover
from .model import Vas, Vasz, _step, build_vas_y, enabled, fire_word
from .omega import OMEGA, fmt_vec, is_finite, onat

log = logging.getLogger(__name__)

YES, NO, UNKNOWN = "YES", "NO", "UNKNOWN"
COVER_REFUTED = "cover-refuted"
STATE_EQUATION_REFUTED = "state-equation-refuted"
EXHAUSTED = "exhausted-finite-space"
FILTER_REFUTED = "filter-refuted"

QUANTUM = 64

__all__ = [
    "Budget", "Verdict", "ProductiveCandidate", "reach_decide", "productive_check",
    "enumerate_productive", "lim_member", "state_equation_refutes", "YES", "NO", "UNKNOWN",
]


@dataclass(frozen=True)
class ProductiveCandidate:
    pi: tuple
    v: tuple

    def word(self, n: int = 1) -> tuple:
        """u_0^n a_1 u_1^n ... a_k u_k^n."""
        out = list(self.pi[0]) * n
        for a, u in zip(self.v, self.pi[1:]):
            out.append(a)
            out += list(u) * n
        return tuple(out)

    def size(self) -> int:
        return sum(len(u) for u in self.pi) + len(self.v)

    def __str__(self) -> str:
        parts = ["[" + " ".join(self.pi[0]) + "]"]
        for a, u in zip(self.v, self.pi[1:]):
            parts += [a, "[" + " ".join(u) + "]"]
        return " ".join(parts)


@dataclass(frozen=True)
class Verdict:
    answer: str
    witness: tuple | None = None
    refutation: str | None = None
    steps: int = 0
    candidate: ProductiveCandidate | None = None

    @property
    def definitive(self) -> bool:
        return self.answer != UNKNOWN


def _check_dim(sys, x) -> tuple:
    x = tuple(onat(a) for a in x)
    if len(x) != sys.dim:
        raise DimMismatch(f"vector of dimension {len(x)} vs system of dimension {sys.dim}")
    return x


def relax(sys) -> Vas:
    """Over-approximation of a VAS0: the zero test becomes an ordinary action."""
    if not isinstance(sys, Vasz):
        return sys
    delta = dict(sys.base.delta)
    guard = dict(sys.base.guard)
    delta[sys.ztest] = sys.zdelta
    if sys.zguard:
        guard[sys.ztest] = sys.zguard
    return Vas.make(sys.dim, delta, sys.init, guard)


def drop_drains(v: Vas) -> Vas:
    """The plain VAS without actions that never increase a component.

    By monotony such actions only lead below states already reachable, so
    the cover is unchanged while the Karp-Miller tree can shrink a lot.
    """
    delta = {a: d for a, d in v.delta if any(t > 0 for t in d)}
    guard = {a: g for a, g in v.guard if a in delta}
    return Vas.make(v.dim, delta, v.init, guard)


def _try_sub(budget: Budget, cap: int, fn):
    """Run ``fn(sub_budget)``; (True, value) or (False, None) if only the cap ran out."""
    if budget.remaining <= 1:
        return False, None
    sub = budget.sub(cap)
    try:
        return True, fn(sub)
    except BudgetExhausted:
        if budget.remaining <= 0:
            raise
        return False, None


# ----------------------------------------------------------------------------
# state equation


def _milp_feasible(A: np.ndarray, b: np.ndarray, extra: list):
    """Integer feasibility of A n = b, n >= 0 plus extra rows.

    Returns a list of ints, the string 'infeasible', or None to abstain.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    m, n = A.shape
    if n == 0:
        return [] if not np.any(b) else "infeasible"
    cons = [LinearConstraint(A, b, b)] if m else []
    for row, lo, hi in extra:
        cons.append(LinearConstraint(np.array([row], dtype=float), lo, hi))
    # presolve occasionally claims an optimum that violates the constraints;
    # such a claim is rechecked with presolve off
    for presolve in (True, False):
        res = milp(np.ones(n), constraints=cons, integrality=np.ones(n), bounds=Bounds(0, np.inf),
                   options={"node_limit": 5000, "time_limit": 10.0, "presolve": presolve})
        if res.status == 2:
            return "infeasible"
        if res.status != 0 or res.x is None:
            return None
        sol = [int(round(t)) for t in res.x]
        if _satisfies(A, b, extra, sol):
            return sol
    return None


def _satisfies(A: np.ndarray, b: np.ndarray, extra: list, sol: list) -> bool:
    if any(t < 0 for t in sol):
        return False
    if A.shape[0] and not np.array_equal(A.astype(np.int64) @ np.array(sol, dtype=np.int64), b.astype(np.int64)):
        return False
    return all(lo <= sum(r * t for r, t in zip(row, sol)) <= hi for row, lo, hi in extra)


def _blocked(support, marks, pre, post):
    """Places never marked when switching on ``support`` from ``marks``; None if all fire."""
    M = set(marks)
    todo = list(support)
    progress = True
    while progress and todo:
        progress = False
        rest = []
        for a in todo:
            if all(i in M for i in pre[a]):
                M.update(post[a])
                progress = True
            else:
                rest.append(a)
        todo = rest
    if not todo:
        return None
    return {i for a in todo for i in pre[a] if i not in M}


def state_equation_refutes(sys, target, budget: Budget | None = None, max_nodes: int = 64) -> bool:
    """True only if no Parikh vector with a consistent support reaches ``target``.

    A solution whose support cannot all be enabled forward from init (or
    backward from the target) is cut by branching: either no action consuming
    from the unmarked places W is used, or some action producing into W
    without consuming from it is. Every genuine run satisfies one of the two.
    """
    budget = as_budget(budget)
    sys = relax(sys)
    init = sys.init
    live = [i for i in range(sys.dim) if init[i] != OMEGA]
    acts = list(sys.actions)
    A = np.array([[sys.displacement(a)[i] for a in acts] for i in live], dtype=float).reshape(len(live), len(acts))
    b = np.array([target[i] - init[i] for i in live], dtype=float)
    pre, post = {}, {}
    for a in acts:
        p = sys.pre(a)
        d = sys.displacement(a)
        pre[a] = frozenset(i for i in live if p[i] > 0)
        post[a] = frozenset(i for i in live if p[i] + d[i] > 0)
    fmarks = {i for i in live if init[i] > 0}
    bmarks = {i for i in live if target[i] > 0}
    stack = [[]]
    nodes = 0
    while stack:
        extra = stack.pop()
        budget.spend()
        nodes += 1
        if nodes > max_nodes:
            return False
        sol = _milp_feasible(A, b, extra)
        if sol == "infeasible":
            continue
        if sol is None:
            return False
        support = [a for a, t in zip(acts, sol) if t > 0]
        W = _blocked(support, fmarks, pre, post)
        if W is not None:
            cons = {a for a in acts if pre[a] & W}
            prod = {a for a in acts if post[a] & W} - cons
        else:
            W = _blocked(support, bmarks, post, pre)
            if W is None:
                return False
            cons = {a for a in acts if post[a] & W}
            prod = {a for a in acts if pre[a] & W} - cons
        row_c = [1 if a in cons else 0 for a in acts]
        stack.append(extra + [(row_c, 0, 0)])
        if prod:
            row_p = [1 if a in prod else 0 for a in acts]
            stack.append(extra + [(row_p, 1, np.inf)])
    return True


# ----------------------------------------------------------------------------
# reachability


def _postponable(sys) -> dict:
    """Unguarded unit decrements that can always be moved to the end of a run."""
    base = sys.base if isinstance(sys, Vasz) else sys
    out = {}
    for a in base.actions:
        d = base.displacement(a)
        if base.guard_of(a) is None and d.count(-1) == 1 and d.count(0) == len(d) - 1:
            i = d.index(-1)
            if isinstance(sys, Vasz) and i == 0:
                continue
            out.setdefault(i, a)
    return out


def _search(sys, target: tuple, budget: Budget):
    """Breadth-first search for ``target``. Returns a word, EXHAUSTED, or raises on budget."""
    dec = _postponable(sys)
    skip = set(dec.values())
    base = sys.base if isinstance(sys, Vasz) else sys
    for a in base.actions:
        if not any(base.displacement(a)):
            skip.add(a)
    acts = [a for a in sorted(sys.actions) if a not in skip]
    disp = [sys.displacement(a) for a in acts]
    never_down = [i for i in range(sys.dim) if i not in dec and all(d[i] >= 0 for d in disp)]

    def goal(x):
        return all((x[i] >= target[i]) if i in dec else (x[i] == target[i]) for i in range(len(x)))

    def word_to(y):
        word = []
        cur = y
        while parent[cur] is not None:
            cur, act = parent[cur]
            word.append(act)
        word.reverse()
        for i in sorted(dec):
            word += [dec[i]] * int(y[i] - target[i])
        return tuple(word)

    start = tuple(sys.init)
    parent = {start: None}
    if goal(start):
        return word_to(start)
    queue = deque([start])
    while queue:
        x = queue.popleft()
        budget.spend()
        for a in acts:
            y = _step(x, a, sys)
            if y is None or y in parent:
                continue
            if any(y[i] > target[i] for i in never_down):
                continue
            parent[y] = (x, a)
            if goal(y):
                return word_to(y)
            queue.append(y)
    return EXHAUSTED


def cover_search(sys, target: tuple, budget: Budget):
    """Shortest word reaching some configuration above ``target``, or None if the space is exhausted."""
    start = tuple(sys.init)
    if all(a >= b for a, b in zip(start, target)):
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        budget.spend()
        for a, y in enabled(x, sys):
            if y in parent:
                continue
            parent[y] = (x, a)
            if all(p >= q for p, q in zip(y, target)):
                word = []
                cur = y
                while parent[cur] is not None:
                    cur, act = parent[cur]
                    word.append(act)
                return tuple(reversed(word))
            queue.append(y)
    return None


def refute(sys, target: tuple, budget: Budget, cover=None, use_equation: bool = True):
    """Try the cheap sound refutations; return a tag or None."""
    init = sys.init
    if any(a == OMEGA and b != OMEGA for a, b in zip(init, target)):
        return COVER_REFUTED
    if cover is None:
        rel = drop_drains(relax(sys))
        ok, cover = _try_sub(budget, max(1000, min(budget.remaining // 4, 50000)),
                             lambda sb: km_cover(rel, sb))
    if cover is not None and not any(all(a <= b for a, b in zip(target, c)) for c in cover):
        return COVER_REFUTED
    if use_equation and state_equation_refutes(sys, target, budget):
        return STATE_EQUATION_REFUTED
    return None


def _vasz_refute(sys: Vasz, target: tuple, budget: Budget):
    """Refutation by the exact VAS0 cover, when it fits in a slice of the budget."""
    from .vasz_analysis import vasz_cover

    ok, vc = _try_sub(budget, max(1000, min(budget.remaining // 4, 20000)),
                      lambda sb: vasz_cover(sys, sb))
    if ok and not any(all(a <= b for a, b in zip(target, c)) for c in vc):
        return COVER_REFUTED
    return None


QUICK_SEARCH = 2000


def reach_decide(sys, target, budget=None) -> Verdict:
    budget = as_budget(budget)
    start = budget.used
    target = _check_dim(sys, target)
    if not is_finite(target):
        raise ValueError(f"reachability target must be finite, got {fmt_vec(target)}")

    def done(res):
        if res == EXHAUSTED:
            return Verdict(NO, refutation=EXHAUSTED, steps=budget.used - start)
        assert fire_word(sys.init, res, sys) == target
        return Verdict(YES, witness=tuple(res), steps=budget.used - start)

    try:
        tag = refute(sys, target, budget)
        if tag is None and isinstance(sys, Vasz) and sys.is_normalized():
            # the VAS0 cover is expensive; a short search often settles it first
            ok, res = _try_sub(budget, QUICK_SEARCH, lambda sb: _search(sys, target, sb))
            if ok:
                return done(res)
            tag = _vasz_refute(sys, target, budget)
        if tag is not None:
            return Verdict(NO, refutation=tag, steps=budget.used - start)
        res = _search(sys, target, budget)
    except BudgetExhausted:
        return Verdict(UNKNOWN, steps=budget.used - start)
    return done(res)


# ----------------------------------------------------------------------------
# productive sequences


def productive_check(v: Vas, c: ProductiveCandidate) -> bool:
    if len(c.pi) != len(c.v) + 1:
        raise ValueError("a candidate needs exactly one more loop than separators")
    for a in itertools.chain(c.v, *c.pi):
        v.displacement(a)
    live = [i for i in range(v.dim) if v.init[i] != OMEGA]
    acc = [0] * v.dim
    for u in c.pi:
        for a in u:
            d = v.displacement(a)
            for i in live:
                acc[i] += d[i]
        if any(acc[i] < 0 for i in live):
            return False
    return fire_word(v.init, c.word(), v) is not None


def _limit(v: Vas, vd, total) -> tuple:
    return tuple(OMEGA if (x == OMEGA or t > 0) else x + e for x, e, t in zip(v.init, vd, total))


def _walk(v: Vas, L: int, skip_noops: bool) -> Iterator:
    """Depth-first walk over candidates of total size ``L`` in token order.

    Yields None for every visited prefix (one elementary step) and
    ``(candidate, limit)`` for every productive candidate. Prefixes that are
    not fireable or that break a partial-sum condition are cut, which does not
    change the set of productive candidates produced.
    """
    acts = sorted(v.actions)
    if skip_noops:
        acts = [a for a in acts if any(v.displacement(a))]
    toks = [(a, k) for a in acts for k in (0, 1)]
    disp = {a: v.displacement(a) for a in acts}
    live = [i for i in range(v.dim) if v.init[i] != OMEGA]
    dim = v.dim
    zero = (0,) * dim
    path: list = []

    def rec(x, depth, acc, cur, vd):
        yield None
        if depth == L:
            tot = tuple(p + q for p, q in zip(acc, cur))
            if all(tot[i] >= 0 for i in live):
                pi, sep, u = [], [], []
                for a, k in path:
                    if k:
                        pi.append(tuple(u))
                        sep.append(a)
                        u = []
                    else:
                        u.append(a)
                pi.append(tuple(u))
                yield ProductiveCandidate(tuple(pi), tuple(sep)), _limit(v, vd, tot)
            return
        for a, k in toks:
            y = _step(x, a, v)
            if y is None:
                continue
            d = disp[a]
            path.append((a, k))
            if k == 0:
                yield from rec(y, depth + 1, acc, tuple(p + q for p, q in zip(cur, d)), vd)
            else:
                nacc = tuple(p + q for p, q in zip(acc, cur))
                if all(nacc[i] >= 0 for i in live):
                    yield from rec(y, depth + 1, nacc, zero, tuple(p + q for p, q in zip(vd, d)))
            path.pop()

    yield from rec(tuple(v.init), 0, zero, zero, zero)


def enumerate_productive(v: Vas, size_bound: int, skip_noops: bool = False):
    """All productive candidates up to ``size_bound`` with their limits.

    Order: total size, then lexicographic on the token sequence, where a
    token is an action name tagged as loop letter (before) or separator.
    """
    for L in range(size_bound + 1):
        for item in _walk(v, L, skip_noops):
            if item is not None:
                yield item


# ----------------------------------------------------------------------------
# limit membership


def _limit_search(v: Vas, x: tuple):
    """Breadth-first search for a productive candidate whose limit is ``x``.

    Search nodes are (loop sum so far, current loop sum, separator sum); the
    configuration reached is determined by these, and so is every condition
    checked on extensions. Identical nodes are expanded once. Expansion follows
    token order, so the candidate found is the first one in enumeration order
    among those reaching a fresh node. Yields None per expanded node.
    """
    acts = [a for a in sorted(v.actions) if any(v.displacement(a))]
    toks = [(a, k) for a in acts for k in (0, 1)]
    disp = {a: v.displacement(a) for a in acts}
    live = [i for i in range(v.dim) if v.init[i] != OMEGA]
    fin = [i for i in live if x[i] != OMEGA]
    inf = [i for i in live if x[i] == OMEGA]
    init = tuple(v.init)
    zero = (0,) * v.dim
    root = (zero, zero, zero)
    parent = {root: None}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        yield None
        acc, cur, vd = node
        tot = tuple(p + q for p, q in zip(acc, cur))
        if (all(tot[i] >= 0 for i in live) and all(tot[i] == 0 and init[i] + vd[i] == x[i] for i in fin)
                and all(tot[i] > 0 for i in inf)):
            path = []
            n = node
            while parent[n] is not None:
                n, tok = parent[n]
                path.append(tok)
            path.reverse()
            pi, sep, u = [], [], []
            for a, k in path:
                if k:
                    pi.append(tuple(u))
                    sep.append(a)
                    u = []
                else:
                    u.append(a)
            pi.append(tuple(u))
            yield ProductiveCandidate(tuple(pi), tuple(sep))
            return
        here = tuple(a if a == OMEGA else a + t + w for a, t, w in zip(init, tot, vd))
        for a, k in toks:
            if _step(here, a, v) is None:
                continue
            d = disp[a]
            if k == 0:
                nxt = (acc, tuple(p + q for p, q in zip(cur, d)), vd)
            else:
                if not all(tot[i] >= 0 for i in live):
                    continue
                nxt = (tot, zero, tuple(p + q for p, q in zip(vd, d)))
            if nxt not in parent:
                parent[nxt] = (node, (a, k))
                queue.append(nxt)
    # every candidate was covered; leave the verdict to the other side
    while True:
        yield None


def _project(v: Vas, keep: list) -> Vas:
    delta = {a: tuple(d[i] for i in keep) for a, d in v.delta}
    guard = {a: tuple(g[i] for i in keep) for a, g in v.guard}
    return Vas.make(len(keep), delta, tuple(v.init[i] for i in keep), guard)


def lim_member(v: Vas, x, budget=None) -> Verdict:
    """Decide x ∈ Lim Post*(v) by dovetailing a YES and a NO semi-decider.

    YES side: breadth-first search for a productive candidate whose limit
    equals ``x``. NO side: for ell = 0, 1, ... try to refute y_ell in the
    system that may additionally drain the omega components of ``x``. Each side
    gets QUANTUM budget steps per turn.
    """
    budget = as_budget(budget)
    start = budget.used
    x = _check_dim(v, x)
    if isinstance(v, Vasz):
        raise TypeError("limit membership is only provided for plain VAS")
    frozen = [i for i in range(v.dim) if v.init[i] == OMEGA]
    if any(x[i] != OMEGA for i in frozen):
        return Verdict(NO, refutation=COVER_REFUTED, steps=0)
    if frozen:
        keep = [i for i in range(v.dim) if i not in frozen]
        if not keep:
            return Verdict(YES, witness=(), steps=0, candidate=ProductiveCandidate(((),), ()))
        inner = lim_member(_project(v, keep), tuple(x[i] for i in keep), budget)
        return inner
    if is_finite(x):
        return reach_decide(v, x, budget)

    def yes_side():
        for item in _limit_search(v, x):
            budget.spend()
            yield item

    def no_side():
        vy, seq = build_vas_y(v, x)
        # the tree may be large; grow its allowance so the other side keeps turns
        cap, cover = QUANTUM, None
        while cover is None:
            ok, cover = _try_sub(budget, cap, lambda sb: km_cover(drop_drains(v), sb))
            cap *= 2
            yield None
        for ell in itertools.count():
            # the cover test is cheap and monotone in ell; the state equation
            # is costly, so it only runs on a sparse subsequence
            sparse = ell < 4 or ell & (ell - 1) == 0
            tag = refute(vy, seq(ell), budget, cover=cover, use_equation=sparse)
            if tag is not None:
                log.debug("limit %s refuted at ell=%d (%s)", fmt_vec(x), ell, tag)
                yield tag
                return
            yield None

    ys, ns = yes_side(), no_side()
    # a single NO step may cost far more than a quantum, so each turn goes to
    # the side that has spent less so far
    spent = [0, 0]
    try:
        while True:
            side = 0 if spent[0] <= spent[1] else 1
            mark = budget.used
            while budget.used - mark < QUANTUM:
                if side == 0:
                    r = next(ys)
                    if r is not None:
                        return Verdict(YES, witness=r.word(), candidate=r, steps=budget.used - start)
                else:
                    budget.spend()
                    r = next(ns)
                    if r is not None:
                        return Verdict(NO, refutation=r, steps=budget.used - start)
            spent[side] += budget.used - mark
    except BudgetExhausted:
        return Verdict(UNKNOWN, steps=budget.used - start)
