"""Independent brute-force oracles used by the tests.

Everything here fires transitions directly and never calls the analyses
under test.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

W = float("inf")


# ---------------------------------------------------------------- firing

def step(x, delta, guard=None, zero=False):
    if zero and x[0] != 0:
        return None
    if guard is not None and any(a < g for a, g in zip(x, guard)):
        return None
    y = tuple(a if a == W else a + d for a, d in zip(x, delta))
    if any(a < 0 for a in y):
        return None
    return y


def succ(sysm, x):
    """Successors of a Vas or Vasz (reads the public fields only)."""
    base = getattr(sysm, "base", sysm)
    g = dict(base.guard)
    for a, d in base.delta:
        y = step(x, d, g.get(a))
        if y is not None:
            yield a, y
    if hasattr(sysm, "ztest"):
        y = step(x, sysm.zdelta, sysm.zguard or None, zero=True)
        if y is not None:
            yield sysm.ztest, y


def replay(sysm, word, x=None):
    x = tuple(sysm.init) if x is None else x
    table = dict(getattr(sysm, "base", sysm).delta)
    guards = dict(getattr(sysm, "base", sysm).guard)
    for a in word:
        if hasattr(sysm, "ztest") and a == sysm.ztest:
            x = step(x, sysm.zdelta, sysm.zguard or None, zero=True)
        else:
            x = step(x, table[a], guards.get(a))
        if x is None:
            return None
    return x


def explore(sysm, max_states=10_000, start=None):
    """Breadth-first reachable set. Returns (dict state -> word, complete?)."""
    start = tuple(sysm.init) if start is None else start
    words = {start: ()}
    queue = deque([start])
    while queue:
        if len(words) >= max_states:
            return words, False
        x = queue.popleft()
        for a, y in succ(sysm, x):
            if y not in words:
                words[y] = words[x] + (a,)
                queue.append(y)
    return words, True


def leq(x, y):
    return all(a <= b for a, b in zip(x, y))


def below_some(x, elems):
    return any(leq(x, b) for b in elems)


# ---------------------------------------------------------------- control states

def vassz_succ(s, conf):
    q, x = conf
    c = s.counters
    base = getattr(c, "base", c)
    table = dict(base.delta)
    z = getattr(c, "ztest", None)
    for p, a, r in s.trans:
        if p != q:
            continue
        if a == z:
            y = step(x, c.zdelta, None, zero=True)
        else:
            y = step(x, table[a])
        if y is not None:
            yield (p, a, r), (r, y)


def vassz_explore(s, max_states=5000):
    start = (s.init_state, tuple(s.counters.init))
    seen = {start}
    queue = deque([start])
    edges = {}
    complete = True
    while queue:
        c = queue.popleft()
        edges[c] = list(vassz_succ(s, c))
        for _, d in edges[c]:
            if d not in seen:
                if len(seen) >= max_states:
                    complete = False
                    continue
                seen.add(d)
                queue.append(d)
    return seen, edges, complete


def lasso_search(s, qf, max_states=3000, inner=None):
    """Direct search for (qf,x) ->+ (qf,y) with x <= y (no zero test on the
    loop) or x <=_1 y (zero test allowed), from a reachable (qf,x).

    YES when found. NO only when the whole reachable space was explored.
    None otherwise.
    """
    seen, edges, complete = vassz_explore(s, max_states)
    inner = max_states + 1 if inner is None else inner
    cut = False
    z = s.ztest
    for c in sorted(seen, key=lambda c: (c[0], c[1])):
        if c[0] != qf:
            continue
        x = c[1]
        for allow_zero in (False, True):
            frontier = deque()
            visited = set()
            for t, d in vassz_succ(s, c):
                if not allow_zero and t[1] == z:
                    continue
                if d not in visited:
                    visited.add(d)
                    frontier.append(d)
            while frontier:
                if len(visited) >= inner:
                    cut = True
                    break
                q, y = frontier.popleft()
                if q == qf:
                    ok = leq(x, y) if not allow_zero else (leq(x, y) and x[0] == y[0])
                    if ok:
                        return "YES"
                for t, d in vassz_succ(s, (q, y)):
                    if not allow_zero and t[1] == z:
                        continue
                    if d not in visited:
                        visited.add(d)
                        frontier.append(d)
    return "NO" if complete and not cut else None


# ---------------------------------------------------------------- integer feasibility

def small_integer_solution(A_cols, b, bound):
    """Search n in [0,bound]^k with sum n_j * col_j = b."""
    k = len(A_cols)
    for n in itertools.product(range(bound + 1), repeat=k):
        if all(sum(n[j] * A_cols[j][i] for j in range(k)) == b[i] for i in range(len(b))):
            return n
    return None


# ---------------------------------------------------------------- random models

def random_vector(rng: random.Random, dim, lo, hi):
    return tuple(rng.randint(lo, hi) for _ in range(dim))


def random_vas(rng: random.Random, max_dim=3, max_actions=4, mag=2, init_max=2):
    from vaszero.model import Vas

    dim = rng.randint(1, max_dim)
    k = rng.randint(1, max_actions)
    delta = {f"a{i}": random_vector(rng, dim, -mag, mag) for i in range(k)}
    init = random_vector(rng, dim, 0, init_max)
    return Vas.make(dim, delta, init)


def random_vassz(rng: random.Random, max_dim=2, max_states=3, mag=1, with_zero=True):
    from vaszero.model import Vas, Vassz, Vasz

    dim = rng.randint(1, max_dim)
    nq = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(nq))
    delta = {}
    trans = []
    for i in range(rng.randint(1, 5)):
        name = f"a{i}"
        delta[name] = random_vector(rng, dim, -mag, mag)
        trans.append((rng.choice(states), name, rng.choice(states)))
    init = random_vector(rng, dim, 0, 1)
    init = (0,) + init[1:]
    base = Vas.make(dim, delta, init)
    if with_zero:
        counters = Vasz(base, "z", (0,) + random_vector(rng, dim - 1, -1, 1))
        for _ in range(rng.randint(1, 2)):
            t = (rng.choice(states), "z", rng.choice(states))
            if t not in trans:
                trans.append(t)
    else:
        counters = base
    return Vassz(counters, states, tuple(trans), states[0])


def random_down_basis(rng: random.Random, dim, max_entry=6, p_omega=0.3, max_elems=4):
    elems = []
    for _ in range(rng.randint(0, max_elems)):
        elems.append(tuple(W if rng.random() < p_omega else rng.randint(0, max_entry) for _ in range(dim)))
    return elems
