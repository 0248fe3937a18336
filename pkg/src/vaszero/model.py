"""System models, firing semantics and derived constructions.

Models are immutable. Action tables are stored as sorted tuples of
``(name, vector)`` pairs so models hash and compare structurally; a dict view
is cached on each instance for lookups.

Besides its displacement an action may carry an enabling ``guard``: a
nonnegative vector the current configuration must dominate. Guards only come
from the control-state encoding, where a self-loop must still require its
source state even though its displacement leaves the state indicator alone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    AlphabetMismatch,
    DimMismatch,
    NotNormalized,
    UnknownAction,
    UnknownState,
    UnnormalizableZeroTest,
    ValidationError,
)
from .omega import OMEGA, OmegaVec, check_positions, fmt_vec, onat, unit, vec_add_opt

log = logging.getLogger(__name__)


def _leq(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


def _ivec(v: Sequence[int], dim: int, what: str) -> tuple:
    t = tuple(v)
    if len(t) != dim:
        raise DimMismatch(f"{what} has dimension {len(t)}, expected {dim}")
    for a in t:
        if a == OMEGA or not isinstance(a, int):
            raise ValidationError(f"{what} must have finite integer entries, got {fmt_vec(t)}")
    return t


# ----------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class Vas:
    dim: int
    delta: tuple
    init: OmegaVec
    guard: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError("dimension must be at least 1")
        init = tuple(onat(a) for a in self.init)
        if len(init) != self.dim:
            raise DimMismatch(f"init has dimension {len(init)}, expected {self.dim}")
        object.__setattr__(self, "init", init)
        d = {}
        for name, v in self.delta:
            if name in d:
                raise ValidationError(f"duplicate action {name!r}")
            d[name] = _ivec(v, self.dim, f"displacement of {name!r}")
        g = {}
        for name, v in self.guard:
            if name not in d:
                raise UnknownAction(f"guard for undeclared action {name!r}")
            gv = _ivec(v, self.dim, f"guard of {name!r}")
            if any(a < 0 for a in gv):
                raise ValidationError(f"guard of {name!r} has a negative entry")
            g[name] = gv
        object.__setattr__(self, "delta", tuple(sorted(d.items())))
        object.__setattr__(self, "guard", tuple(sorted(g.items())))
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "_g", g)

    @classmethod
    def make(cls, dim: int, delta: Mapping[str, Sequence[int]], init, guard=None) -> "Vas":
        return cls(dim, tuple((k, tuple(v)) for k, v in delta.items()), tuple(init),
                   tuple((k, tuple(v)) for k, v in (guard or {}).items()))

    @property
    def actions(self) -> tuple:
        return tuple(n for n, _ in self.delta)

    def displacement(self, a: str) -> tuple:
        try:
            return self._d[a]
        except KeyError:
            raise UnknownAction(f"unknown action {a!r}") from None

    def guard_of(self, a: str):
        return self._g.get(a)

    def pre(self, a: str) -> tuple:
        """Least configuration enabling ``a``."""
        d = self.displacement(a)
        g = self._g.get(a, (0,) * self.dim)
        return tuple(max(x, -y) for x, y in zip(g, d))


@dataclass(frozen=True)
class Vasz:
    base: Vas
    ztest: str
    zdelta: tuple
    zguard: tuple = ()

    def __post_init__(self):
        if self.ztest in self.base._d:
            raise ValidationError(f"zero-test name {self.ztest!r} clashes with an action")
        object.__setattr__(self, "zdelta", _ivec(self.zdelta, self.base.dim, "zero-test displacement"))
        if self.zguard:
            object.__setattr__(self, "zguard", _ivec(self.zguard, self.base.dim, "zero-test guard"))

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def init(self) -> OmegaVec:
        return self.base.init

    @property
    def actions(self) -> tuple:
        return self.base.actions + (self.ztest,)

    def displacement(self, a: str) -> tuple:
        if a == self.ztest:
            return self.zdelta
        return self.base.displacement(a)

    def pre(self, a: str) -> tuple:
        if a == self.ztest:
            g = self.zguard or (0,) * self.dim
            return tuple(max(x, -y) for x, y in zip(g, self.zdelta))
        return self.base.pre(a)

    def is_normalized(self) -> bool:
        return self.init[0] == 0 and self.zdelta[0] == 0


System = Union[Vas, Vasz]


@dataclass(frozen=True)
class Vassz:
    """Counters plus finite control. ``counters`` is a Vasz when a zero test exists."""

    counters: System
    states: tuple
    trans: tuple
    init_state: str

    def __post_init__(self):
        states = tuple(self.states)
        if len(set(states)) != len(states):
            raise ValidationError("duplicate state names")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "trans", tuple(tuple(t) for t in self.trans))
        known = set(self.counters.actions)
        sset = set(states)
        if self.init_state not in sset:
            raise UnknownState(f"initial state {self.init_state!r} is not declared")
        for p, a, q in self.trans:
            if a not in known:
                raise UnknownAction(f"transition uses undeclared action {a!r}")
            for s in (p, q):
                if s not in sset:
                    raise UnknownState(f"transition uses undeclared state {s!r}")

    @property
    def dim(self) -> int:
        return self.counters.dim

    @property
    def ztest(self):
        return self.counters.ztest if isinstance(self.counters, Vasz) else None


@dataclass(frozen=True)
class LabeledVassz:
    system: Vassz
    labels: tuple

    def __post_init__(self):
        lab = {tuple(t): s for t, s in self.labels}
        for t in self.system.trans:
            if t not in lab:
                raise ValidationError(f"transition {' '.join(t)} has no label")
        object.__setattr__(self, "labels", tuple(sorted(lab.items())))
        object.__setattr__(self, "_lab", lab)

    def label(self, t) -> str:
        return self._lab[tuple(t)]


@dataclass(frozen=True)
class BuchiAutomaton:
    alphabet: tuple
    states: tuple
    init: str
    accept: frozenset
    trans: tuple

    def __post_init__(self):
        ss = set(self.states)
        if self.init not in ss:
            raise UnknownState(f"automaton initial state {self.init!r} is not declared")
        for s in self.accept:
            if s not in ss:
                raise UnknownState(f"accepting state {s!r} is not declared")
        for s, sym, t in self.trans:
            if s not in ss or t not in ss:
                raise UnknownState(f"automaton transition {s} {sym} {t} uses an undeclared state")
            if sym not in self.alphabet:
                raise AlphabetMismatch(f"symbol {sym!r} is not in the automaton alphabet")
        object.__setattr__(self, "accept", frozenset(self.accept))


# ----------------------------------------------------------------------------
# firing


def _step(x: tuple, a: str, sys: System):
    """Fire without validation; returns None when disabled."""
    if isinstance(sys, Vasz):
        if a == sys.ztest:
            if x[0] != 0:
                return None
            if sys.zguard and not _leq(sys.zguard, x):
                return None
            return vec_add_opt(x, sys.zdelta)
        sys = sys.base
    d = sys._d.get(a)
    if d is None:
        raise UnknownAction(f"unknown action {a!r}")
    g = sys._g.get(a)
    if g is not None and not _leq(g, x):
        return None
    return vec_add_opt(x, d)


def fire(x: OmegaVec, a: str, sys: System):
    if len(x) != sys.dim:
        raise DimMismatch(f"vector of dimension {len(x)} vs system of dimension {sys.dim}")
    return _step(tuple(x), a, sys)


def fire_word(x: OmegaVec, w: Iterable[str], sys: System):
    if len(x) != sys.dim:
        raise DimMismatch(f"vector of dimension {len(x)} vs system of dimension {sys.dim}")
    cur = tuple(x)
    for a in w:
        cur = _step(cur, a, sys)
        if cur is None:
            return None
    return cur


def enabled(x: tuple, sys: System) -> list:
    """(action, successor) pairs in action-name order."""
    out = []
    for a in sorted(sys.actions):
        y = _step(x, a, sys)
        if y is not None:
            out.append((a, y))
    return out


# ----------------------------------------------------------------------------
# simple constructions


def strip_zero_test(vz: System) -> Vas:
    return vz.base if isinstance(vz, Vasz) else vz


def reinit(sys, x: OmegaVec):
    x = tuple(onat(a) for a in x)
    if len(x) != sys.dim:
        raise DimMismatch(f"vector of dimension {len(x)} vs system of dimension {sys.dim}")
    if isinstance(sys, Vas):
        return replace(sys, init=x)
    if isinstance(sys, Vasz):
        return replace(sys, base=replace(sys.base, init=x))
    if isinstance(sys, Vassz):
        return replace(sys, counters=reinit(sys.counters, x))
    raise TypeError(f"cannot reinitialise {type(sys).__name__}")


def fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def build_vas_P(v: Vas, P: Iterable[int]) -> Vas:
    """Add one action per component: a no-op on ``P``, a unit decrement elsewhere."""
    ps = check_positions(P, v.dim)
    delta = dict(v.delta)
    for i in range(1, v.dim + 1):
        name = fresh_name(f"b#vasP.{i}", delta)
        delta[name] = (0,) * v.dim if i in ps else unit(v.dim, i, -1)
    return Vas.make(v.dim, delta, v.init, dict(v.guard))


@dataclass(frozen=True)
class YSequence:
    """``ell -> y_ell``: omega entries of ``y`` replaced by ``ell``."""

    y: OmegaVec

    def __call__(self, ell: int) -> OmegaVec:
        return tuple(ell if a == OMEGA else a for a in self.y)


def build_vas_y(v: Vas, y: OmegaVec):
    y = tuple(onat(a) for a in y)
    if len(y) != v.dim:
        raise DimMismatch(f"vector of dimension {len(y)} vs system of dimension {v.dim}")
    delta = dict(v.delta)
    for i in range(1, v.dim + 1):
        name = fresh_name(f"b#vasY.{i}", delta)
        delta[name] = unit(v.dim, i, -1) if y[i - 1] == OMEGA else (0,) * v.dim
    return Vas.make(v.dim, delta, v.init, dict(v.guard)), YSequence(y)


# ----------------------------------------------------------------------------
# normalisation and state encoding


def _with_counters(s: Vassz, counters: System, states, trans, init_state) -> Vassz:
    return Vassz(counters, tuple(states), tuple(trans), init_state)


def wrap_single_state(sys: System, state: str = "#main") -> Vassz:
    trans = [(state, a, state) for a in sys.actions]
    return Vassz(sys, (state,), tuple(trans), state)


def split_zero_test(s: Vassz) -> Vassz:
    """Make the zero test displacement-free by moving its effect to a fresh action."""
    c = s.counters
    if not isinstance(c, Vasz) or not any(c.zdelta):
        return s
    d = c.dim
    delta = dict(c.base.delta)
    fix = fresh_name("#zfix", set(delta) | {c.ztest})
    delta[fix] = c.zdelta
    states = list(s.states)
    trans = []
    k = 0
    for p, a, q in s.trans:
        if a != c.ztest:
            trans.append((p, a, q))
            continue
        k += 1
        aux = fresh_name(f"#zaux{k}", set(states))
        states.append(aux)
        trans += [(p, a, aux), (aux, fix, q)]
    base = Vas.make(d, delta, c.init, dict(c.base.guard))
    counters = Vasz(base, c.ztest, (0,) * d, c.zguard)
    return _with_counters(s, counters, states, trans, s.init_state)


def normalize_vassz(s: Vassz) -> Vassz:
    c = s.counters
    if not isinstance(c, Vasz):
        return s
    if c.zdelta[0] < 0:
        raise UnnormalizableZeroTest(
            f"zero test decrements component 1 by {-c.zdelta[0]}; it can never fire")
    if c.zdelta[0] > 0:
        s = split_zero_test(s)
        c = s.counters
    k = c.init[0]
    if k == OMEGA:
        raise NotNormalized("component 1 starts at omega, so the zero test can never fire")
    if k > 0:
        start = fresh_name("#start", set(s.states))
        act = fresh_name("#start", set(c.actions))
        delta = dict(c.base.delta)
        delta[act] = unit(c.dim, 1, k)
        init = (0,) + tuple(c.init[1:])
        base = Vas.make(c.dim, delta, init, dict(c.base.guard))
        counters = Vasz(base, c.ztest, c.zdelta, c.zguard)
        s = _with_counters(s, counters, (start,) + s.states,
                           ((start, act, s.init_state),) + s.trans, start)
    return s


def normalize(vz: Vasz) -> Vassz:
    return normalize_vassz(wrap_single_state(vz))


@dataclass(frozen=True)
class Layout:
    """Where things live in an encoded system.

    ``states`` maps each control state (including gadget states) to its
    1-indexed component; ``origin`` maps encoded action names to the original
    transition (p, a, q), or to None for gadget bookkeeping steps.
    """

    counters: int
    dim: int
    states: tuple
    origin: tuple

    def __post_init__(self):
        object.__setattr__(self, "_st", dict(self.states))
        object.__setattr__(self, "_or", dict(self.origin))

    def component(self, state: str) -> int:
        try:
            return self._st[state]
        except KeyError:
            raise UnknownState(f"unknown state {state!r}") from None

    def encode(self, counters: OmegaVec, state: str) -> OmegaVec:
        if len(counters) != self.counters:
            raise DimMismatch(f"vector of dimension {len(counters)}, expected {self.counters}")
        v = list(counters) + [0] * (self.dim - self.counters)
        v[self.component(state) - 1] = 1
        return tuple(v)

    def decode_word(self, word: Iterable[str]) -> list:
        """Original transitions along an encoded word."""
        out = []
        for a in word:
            t = self._or.get(a)
            if t is not None:
                out.append(t)
        return out

    def state_of(self, x: OmegaVec):
        """The control state whose indicator is positive, if exactly one is."""
        hits = [s for s, i in self.states if x[i - 1] != 0]
        return hits[0] if len(hits) == 1 else None


def encode_vassz_as_vasz(s: Vassz):
    """Turn control states into 1-bounded counters placed after the real ones.

    Transition number k (zero tests excluded) becomes action ``#t<k>`` with
    displacement δ(a) - e_p + e_q and a guard on e_p. A single zero-test
    transition maps onto the zero test directly. Several of them share the one
    zero-test action through two hub states and one memory component per
    transition, which remembers where to resume.
    """
    s = normalize_vassz(s)
    c = s.counters
    d = c.dim
    z = s.ztest
    ztrans = [t for t in s.trans if z is not None and t[1] == z]
    states = list(s.states)
    hub = len(ztrans) > 1
    if hub:
        ztest_st = fresh_name("#ztest", set(states))
        states.append(ztest_st)
        zdone_st = fresh_name("#zdone", set(states))
        states.append(zdone_st)
    idx = {q: d + k for k, q in enumerate(states, start=1)}
    mem = {}
    dim = d + len(states)
    if hub:
        for k, t in enumerate(ztrans, start=1):
            dim += 1
            mem[k] = dim

    def ext(v, extra=()):
        out = list(v) + [0] * (dim - d)
        for comp, k in extra:
            out[comp - 1] += k
        return tuple(out)

    base = strip_zero_test(c)
    delta, guard, origin = {}, {}, {}
    k = 0
    for t in s.trans:
        p, a, q = t
        if a == z:
            continue
        k += 1
        name = f"#t{k}"
        delta[name] = ext(base.displacement(a), [(idx[p], -1), (idx[q], 1)])
        g = base.guard_of(a) or (0,) * d
        guard[name] = ext(g, [(idx[p], 1)])
        origin[name] = t
    init = ext(c.init, [(idx[s.init_state], 1)])
    if z is None:
        vas = Vas.make(dim, delta, init, guard)
        return vas, Layout(d, dim, tuple(idx.items()), tuple(origin.items()))
    zg = c.zguard or (0,) * d
    if not hub:
        if ztrans:
            p, _, q = ztrans[0]
            zd = ext(c.zdelta, [(idx[p], -1), (idx[q], 1)])
            zgd = ext(zg, [(idx[p], 1)])
            origin[z] = ztrans[0]
        else:
            # declared but unused: keep it disabled by requiring an impossible indicator sum
            zd = ext(c.zdelta)
            zgd = ext(zg, [(i, 1) for i in idx.values()]) if len(idx) > 1 else ext(zg, [(d + 1, 2)])
    else:
        for k, (p, _, q) in enumerate(ztrans, start=1):
            name_in = fresh_name(f"#zin{k}", delta)
            name_out = fresh_name(f"#zout{k}", delta)
            delta[name_in] = ext((0,) * d, [(idx[p], -1), (idx[ztest_st], 1), (mem[k], 1)])
            delta[name_out] = ext((0,) * d, [(idx[zdone_st], -1), (mem[k], -1), (idx[q], 1)])
            origin[name_in] = ztrans[k - 1]
        zd = ext(c.zdelta, [(idx[ztest_st], -1), (idx[zdone_st], 1)])
        zgd = ext(zg, [(idx[ztest_st], 1)])
    vas = Vas.make(dim, delta, init, guard)
    vz = Vasz(vas, z, zd, zgd)
    return vz, Layout(d, dim, tuple(idx.items()), tuple(origin.items()))


def encode(sys) :
    """Encode any model into a VAS or VAS0 (identity layout for plain systems)."""
    if isinstance(sys, Vassz):
        return encode_vassz_as_vasz(sys)
    return sys, None


# ----------------------------------------------------------------------------
# constructions for repeated control-state reachability and model checking


def build_repeated_product(s: Vassz, qf: str, with_origin: bool = False):
    """Product deciding whether ``qf`` can be visited infinitely often.

    Returns ``(system, r_i, r_ii)``, plus a map from product actions to the
    original actions when ``with_origin`` is set (gadget actions are absent). The system has 2d counters. It first
    runs the original transitions on both halves. From ``qf`` it enters copy
    (i), which has no zero test, or copy (ii). Both copies move only the first
    half. Back at ``qf`` in a copy, it can jump to ``r_i`` or ``r_ii``. There,
    decrement loops drain both halves to zero exactly when the second half
    (the earlier visit) is below the first. The ``r_ii`` loops also require
    equality on component 1.
    """
    if qf not in s.states:
        raise UnknownState(f"unknown state {qf!r}")
    own = set(s.counters.actions)
    s = split_zero_test(s)
    c = s.counters
    d = c.dim
    D = 2 * d
    z = s.ztest
    base = strip_zero_test(c)
    zeros = (0,) * d
    delta, guard = {}, {}
    names = set(base.actions) | ({z} if z else set())
    copy_i, copy_ii = {}, {}
    for a in base.actions:
        da = base.displacement(a)
        g = base.guard_of(a)
        delta[a] = da + da
        copy_i[a] = fresh_name(f"{a}#i", names | set(delta))
        delta[copy_i[a]] = da + zeros
        copy_ii[a] = fresh_name(f"{a}#ii", names | set(delta))
        delta[copy_ii[a]] = da + zeros
        if g is not None:
            for n in (a, copy_i[a], copy_ii[a]):
                guard[n] = g + zeros
    taken = names | set(delta)
    jump_i = fresh_name("jump#i", taken)
    jump_ii = fresh_name("jump#ii", taken | {jump_i})
    delta[jump_i] = (0,) * D
    delta[jump_ii] = (0,) * D
    dec = {}
    for i in range(1, d + 1):
        both = unit(d, i, -1) + unit(d, i, -1)
        first = unit(d, i, -1) + zeros
        for tag in ("i", "ii"):
            n = fresh_name(f"dec{i}#{tag}", set(delta) | names)
            delta[n] = both
            dec[(tag, i, "both")] = n
            if tag == "ii" and i == 1:
                continue
            n = fresh_name(f"decfirst{i}#{tag}", set(delta) | names)
            delta[n] = first
            dec[(tag, i, "first")] = n
    init = tuple(c.init) + tuple(c.init)
    vas = Vas.make(D, delta, init, guard)
    if z is not None:
        zg = (c.zguard + zeros) if c.zguard else ()
        counters: System = Vasz(vas, z, (0,) * D, zg)
    else:
        counters = vas

    Q = list(s.states)
    allq = set(Q)
    qi = {q: fresh_name(f"{q}#i", allq) for q in Q}
    allq |= set(qi.values())
    qii = {q: fresh_name(f"{q}#ii", allq) for q in Q}
    allq |= set(qii.values())
    r_i = fresh_name("r#i", allq)
    allq.add(r_i)
    r_ii = fresh_name("r#ii", allq)
    states = Q + [qi[q] for q in Q] + [qii[q] for q in Q] + [r_i, r_ii]

    trans = list(s.trans)
    for p, a, q in s.trans:
        if a != z:
            trans.append((qi[p], copy_i[a], qi[q]))
            if p == qf:
                trans.append((p, copy_i[a], qi[q]))
        ai = a if a == z else copy_ii[a]
        trans.append((qii[p], ai, qii[q]))
        if p == qf:
            trans.append((p, ai, qii[q]))
    trans.append((qi[qf], jump_i, r_i))
    trans.append((qii[qf], jump_ii, r_ii))
    for (tag, i, kind), n in sorted(dec.items()):
        r = r_i if tag == "i" else r_ii
        trans.append((r, n, r))
    prod = Vassz(counters, tuple(states), tuple(trans), s.init_state)
    if not with_origin:
        return prod, r_i, r_ii
    origin = {a: a for a in own}
    for a in base.actions:
        if a in own:
            origin[copy_i[a]] = origin[copy_ii[a]] = a
    return prod, r_i, r_ii, origin


def buchi_product(ls: LabeledVassz, b: BuchiAutomaton):
    """Synchronised product restricted to product states reachable in the graph.

    Returns ``(product, accepting_states, product_labels)``.
    """
    used = {sym for _, sym in ls.labels}
    missing = used - set(b.alphabet)
    if missing:
        raise AlphabetMismatch(f"labels not in the automaton alphabet: {', '.join(sorted(missing))}")
    s = ls.system
    by_sym: dict = {}
    for src, sym, dst in b.trans:
        by_sym.setdefault((src, sym), []).append(dst)
    out_of: dict = {}
    for t in s.trans:
        out_of.setdefault(t[0], []).append(t)

    def pname(p, q):
        return f"{p}|{q}"

    start = (s.init_state, b.init)
    seen = {start}
    order = [start]
    trans, labels = [], {}
    i = 0
    while i < len(order):
        p, bs = order[i]
        i += 1
        for t in out_of.get(p, []):
            sym = ls.label(t)
            for bs2 in sorted(by_sym.get((bs, sym), [])):
                nxt = (t[2], bs2)
                pt = (pname(p, bs), t[1], pname(*nxt))
                trans.append(pt)
                labels[pt] = sym
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
    states = tuple(pname(p, q) for p, q in order)
    if len(set(states)) != len(states):
        raise ValidationError("state names containing '|' make the product ambiguous")
    accepting = tuple(sorted(pname(p, q) for p, q in order if q in b.accept))
    prod = Vassz(s.counters, states, tuple(trans), pname(*start))
    return prod, accepting, labels
