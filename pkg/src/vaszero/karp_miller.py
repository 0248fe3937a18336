"""Karp-Miller coverability trees for VAS and VASS (the latter via state encoding)."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .budget import Budget
from .closed_sets import DownBasis, minimize_down
from .model import Vas, Vassz, Vasz, _step, encode_vassz_as_vasz, strip_zero_test
from .omega import OMEGA, fmt_vec

log = logging.getLogger(__name__)


@dataclass
class KmNode:
    label: tuple
    parent: int | None
    action: str | None
    depth: int
    closed: bool = False
    children: list = field(default_factory=list)
    tag: str | None = None


@dataclass
class KmTree:
    nodes: list
    layout: object = None

    def labels(self) -> list:
        return [n.label for n in self.nodes]

    def ancestors(self, i: int):
        """Strict ancestors of node ``i``, root first."""
        chain = []
        p = self.nodes[i].parent
        while p is not None:
            chain.append(p)
            p = self.nodes[p].parent
        return list(reversed(chain))

    def dump(self) -> str:
        lines = []

        def show(label):
            if self.layout is not None:
                st = self.layout.state_of(label)
                head = fmt_vec(label[: self.layout.counters])
                return f"({st},{head})" if st is not None else fmt_vec(label)
            return fmt_vec(label)

        stack = [0]
        while stack:
            i = stack.pop()
            n = self.nodes[i]
            edge = n.action if n.action is not None else n.tag
            extra = f" [{edge}]" if edge else ""
            closed = " (closed)" if n.closed else ""
            lines.append("  " * n.depth + show(n.label) + extra + closed)
            stack.extend(reversed(n.children))
        return "\n".join(lines) + "\n"


def _leq(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


def accelerate(x: tuple, ancestors) -> tuple:
    """Widen ``x`` against every ancestor label below it until nothing changes."""
    changed = True
    while changed:
        changed = False
        for y in ancestors:
            if _leq(y, x) and y != x:
                z = tuple(OMEGA if a < b else b for a, b in zip(y, x))
                if z != x:
                    x = z
                    changed = True
    return x


def km_tree(v, budget: Budget | None = None) -> KmTree:
    layout = None
    if isinstance(v, Vassz):
        v, layout = encode_vassz_as_vasz(v)
    v = strip_zero_test(v) if isinstance(v, Vasz) else v
    acts = sorted(v.actions)
    nodes = [KmNode(tuple(v.init), None, None, 0)]
    tree = KmTree(nodes, layout)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        if budget is not None:
            budget.spend()
        n = nodes[i]
        anc = tree.ancestors(i)
        if any(nodes[a].label == n.label for a in anc):
            n.closed = True
            continue
        chain = [nodes[a].label for a in anc] + [n.label]
        for a in acts:
            y = _step(n.label, a, v)
            if y is None:
                continue
            y = accelerate(y, chain)
            nodes.append(KmNode(y, i, a, n.depth + 1))
            n.children.append(len(nodes) - 1)
            queue.append(len(nodes) - 1)
    log.debug("karp-miller tree with %d nodes", len(nodes))
    return tree


_cover_cache: dict = {}


def km_cover(v, budget: Budget | None = None) -> DownBasis:
    key = v
    hit = _cover_cache.get(key)
    if hit is not None:
        return hit
    tree = km_tree(v, budget)
    dim = len(tree.nodes[0].label)
    B = minimize_down(tree.labels(), dim)
    if len(_cover_cache) > 4096:
        _cover_cache.clear()
    _cover_cache[key] = B
    return B
