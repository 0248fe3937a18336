"""Finite bases for downward-closed sets over N_omega^d and upward-closed sets over N^d.

A downward-closed set is stored by its maximal elements (``DownBasis``), an
upward-closed set by its minimal elements (``UpBasis``). Both keep their
elements in canonical lexicographic order, omega sorting last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DimMismatch, ValidationError
from .omega import OMEGA, OmegaVec, fmt_vec, vec_max, vec_min


def _dedupe_dims(vs: Iterable[OmegaVec], dim: int | None) -> tuple[list, int | None]:
    items = list(dict.fromkeys(tuple(v) for v in vs))
    for v in items:
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise DimMismatch(f"vector {fmt_vec(v)} has dimension {len(v)}, expected {dim}")
    return items, dim


def _leq(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


def _maximal(items: list) -> list:
    # sort descending by sum so that dominators tend to come first
    items = sorted(items, key=lambda v: (-sum(min(a, 10**9) for a in v), v))
    kept: list = []
    for v in items:
        if not any(_leq(v, k) for k in kept):
            kept = [k for k in kept if not _leq(k, v)]
            kept.append(v)
    return kept


def _minimal(items: list) -> list:
    items = sorted(items, key=lambda v: (sum(v), v))
    kept: list = []
    for v in items:
        if not any(_leq(k, v) for k in kept):
            kept.append(v)
    return kept


@dataclass(frozen=True)
class DownBasis:
    dim: int
    elems: tuple

    def __iter__(self):
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, v) -> bool:
        return down_member(tuple(v), self)

    def format(self) -> str:
        return format_basis(self)


@dataclass(frozen=True)
class UpBasis:
    dim: int
    elems: tuple

    def __post_init__(self):
        for v in self.elems:
            if any(a == OMEGA for a in v):
                raise ValidationError(f"upward basis element {fmt_vec(v)} has an omega entry")

    def __iter__(self):
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, v) -> bool:
        return any(_leq(u, tuple(v)) for u in self.elems)


def minimize_down(vs: Iterable[OmegaVec], dim: int | None = None) -> DownBasis:
    items, dim = _dedupe_dims(vs, dim)
    if dim is None:
        raise ValueError("dimension of an empty basis must be given")
    return DownBasis(dim, tuple(sorted(_maximal(items))))


def minimize_up(vs: Iterable[OmegaVec], dim: int | None = None) -> UpBasis:
    items, dim = _dedupe_dims(vs, dim)
    if dim is None:
        raise ValueError("dimension of an empty basis must be given")
    return UpBasis(dim, tuple(sorted(_minimal(items))))


def down_member(v: OmegaVec, B: DownBasis) -> bool:
    if len(v) != B.dim:
        raise DimMismatch(f"vector of dimension {len(v)} vs basis of dimension {B.dim}")
    return any(_leq(v, b) for b in B.elems)


def _same_dim(B1, B2) -> None:
    if B1.dim != B2.dim:
        raise DimMismatch(f"basis dimensions {B1.dim} vs {B2.dim}")


def down_included(B1: DownBasis, B2: DownBasis) -> bool:
    _same_dim(B1, B2)
    return all(down_member(b, B2) for b in B1.elems)


def down_compare(B1: DownBasis, B2: DownBasis) -> str:
    """Return one of ``subset``, ``superset``, ``equal``, ``incomparable``."""
    le = down_included(B1, B2)
    ge = down_included(B2, B1)
    if le and ge:
        return "equal"
    if le:
        return "subset"
    if ge:
        return "superset"
    return "incomparable"


def down_union(B1: DownBasis, B2: DownBasis) -> DownBasis:
    _same_dim(B1, B2)
    return minimize_down(B1.elems + B2.elems, B1.dim)


def complement_down(B: DownBasis) -> UpBasis:
    """Minimal basis of N^d minus the downward closure of ``B``."""
    d = B.dim
    gens = [tuple([0] * d)]
    for b in B.elems:
        terms = [tuple(b[i] + 1 if j == i else 0 for j in range(d))
                 for i in range(d) if b[i] != OMEGA]
        gens = _minimal(list({vec_max(g, t) for g in gens for t in terms}))
        if not gens:
            break
    return UpBasis(d, tuple(sorted(gens)))


def complement_up(U: UpBasis) -> DownBasis:
    """Limit-closed basis of N^d minus the upward closure of ``U``."""
    d = U.dim
    gens = [tuple([OMEGA] * d)]
    for u in U.elems:
        terms = [tuple(u[i] - 1 if j == i else OMEGA for j in range(d))
                 for i in range(d) if u[i] > 0]
        gens = _maximal(list({vec_min(g, t) for g in gens for t in terms}))
        if not gens:
            break
    return DownBasis(d, tuple(sorted(gens)))


def filter_down(B: DownBasis, f: OmegaVec) -> DownBasis:
    """Basis of the f-filtered downward closure of ``↓B``."""
    if len(f) != B.dim:
        raise DimMismatch(f"filter of dimension {len(f)} vs basis of dimension {B.dim}")
    out = []
    for b in B.elems:
        if all(fi == OMEGA or fi <= bi for fi, bi in zip(f, b)):
            out.append(tuple(bi if fi == OMEGA else fi for fi, bi in zip(f, b)))
    return minimize_down(out, B.dim)


def format_basis(B: DownBasis) -> str:
    lines = [f"basis {len(B.elems)}"]
    lines += [fmt_vec(b) for b in B.elems]
    return "\n".join(lines)
