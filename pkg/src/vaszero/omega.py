"""Arithmetic and orderings on naturals extended with omega.

Omega is represented by ``math.inf`` so that the built-in comparisons and
tuple ordering already treat it as the greatest value. Vectors are plain
tuples; helpers here validate dimensions and keep integer entries as ``int``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, Union

from .errors import BadPosition, DimMismatch, NegativeResult, NotComparable, ParseError

OMEGA = math.inf

OmegaNat = Union[int, float]
OmegaVec = tuple


def is_omega(x: OmegaNat) -> bool:
    return x == OMEGA


def onat(x) -> OmegaNat:
    """Coerce ``x`` into a canonical extended natural."""
    if x == OMEGA or x == "w":
        return OMEGA
    if isinstance(x, float):
        if not x.is_integer():
            raise ValueError(f"not a natural number: {x}")
        x = int(x)
    if not isinstance(x, int) or x < 0:
        raise ValueError(f"not a natural number: {x!r}")
    return x


def vec(*entries) -> OmegaVec:
    """Build a vector; accepts either varargs or a single iterable."""
    if len(entries) == 1 and not isinstance(entries[0], (int, float, str)):
        entries = tuple(entries[0])
    return tuple(onat(e) for e in entries)


def onat_add(x: OmegaNat, n: int) -> OmegaNat:
    if x == OMEGA:
        return OMEGA
    r = x + n
    if r < 0:
        raise NegativeResult(f"{x} + {n} is negative")
    return r


def onat_mul(k: OmegaNat, x: OmegaNat) -> OmegaNat:
    if k == 0 or x == 0:
        return 0
    if k == OMEGA or x == OMEGA:
        return OMEGA
    return k * x


def _check_dims(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimMismatch(f"dimension {len(x)} vs {len(y)}")


def check_positions(P: Iterable[int], dim: int) -> frozenset:
    ps = frozenset(P)
    for p in ps:
        if not isinstance(p, int) or not 1 <= p <= dim:
            raise BadPosition(f"position {p} outside 1..{dim}")
    return ps


def vec_leq(x: OmegaVec, y: OmegaVec) -> bool:
    _check_dims(x, y)
    return all(a <= b for a, b in zip(x, y))


def vec_leq_P(x: OmegaVec, y: OmegaVec, P: Iterable[int]) -> bool:
    _check_dims(x, y)
    ps = check_positions(P, len(x))
    for i, (a, b) in enumerate(zip(x, y), start=1):
        if i in ps:
            if a != b:
                return False
        elif a > b:
            return False
    return True


def widen(x: OmegaVec, y: OmegaVec) -> OmegaVec:
    """Acceleration: components that grew from ``x`` to ``y`` become omega."""
    if not vec_leq(x, y):
        raise NotComparable(f"{fmt_vec(x)} is not below {fmt_vec(y)}")
    return tuple(OMEGA if a < b else a for a, b in zip(x, y))


def vec_add(x: OmegaVec, d: Sequence[int]) -> OmegaVec:
    """``x + d`` with omega absorbing; raises NegativeResult on underflow."""
    _check_dims(x, d)
    return tuple(onat_add(a, b) for a, b in zip(x, d))


def vec_add_opt(x: OmegaVec, d: Sequence[int]):
    """Like vec_add but returns None instead of raising."""
    out = []
    for a, b in zip(x, d):
        if a == OMEGA:
            out.append(OMEGA)
        else:
            r = a + b
            if r < 0:
                return None
            out.append(r)
    return tuple(out)


def vec_max(x: OmegaVec, y: OmegaVec) -> OmegaVec:
    return tuple(max(a, b) for a, b in zip(x, y))


def vec_min(x: OmegaVec, y: OmegaVec) -> OmegaVec:
    return tuple(min(a, b) for a, b in zip(x, y))


def unit(dim: int, i: int, k: int = 1) -> OmegaVec:
    """``k * e_i`` with 1-indexed ``i``."""
    v = [0] * dim
    v[i - 1] = k
    return tuple(v)


def is_finite(x: OmegaVec) -> bool:
    return all(a != OMEGA for a in x)


def fmt_onat(x: OmegaNat) -> str:
    return "w" if x == OMEGA else str(int(x))


def fmt_vec(x: Sequence) -> str:
    return ",".join(fmt_onat(a) for a in x)


def parse_vec(text: str, allow_omega: bool = True) -> OmegaVec:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok == "w":
            if not allow_omega:
                raise ParseError("omega is not allowed here")
            out.append(OMEGA)
            continue
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"bad vector entry {tok!r}") from None
    return tuple(out)
