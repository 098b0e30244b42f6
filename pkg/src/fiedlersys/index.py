"""Index tuples and bijections that label products of Fiedler factors.

A factor order ``(i_1, ..., i_m)`` lists factor indices left to right in the
product ``M_{i_1} ... M_{i_m}``.  The associated bijection ``sigma`` maps a
factor index to its 1-based position, ``sigma(i_j) = j``.  Factor orders are
the canonical representation here; ``sigma`` is derived when needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import PreconditionError, ValidationError

__all__ = [
    "Bijection", "CipPair", "from_factor_order", "parse_order", "ciss", "cip",
    "rev", "csf", "strings", "string_decomposition", "first_companion",
    "second_companion", "all_orders", "consecutions_inversions",
]


class CipPair(NamedTuple):
    c0: int
    i0: int


def parse_order(text: str) -> tuple:
    """Parse ``"5,3,1,4,2,0"`` into ``(5, 3, 1, 4, 2, 0)``."""
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"cannot parse index tuple {text!r}") from exc


def _check_permutation(order: Sequence[int], m: int | None = None) -> tuple:
    order = tuple(int(i) for i in order)
    m = len(order) if m is None else m
    if sorted(order) != list(range(m)):
        raise ValidationError(f"{order} is not a permutation of 0..{m - 1}")
    return order


@dataclass(frozen=True)
class Bijection:
    """``sigma : {0..m-1} -> {1..m}``; ``sigma[i]`` is the position of factor ``i``."""

    sigma: tuple

    def __post_init__(self):
        sig = tuple(int(s) for s in self.sigma)
        if sorted(sig) != list(range(1, len(sig) + 1)) or not sig:
            raise ValidationError(f"{sig} is not a bijection onto 1..{len(sig)}")
        object.__setattr__(self, "sigma", sig)

    @property
    def m(self) -> int:
        return len(self.sigma)

    @property
    def order(self) -> tuple:
        """Factor order: the factor index found at each position."""
        out = [0] * self.m
        for i, pos in enumerate(self.sigma):
            out[pos - 1] = i
        return tuple(out)

    def __call__(self, i: int) -> int:
        return self.sigma[i]

    def __str__(self):
        return ",".join(str(i) for i in self.order)


def from_factor_order(order: Sequence[int]) -> Bijection:
    order = _check_permutation(order)
    sigma = [0] * len(order)
    for pos, i in enumerate(order):
        sigma[i] = pos + 1
    return Bijection(tuple(sigma))


def _as_bijection(s) -> Bijection:
    return s if isinstance(s, Bijection) else from_factor_order(s)


def first_companion(m: int) -> tuple:
    return tuple(range(m - 1, -1, -1))


def second_companion(m: int) -> tuple:
    return tuple(range(m))


def all_orders(m: int) -> Iterable[tuple]:
    return itertools.permutations(range(m))


def consecutions_inversions(sigma) -> tuple:
    """Total numbers ``(c(sigma), i(sigma))`` of consecutions and inversions."""
    s = _as_bijection(sigma).sigma
    c = sum(1 for d in range(len(s) - 1) if s[d] < s[d + 1])
    return c, len(s) - 1 - c


def ciss(sigma) -> tuple:
    """Consecution-inversion structure sequence as a tuple of ``(c_j, i_j)`` pairs.

    Runs alternate starting with consecutions at ``d = 0``; the first
    consecution run and the last inversion run may be empty.  Empty for
    ``m = 1``.
    """
    s = _as_bijection(sigma).sigma
    flags = [s[d] < s[d + 1] for d in range(len(s) - 1)]
    pairs = []
    k = 0
    while k < len(flags):
        c = 0
        while k < len(flags) and flags[k]:
            c += 1
            k += 1
        i = 0
        while k < len(flags) and not flags[k]:
            i += 1
            k += 1
        pairs.append((c, i))
    return tuple(pairs)


def leading_runs(sigma) -> tuple:
    """``(c_1, i_1)``, the first pair of the structure sequence (``(0, 0)`` if empty)."""
    seq = ciss(sigma)
    return seq[0] if seq else (0, 0)


def cip(tup: Sequence[int]) -> CipPair:
    """Consecution-inversion pair at 0 of a repetition-free index tuple.

    ``c0`` counts consecutions at ``0, 1, ..., c0 - 1`` (``j`` placed before
    ``j + 1``); ``i0`` counts inversions likewise.  At most one is nonzero.
    """
    tup = tuple(int(i) for i in tup)
    if 0 not in tup:
        raise PreconditionError(f"0 does not occur in {tup}")
    if len(set(tup)) != len(tup):
        raise PreconditionError(f"CIP is only defined here for repetition-free tuples, got {tup}")
    pos = {v: p for p, v in enumerate(tup)}
    c0 = 0
    while c0 + 1 in pos and pos[c0] < pos[c0 + 1]:
        c0 += 1
    i0 = 0
    while i0 + 1 in pos and pos[i0] > pos[i0 + 1]:
        i0 += 1
    return CipPair(c0, i0)


def rev(sigma) -> Bijection:
    s = _as_bijection(sigma)
    return Bijection(tuple(s.m + 1 - p for p in s.sigma))


def csf(q: Sequence[int]) -> tuple:
    """Column standard form of a permutation of a consecutive integer range.

    Adjacent commuting factors (indices differing by more than one) are
    swapped so that the larger index comes first, until nothing moves.
    """
    q = list(int(i) for i in q)
    if not q:
        return ()
    lo = min(q)
    if sorted(q) != list(range(lo, lo + len(q))):
        raise ValidationError(f"{tuple(q)} is not a permutation of a consecutive range")
    moved = True
    while moved:
        moved = False
        for k in range(len(q) - 1):
            a, b = q[k], q[k + 1]
            if abs(a - b) > 1 and a < b:
                q[k], q[k + 1] = b, a
                moved = True
    return tuple(q)


def strings(q) -> list:
    """Strings ``(t_{k-1}+1 : t_k)`` of ``csf(q)``, listed highest first.

    Accepts a factor order or a :class:`Bijection`.
    """
    if isinstance(q, Bijection):
        q = q.order
    form = csf(q)
    out = []
    for v in form:
        if out and v == out[-1][-1] + 1:
            out[-1].append(v)
        else:
            out.append([v])
    return [tuple(s) for s in out]


def string_decomposition(q: Sequence[int]) -> list:
    """Strings computed from consecutions alone (no reordering).

    Each inversion at ``j`` (``j + 1`` placed before ``j``) closes a string
    at ``j``.  Independent of :func:`csf`; the two must agree.
    """
    q = tuple(int(i) for i in q)
    lo, hi = min(q), max(q)
    pos = {v: p for p, v in enumerate(q)}
    runs = [[lo]]
    for j in range(lo, hi):
        if pos[j] < pos[j + 1]:
            runs[-1].append(j + 1)
        else:
            runs.append([j + 1])
    return [tuple(r) for r in reversed(runs)]


def string_index(q) -> dict:
    """Map each factor index to ``(k, t_k)``: 1-based string number (lowest
    string is 1) and the last index of that string."""
    strs = strings(q)
    out = {}
    for k, s in enumerate(reversed(strs), start=1):
        for v in s:
            out[v] = (k, s[-1])
    return out


def random_order(m: int, rng: np.random.Generator) -> tuple:
    return tuple(int(i) for i in rng.permutation(m))
