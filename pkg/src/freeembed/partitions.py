"""Non-crossing partitions of finite ordered ground sets.

Partitions are immutable and stored in canonical form: blocks sorted by their
minimum, elements ascending inside each block.  Any strictly increasing tuple
of positive integers can serve as ground set; only relative order matters, so
most work is done on ``{1..n}`` and relabelled back.

The Möbius function is the usual incidence-algebra inverse of the zeta
function of the refinement order restricted to NC(k).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import config
from .errors import DomainError, SizeLimitError, StructureViolation, ValidationError

Blocks = tuple[tuple[int, ...], ...]


def ground_set(elements: Iterable[int]) -> tuple[int, ...]:
    """Validate and return a ground set: strictly increasing positive integers."""
    g = tuple(int(e) for e in elements)
    for a, b in zip(g, g[1:]):
        if a >= b:
            raise ValidationError(f"ground set must be strictly increasing: {g}")
    if g and g[0] < 1:
        raise ValidationError(f"ground set elements must be positive: {g}")
    return g


def _canonical(blocks: Iterable[Iterable[int]]) -> Blocks:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@dataclass(frozen=True, eq=False)
class SetPartition:
    ground: tuple[int, ...]
    blocks: Blocks

    # equality ignores the subclass: a PairPartition equals the same SetPartition
    def __eq__(self, other):
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.ground == other.ground and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.ground, self.blocks))

    def __post_init__(self):
        ground = ground_set(self.ground)
        blocks = _canonical(self.blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValidationError("empty block")
            for e in b:
                if e in seen:
                    raise ValidationError(f"element {e} appears in more than one block")
                seen.add(e)
        if seen != set(ground):
            raise ValidationError(
                f"blocks cover {sorted(seen)} but the ground set is {list(ground)}"
            )
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], ground: Iterable[int] | None = None):
        blocks = [tuple(b) for b in blocks]
        if ground is None:
            ground = sorted(e for b in blocks for e in b)
        return cls(tuple(ground), tuple(blocks))

    @classmethod
    def _trusted(cls, ground: tuple[int, ...], blocks: Blocks):
        # skips validation; callers pass canonical, already-checked data
        obj = object.__new__(cls)
        object.__setattr__(obj, "ground", ground)
        object.__setattr__(obj, "blocks", blocks)
        return obj

    @classmethod
    def singletons(cls, ground: Iterable[int]) -> "SetPartition":
        g = ground_set(ground)
        return cls(g, tuple((e,) for e in g))

    @classmethod
    def one_block(cls, ground: Iterable[int]) -> "SetPartition":
        g = ground_set(ground)
        return cls(g, (g,) if g else ())

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    @property
    def size(self) -> int:
        return len(self.ground)

    def block_of(self, element: int) -> tuple[int, ...]:
        for b in self.blocks:
            if element in b:
                return b
        raise KeyError(element)

    def relabel(self, mapping) -> "SetPartition":
        """Apply an order-preserving map (dict or callable) to every element."""
        f = mapping.__getitem__ if isinstance(mapping, dict) else mapping
        return SetPartition(
            tuple(f(e) for e in self.ground), tuple(tuple(f(e) for e in b) for b in self.blocks)
        )

    def standardize(self) -> "SetPartition":
        """Order-preserving relabelling onto {1..n}."""
        index = {e: i + 1 for i, e in enumerate(self.ground)}
        return self.relabel(index)

    def restrict(self, subset: Iterable[int]) -> "SetPartition":
        """Induced partition on a union of blocks."""
        sub = set(subset)
        kept = [b for b in self.blocks if set(b) <= sub]
        if sum(len(b) for b in kept) != len(sub):
            raise DomainError("subset is not a union of blocks")
        return SetPartition(tuple(sorted(sub)), tuple(kept))

    def __str__(self):
        return to_text(self)


class PairPartition(SetPartition):
    """A partition all of whose blocks have exactly two elements."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.ground) % 2:
            raise ValidationError("a pair partition needs an even ground set")
        for b in self.blocks:
            if len(b) != 2:
                raise ValidationError(f"block {b} is not a pair")

    @classmethod
    def from_partition(cls, p: SetPartition) -> "PairPartition":
        return cls(p.ground, p.blocks)

    def partner(self, element: int) -> int:
        a, b = self.block_of(element)
        return b if a == element else a


# ---------------------------------------------------------------------------
# text / JSON forms

def to_text(p: SetPartition) -> str:
    return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in p.blocks) + "}"


_TEXT_RE = re.compile(r"^\{\s*(\{\s*\d+(\s*,\s*\d+)*\s*\}\s*(,\s*\{\s*\d+(\s*,\s*\d+)*\s*\}\s*)*)?\}$")


def from_text(text: str, ground: Iterable[int] | None = None) -> SetPartition:
    s = text.strip()
    if not _TEXT_RE.match(s):
        raise ValidationError(f"cannot parse partition literal {text!r}")
    blocks = [tuple(int(x) for x in m.split(",")) for m in re.findall(r"\{([\d,\s]+)\}", s[1:-1])]
    return SetPartition.from_blocks(blocks, ground)


def to_json(p: SetPartition) -> str:
    return json.dumps([list(b) for b in p.blocks], separators=(",", ":"))


def from_json(text: str, ground: Iterable[int] | None = None) -> SetPartition:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
        raise ValidationError("partition JSON must be an array of arrays of integers")
    for b in data:
        if not all(isinstance(e, int) and not isinstance(e, bool) for e in b):
            raise ValidationError("partition JSON must be an array of arrays of integers")
    return SetPartition.from_blocks(data, ground)


# ---------------------------------------------------------------------------
# crossing test

def _noncrossing_blocks(blocks: Blocks, order: Sequence[int]) -> bool:
    """Stack scan: a block may only be revisited while it is on top of the stack."""
    label = {}
    last = {}
    for bi, b in enumerate(blocks):
        for e in b:
            label[e] = bi
        last[bi] = b[-1]
    stack: list[int] = []
    seen: set[int] = set()
    for e in order:
        bi = label[e]
        if bi in seen:
            if not stack or stack[-1] != bi:
                return False
            if e == last[bi]:
                stack.pop()
        else:
            seen.add(bi)
            if e != last[bi]:
                stack.append(bi)
    return True


def is_noncrossing(p: SetPartition) -> bool:
    return _noncrossing_blocks(p.blocks, p.ground)


# ---------------------------------------------------------------------------
# enumeration

def catalan(n: int) -> int:
    from math import comb

    return comb(2 * n, n) // (n + 1)


def _check_cap(what: str, size: int, cap: int | None, default: int) -> None:
    limit = default if cap is None else cap
    if size > limit:
        raise SizeLimitError(what, size, limit)


@lru_cache(maxsize=None)
def _nc_unsorted(n: int) -> tuple[Blocks, ...]:
    # Condition on the successor j of 1 inside its block: the gap (1, j) is an
    # independent NC(j - 2) and 1 joins the block of j in a partition of [j, n].
    if n == 0:
        return ((),)
    out = []
    for rest in _nc_unsorted(n - 1):
        out.append(((1,),) + tuple(tuple(e + 1 for e in b) for b in rest))
    for j in range(2, n + 1):
        inners = [tuple(tuple(e + 1 for e in b) for b in q) for q in _nc_unsorted(j - 2)]
        shift = j - 1
        for q in _nc_unsorted(n - j + 1):
            head = (1,) + tuple(e + shift for e in q[0])
            tail = tuple(tuple(e + shift for e in b) for b in q[1:])
            for inner in inners:
                out.append((head,) + inner + tail)
    return tuple(out)


@lru_cache(maxsize=None)
def _nc_raw(n: int) -> tuple[Blocks, ...]:
    """All non-crossing partitions of {1..n} as canonical block tuples, sorted."""
    return tuple(sorted(_canonical(bs) for bs in _nc_unsorted(n)))


@lru_cache(maxsize=None)
def _nc2_raw(n: int) -> tuple[Blocks, ...]:
    def rec(lo: int, hi: int):
        if lo > hi:
            yield ()
            return
        for j in range(lo + 1, hi + 1, 2):
            for inner in rec(lo + 1, j - 1):
                for outer in rec(j + 1, hi):
                    yield ((lo, j),) + inner + outer

    return tuple(sorted(_canonical(bs) for bs in rec(1, n)))


def enumerate_nc(ground: Iterable[int] | int, cap: int | None = None) -> list[SetPartition]:
    """All non-crossing partitions of ``ground`` (or of {1..n} for an int), sorted."""
    g = tuple(range(1, ground + 1)) if isinstance(ground, int) else ground_set(ground)
    _check_cap("NC enumeration", len(g), cap, config.nc_cap())
    if g == tuple(range(1, len(g) + 1)):
        return [SetPartition._trusted(g, bs) for bs in _nc_raw(len(g))]
    lab = dict(enumerate(g, start=1))
    return [
        SetPartition._trusted(g, tuple(tuple(lab[e] for e in b) for b in bs))
        for bs in _nc_raw(len(g))
    ]


def enumerate_nc2(ground: Iterable[int] | int, cap: int | None = None) -> list[PairPartition]:
    g = tuple(range(1, ground + 1)) if isinstance(ground, int) else ground_set(ground)
    if len(g) % 2:
        raise DomainError(f"no pair partitions of a set of odd size {len(g)}")
    _check_cap("NC2 enumeration", len(g), cap, config.nc2_cap())
    lab = dict(enumerate(g, start=1))
    return [
        PairPartition._trusted(g, tuple(tuple(lab[e] for e in b) for b in bs))
        for bs in _nc2_raw(len(g))
    ]


# ---------------------------------------------------------------------------
# order and Möbius function

def _pair_mask(blocks: Blocks, n: int) -> int:
    """Bitmask of unordered pairs {i<j} of {1..n} lying in a common block."""
    mask = 0
    for b in blocks:
        for i, j in combinations(b, 2):
            mask |= 1 << ((i - 1) * n + (j - 1))
    return mask


def leq(p: SetPartition, q: SetPartition) -> bool:
    """Refinement order: every block of p sits inside a block of q."""
    if p.ground != q.ground:
        raise DomainError("partitions live on different ground sets")
    where = {}
    for i, b in enumerate(q.blocks):
        for e in b:
            where[e] = i
    return all(len({where[e] for e in b}) == 1 for b in p.blocks)


def _require_nc(p: SetPartition, what: str = "partition") -> None:
    if not is_noncrossing(p):
        raise DomainError(f"{what} {to_text(p)} is crossing")


@lru_cache(maxsize=4096)
def _mobius_from(n: int, lower: Blocks) -> dict[Blocks, int]:
    """mu(lower, r) for every r >= lower in NC(n), via mu(s, r) = -sum_{s <= q < r} mu(s, q)."""
    masks = {bs: _pair_mask(bs, n) for bs in _nc_raw(n)}
    lo = masks[lower]
    above = [bs for bs in _nc_raw(n) if lo & ~masks[bs] == 0]
    above.sort(key=len, reverse=True)  # finer (more blocks) first
    mu: dict[Blocks, int] = {}
    for r in above:
        if r == lower:
            mu[r] = 1
            continue
        mr = masks[r]
        mu[r] = -sum(v for q, v in mu.items() if masks[q] & ~mr == 0)
    return mu


def mobius(s: SetPartition, p: SetPartition) -> int:
    """Möbius function of the interval [s, p] in NC(k)."""
    if s.ground != p.ground:
        raise DomainError("partitions live on different ground sets")
    _require_nc(s)
    _require_nc(p)
    if not leq(s, p):
        raise DomainError(f"{to_text(s)} is not below {to_text(p)}")
    _check_cap("Möbius", s.size, None, config.nc_cap())
    ss, pp = s.standardize(), p.standardize()
    return _mobius_from(s.size, ss.blocks)[pp.blocks]


@lru_cache(maxsize=64)
def _mobius_to_top(n: int) -> dict[Blocks, int]:
    """mu(r, 1_n) for all r in NC(n), via the dual recursion mu(r, t) = -sum_{r < q <= t} mu(q, t)."""
    elems = _nc_raw(n)
    masks = {bs: _pair_mask(bs, n) for bs in elems}
    order = sorted(elems, key=len)  # coarser first
    mu: dict[Blocks, int] = {}
    for r in order:
        if len(r) == 1 or n == 0:
            mu[r] = 1
            continue
        mr = masks[r]
        mu[r] = -sum(v for q, v in mu.items() if mr & ~masks[q] == 0)
    return mu


def mobius_to_top(p: SetPartition) -> int:
    """mu(p, 1_k); tabulated once per k for cumulant inversion."""
    _require_nc(p)
    return _mobius_to_top(p.size)[p.standardize().blocks]


# ---------------------------------------------------------------------------
# Kreweras complement

def _interlaced(p_std: SetPartition, sigma_blocks: Iterable[Iterable[int]]) -> bool:
    """Is pi ∪ sigma non-crossing on 1, 1bar, 2, 2bar, ...?  i -> 2i-1, ibar -> 2i."""
    n = p_std.size
    blocks = [tuple(2 * e - 1 for e in b) for b in p_std.blocks]
    blocks += [tuple(2 * e for e in b) for b in sigma_blocks]
    return _noncrossing_blocks(_canonical(blocks), range(1, 2 * n + 1))


@lru_cache(maxsize=None)
def _kreweras_raw(n: int, blocks: Blocks) -> Blocks:
    p = SetPartition(tuple(range(1, n + 1)), blocks)
    # barred points a, b may share a block iff {abar, bbar} alone does not cross pi
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(range(1, n + 1), 2):
        if find(a) != find(b) and _interlaced(p, [(a, b)] + [(c,) for c in range(1, n + 1) if c not in (a, b)]):
            parent[find(b)] = find(a)
    groups: dict[int, list[int]] = {}
    for e in range(1, n + 1):
        groups.setdefault(find(e), []).append(e)
    sigma = _canonical(groups.values())
    # Admissible sigmas are closed under refinement, so an admissible sigma that
    # contains every compatible pair is the unique maximum of the admissible set.
    if not _interlaced(p, sigma):
        raise StructureViolation(f"no maximal admissible complement for {to_text(p)}")
    return sigma


def kreweras(p: SetPartition) -> SetPartition:
    """Kreweras complement on the interlacing 1, 1bar, ..., n, nbar.

    The result is reported on the same labels as ``p`` (ibar -> i).
    """
    _require_nc(p, "input")
    _check_cap("Kreweras", p.size, None, max(config.nc_cap(), config.nc2_cap()))
    std = p.standardize()
    sigma = _kreweras_raw(p.size, std.blocks)
    lab = dict(enumerate(p.ground, start=1))
    return SetPartition(p.ground, tuple(tuple(lab[e] for e in b) for b in sigma))


def kreweras_bruteforce(p: SetPartition) -> SetPartition:
    """Definition-level complement: search NC(n) for the largest admissible sigma."""
    _require_nc(p, "input")
    std = p.standardize()
    n = p.size
    admissible = [s for s in enumerate_nc(n) if _interlaced(std, s.blocks)]
    tops = [s for s in admissible if all(leq(t, s) for t in admissible)]
    if len(tops) != 1:
        raise StructureViolation(f"admissible set of {to_text(p)} has {len(tops)} maxima")
    lab = dict(enumerate(p.ground, start=1))
    return tops[0].relabel(lab)
