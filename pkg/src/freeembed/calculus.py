"""Moment-cumulant calculus over NC(k) with exact values in ``y``.

A *family* is one non-commutative random variable; positions of a word are
labelled by families.  Cumulant data come as :class:`CumulantSpec`, moment
data as :class:`MomentSpec`.  Everything here is exact: values are
:class:`~freeembed.poly.YPolynomial` or
:class:`~freeembed.poly.RationalFunction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

from . import config
from .errors import MixedBlockError, SizeLimitError
from .partitions import SetPartition, enumerate_nc, enumerate_nc2, kreweras, mobius_to_top
from .poly import ONE, Y, ZERO, RationalFunction, YPolynomial

Exact = Union[YPolynomial, RationalFunction]


@dataclass(frozen=True, eq=False)
class CumulantSpec:
    """Free cumulants ``kappa(k)`` of one family, k >= 1."""

    label: str
    kappa: Callable[[int], Exact]
    pairs_only: bool = False  # only kappa_2 is nonzero (semicircular)

    def __call__(self, k: int) -> Exact:
        if k < 1:
            raise ValueError("cumulant order must be >= 1")
        return self.kappa(k)


@dataclass(frozen=True, eq=False)
class MomentSpec:
    """Moments ``phi(k)`` of one family, k >= 1."""

    label: str
    phi: Callable[[int], Exact]

    def __call__(self, k: int) -> Exact:
        if k < 1:
            raise ValueError("moment order must be >= 1")
        return self.phi(k)


def _simplify(value):
    if isinstance(value, RationalFunction):
        return value.simplify()
    return value


def _check_cap(k: int, cap: int | None) -> None:
    limit = config.symbolic_cap() if cap is None else cap
    if k > limit:
        raise SizeLimitError("symbolic sum", k, limit)


def _per_position(specs, n: int) -> list:
    if isinstance(specs, (CumulantSpec, MomentSpec)):
        return [specs] * n
    specs = list(specs)
    if len(specs) != n:
        raise ValueError(f"expected {n} per-position specs, got {len(specs)}")
    return specs


# ---------------------------------------------------------------------------
# named laws

def semicircular(label: str = "s") -> CumulantSpec:
    return CumulantSpec(label, lambda k: ONE if k == 2 else ZERO, pairs_only=True)


def marchenko_pastur(label: str = "g") -> CumulantSpec:
    """kappa_k = y^(k-1)."""
    return CumulantSpec(label, lambda k: YPolynomial.monomial(k - 1))


def unit(label: str = "1") -> MomentSpec:
    return MomentSpec(label, lambda k: ONE)


def upper_corner_projection(label: str = "a0") -> MomentSpec:
    """Limit of diag(I_p, 0): phi(a0^r) = y / (1 + y) for all r."""
    value = RationalFunction(Y, ONE + Y)
    return MomentSpec(label, lambda k: value)


def lower_corner_projection(label: str = "a1") -> MomentSpec:
    """Limit of diag(0, I_n): phi(a1^r) = 1 / (1 + y) for all r."""
    value = RationalFunction(ONE, ONE + Y)
    return MomentSpec(label, lambda k: value)


def moments_of(spec: CumulantSpec, cap: int | None = None) -> MomentSpec:
    """Moment spec of a family given by its cumulants (memoized per order)."""

    @lru_cache(maxsize=None)
    def phi(k: int):
        return moments_from_cumulants(spec, k, cap=cap)

    return MomentSpec(spec.label, phi)


def cumulants_of(spec: MomentSpec, cap: int | None = None) -> CumulantSpec:
    @lru_cache(maxsize=None)
    def kappa(k: int):
        return cumulants_from_moments(spec, k, cap=cap)

    return CumulantSpec(spec.label, kappa)


# ---------------------------------------------------------------------------
# multiplicative extensions

def _block_spec(block, specs, positions):
    first = specs[positions[block[0]]]
    for e in block[1:]:
        if specs[positions[e]] is not first:
            raise MixedBlockError(f"block {block} mixes families")
    return first


def phi_pi(p: SetPartition, values) -> Exact:
    """Product over blocks V of the block moment phi_{|V|} of V's family."""
    specs = _per_position(values, p.size)
    positions = {e: i for i, e in enumerate(p.ground)}
    out: Exact = ONE
    for b in p.blocks:
        out = out * _block_spec(b, specs, positions)(len(b))
    return _simplify(out)


def kappa_pi(p: SetPartition, specs) -> Exact:
    """Product over blocks V of kappa_{|V|} of V's family (blocks must be pure)."""
    specs = _per_position(specs, p.size)
    positions = {e: i for i, e in enumerate(p.ground)}
    out: Exact = ONE
    for b in p.blocks:
        out = out * _block_spec(b, specs, positions)(len(b))
        if out == ZERO:
            return ZERO
    return _simplify(out)


def kappa_pi_mobius(p: SetPartition, values) -> Exact:
    """kappa_pi from moments by its defining sum over sigma <= pi of phi_sigma mu(sigma, pi).

    Reference route used to cross-check :func:`kappa_pi`; cost is quadratic in |NC(k)|.
    """
    from .partitions import leq, mobius

    total: Exact = ZERO
    for s in enumerate_nc(p.ground):
        if leq(s, p):
            total = total + phi_pi(s, values) * mobius(s, p)
    return _simplify(total)


# ---------------------------------------------------------------------------
# transforms

def moments_from_cumulants(spec: CumulantSpec, k: int, cap: int | None = None) -> Exact:
    """phi_k as the sum over NC(k) of kappa_pi."""
    _check_cap(k, cap)
    if spec.pairs_only:
        if k % 2:
            return ZERO
        parts = enumerate_nc2(k, cap=max(k, 2))
    else:
        parts = enumerate_nc(k, cap=max(k, 1))
    total: Exact = ZERO
    for p in parts:
        total = total + kappa_pi(p, spec)
    return _simplify(total)


def cumulants_from_moments(spec: MomentSpec, k: int, cap: int | None = None) -> Exact:
    """kappa_k = sum over sigma in NC(k) of phi_sigma * mu(sigma, 1_k)."""
    _check_cap(k, cap)
    total: Exact = ZERO
    for s in enumerate_nc(k, cap=max(k, 1)):
        total = total + phi_pi(s, spec) * mobius_to_top(s)
    return _simplify(total)


def _direct_mp_moment(k: int) -> YPolynomial:
    # first-block recursion phi_k = sum_s kappa_s sum_{i_1+..+i_s = k-s} prod phi_{i_j}
    phi = [ONE]
    for n in range(1, k + 1):
        total = ZERO
        for s in range(1, n + 1):
            total = total + YPolynomial.monomial(s - 1) * _compositions_sum(phi, n - s, s)
        phi.append(total)
    return phi[k]


def _compositions_sum(phi, total: int, parts: int) -> YPolynomial:
    # sum over (i_1..i_parts) >= 0 with sum == total of prod phi[i_j]
    table = [ONE] + [ZERO] * total
    for _ in range(parts):
        new = [ZERO] * (total + 1)
        for t in range(total + 1):
            acc = ZERO
            for i in range(t + 1):
                acc = acc + phi[i] * table[t - i]
            new[t] = acc
        table = new
    return table[total]


def mp_moment_recursive(k: int) -> YPolynomial:
    """Marčenko-Pastur moment via the first-block recursion (no partition enumeration)."""
    return _direct_mp_moment(k)


# ---------------------------------------------------------------------------
# free mixed moments

def free_mixed_moment(
    specs: Mapping[int, CumulantSpec], word: Sequence[int], cap: int | None = None
) -> Exact:
    """phi(a_{w1} ... a_{wk}) for free families: sum over NC(k) of kappa_pi, mixed blocks vanish."""
    k = len(word)
    _check_cap(k, cap)
    per_pos = [specs[f] for f in word]
    total: Exact = ZERO
    for p in enumerate_nc(k, cap=max(k, 1)):
        if any(len({word[e - 1] for e in b}) > 1 for b in p.blocks):
            continue
        total = total + kappa_pi(p, per_pos)
    return _simplify(total)


def mixed_cumulant(
    joint_moment: Callable[[tuple[int, ...]], Exact], word: Sequence[int], cap: int | None = None
) -> Exact:
    """kappa_k(a_{w1}, ..., a_{wk}) by Möbius inversion of ``joint_moment`` over NC(k).

    ``joint_moment`` receives the sub-word carried by a block (in position order).
    """
    word = tuple(word)
    k = len(word)
    _check_cap(k, cap)
    total: Exact = ZERO
    for s in enumerate_nc(k, cap=max(k, 1)):
        term: Exact = ONE
        for b in s.blocks:
            term = term * joint_moment(tuple(word[e - 1] for e in b))
        total = total + term * mobius_to_top(s)
    return _simplify(total)


def mixed_cumulant_vanishing_check(joint_moment, word: Sequence[int], cap: int | None = None) -> Exact:
    """Mixed cumulant of a word using at least two families; zero iff consistent with freeness."""
    if len(set(word)) < 2:
        raise ValueError("word must use at least two families")
    return mixed_cumulant(joint_moment, word, cap=cap)


def free_joint_moment_oracle(specs: Mapping[int, CumulantSpec]):
    @lru_cache(maxsize=None)
    def oracle(sub: tuple[int, ...]):
        return free_mixed_moment(specs, sub, cap=max(len(sub), 1))

    return oracle


def classical_joint_moment_oracle(moments: Mapping[int, MomentSpec]):
    """Commuting, classically independent families: E[prod] = prod of per-family moments."""

    def oracle(sub: tuple[int, ...]):
        out: Exact = ONE
        for f in set(sub):
            out = out * moments[f](sub.count(f))
        return _simplify(out)

    return oracle


def alternating_two_family_moment(
    kappa_a: CumulantSpec, phi_b: MomentSpec | Sequence[MomentSpec], n: int, cap: int | None = None
) -> Exact:
    """phi(a b_1 a b_2 ... a b_n) for a free of the b's.

    Sum over pi in NC(n) of kappa_pi[a, ..., a] * phi_{K(pi)}[b_1, ..., b_n].
    ``phi_b`` is one spec for every b-slot or one spec per slot (b_i sits right
    after the i-th a).
    """
    _check_cap(n, cap)
    b_specs = _per_position(phi_b, n)
    if kappa_a.pairs_only:
        if n % 2:
            return ZERO
        parts = enumerate_nc2(n, cap=max(n, 2))
    else:
        parts = enumerate_nc(n, cap=max(n, 1))
    total: Exact = ZERO
    for p in parts:
        k = kappa_pi(p, kappa_a)
        if k == ZERO:
            continue
        total = total + k * phi_pi(kreweras(p), b_specs)
    return _simplify(total)
