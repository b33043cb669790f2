"""Mixed moments of free Marčenko-Pastur families from word combinatorics.

For a word ``w = (w_1, ..., w_k)`` of family labels:

* ``A_k(w)``: partitions in NC(k) whose blocks each stay inside one family,
  graded by the per-family block counts ``t_i + 1``;
* ``B_2k(w)``: pair partitions in NC_2(2k) pairing only inside the doubled
  family sets ``{2j-1, 2j : w_j = i}``, graded by the number ``t_i + 1`` of
  pairs of family i whose smaller element is odd.

Three independent routes give the same polynomial in ``y``: the graded count of
``A``, the free cumulant sum, and the Wigner embedding route through ``B`` and
Kreweras complements weighted by the two corner projections.  The graded
weight is ``y^(k - sum(t_i + 1))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from . import config
from .calculus import (
    free_mixed_moment,
    lower_corner_projection,
    marchenko_pastur,
    phi_pi,
    upper_corner_projection,
)
from .errors import DomainError, SizeLimitError, StructureViolation, ValidationError
from .partitions import (
    PairPartition,
    SetPartition,
    enumerate_nc,
    enumerate_nc2,
    is_noncrossing,
    kreweras,
    to_text,
)
from .poly import ONE, Y, ZERO, RationalFunction, YPolynomial

Word = tuple[int, ...]
Profile = tuple[int, ...]


def make_word(letters: Iterable[int] | str, m: int | None = None) -> Word:
    """Validate a word; strings use the comma-separated form ``"1,2,1,2"``."""
    if isinstance(letters, str):
        try:
            letters = [int(x) for x in letters.split(",") if x.strip()]
        except ValueError:
            raise ValidationError(f"cannot parse word {letters!r}") from None
    w = tuple(int(x) for x in letters)
    if not w:
        raise ValidationError("a word needs at least one letter")
    if any(x < 1 for x in w):
        raise ValidationError(f"family labels are 1-based: {w}")
    if m is not None and max(w) > m:
        raise ValidationError(f"label {max(w)} exceeds family count m={m}")
    return w


@dataclass(frozen=True)
class WordStats:
    word: Word
    families: tuple[int, ...]  # labels occurring in the word, ascending
    positions: dict  # family -> J_i, positions (1-based) carrying that family
    counts: dict  # family -> T_i
    interlaced: dict  # family -> doubled positions {2j-1, 2j}

    @property
    def k(self) -> int:
        return len(self.word)

    def profiles(self) -> list[Profile]:
        """All (t_i) with 0 <= t_i <= T_i - 1, families in ascending order."""
        return list(product(*(range(self.counts[f]) for f in self.families)))


def word_stats(word: Sequence[int]) -> WordStats:
    w = make_word(word)
    families = tuple(sorted(set(w)))
    positions = {f: tuple(j for j, x in enumerate(w, start=1) if x == f) for f in families}
    counts = {f: len(positions[f]) for f in families}
    interlaced = {
        f: tuple(e for j in positions[f] for e in (2 * j - 1, 2 * j)) for f in families
    }
    return WordStats(w, families, positions, counts, interlaced)


def _check_cap(k: int, cap: int | None) -> None:
    limit = config.symbolic_cap() if cap is None else cap
    if k > limit:
        raise SizeLimitError("word length", k, limit)


def _family_of_block(block, owner) -> int | None:
    fams = {owner[e] for e in block}
    return fams.pop() if len(fams) == 1 else None


def odd_first_count(p: SetPartition) -> int:
    """Number of blocks whose smallest element is odd."""
    return sum(1 for b in p.blocks if b[0] % 2 == 1)


def enumerate_A(word: Sequence[int], cap: int | None = None) -> dict[Profile, list[SetPartition]]:
    st = word_stats(word)
    _check_cap(st.k, cap)
    owner = {j: f for f in st.families for j in st.positions[f]}
    out: dict[Profile, list[SetPartition]] = {t: [] for t in st.profiles()}
    for p in enumerate_nc(st.k, cap=max(st.k, 1)):
        nblocks = dict.fromkeys(st.families, 0)
        for b in p.blocks:
            f = _family_of_block(b, owner)
            if f is None:
                break
            nblocks[f] += 1
        else:
            out[tuple(nblocks[f] - 1 for f in st.families)].append(p)
    return out


def enumerate_B(word: Sequence[int], cap: int | None = None) -> dict[Profile, list[PairPartition]]:
    st = word_stats(word)
    _check_cap(st.k, cap)
    owner = {e: f for f in st.families for e in st.interlaced[f]}
    out: dict[Profile, list[PairPartition]] = {t: [] for t in st.profiles()}
    for p in enumerate_nc2(2 * st.k, cap=max(2 * st.k, 2)):
        odd_first = dict.fromkeys(st.families, 0)
        for b in p.blocks:
            f = _family_of_block(b, owner)
            if f is None:
                break
            if b[0] % 2:
                odd_first[f] += 1
        else:
            out[tuple(odd_first[f] - 1 for f in st.families)].append(p)
    return out


def family_part(p: SetPartition, ground: Iterable[int]) -> SetPartition:
    """The sub-partition of ``p`` carried by ``ground`` (must be a union of blocks)."""
    return p.restrict(ground)


def bijection_f(p: SetPartition) -> SetPartition:
    """Chain-following map NC_2(2k) -> NC(k).

    Each pair with odd smaller element 2j-1 opens a block: from its partner
    2j_1 add j_1, then repeatedly jump to the partner 2j_{t+1} of 2j_t - 1 and
    add j_{t+1}, closing once the chain comes back to 2j.  Works on any ground
    set made of consecutive pairs {2j-1, 2j}; labels j are reported on the
    matching half-indices.
    """
    ground = p.ground
    if len(ground) % 2 or any(
        ground[2 * i] % 2 != 1 or ground[2 * i + 1] != ground[2 * i] + 1
        for i in range(len(ground) // 2)
    ):
        raise DomainError("ground set must consist of consecutive pairs {2j-1, 2j}")
    p = PairPartition(p.ground, p.blocks)
    if not is_noncrossing(p):
        raise DomainError(f"{to_text(p)} is crossing")
    partner = {}
    for a, b in p.blocks:
        partner[a], partner[b] = b, a
    blocks = []
    used: set[int] = set()
    for a, b in p.blocks:
        if a % 2 == 0:
            continue
        j = (a + 1) // 2
        block = []
        x = b
        for _ in range(len(p.blocks) + 1):
            if x % 2:
                raise StructureViolation(f"chain from {a} reached odd point {x} in {to_text(p)}")
            i = x // 2
            if i in used:
                raise StructureViolation(f"chain from {a} revisits {i} in {to_text(p)}")
            block.append(i)
            used.add(i)
            if i == j:
                break
            x = partner[2 * i - 1]
        else:
            raise StructureViolation(f"chain from {a} does not close in {to_text(p)}")
        blocks.append(tuple(sorted(block)))
    half = tuple(e // 2 for e in ground[1::2])
    if used != set(half):
        raise StructureViolation(f"blocks of f({to_text(p)}) do not cover {half}")
    return SetPartition(half, tuple(blocks))


def bijection_f_inverse(s: SetPartition) -> PairPartition:
    """Inverse of :func:`bijection_f` found by search over NC_2 of the doubled ground set."""
    doubled = tuple(e for j in s.ground for e in (2 * j - 1, 2 * j))
    for p in enumerate_nc2(doubled):
        if bijection_f(p) == s:
            return p
    raise StructureViolation(f"{to_text(s)} has no preimage")


def lemma2_moment(word: Sequence[int], cap: int | None = None, exponent: str = "proof") -> YPolynomial:
    """Graded count of A_k(w): sum over profiles of #A_t * y^(k - sum(t_i + 1)).

    ``exponent="display"`` uses k - sum(t_i - 1) instead; it disagrees with the
    other two routes and exists only to demonstrate that.
    """
    st = word_stats(word)
    total = ZERO
    for t, parts in enumerate_A(st.word, cap=cap).items():
        if not parts:
            continue
        if exponent == "proof":
            e = st.k - sum(ti + 1 for ti in t)
        elif exponent == "display":
            e = st.k - sum(ti - 1 for ti in t)
        else:
            raise ValueError(f"unknown exponent form {exponent!r}")
        total = total + YPolynomial.monomial(e, len(parts))
    return total


def free_moment(word: Sequence[int], cap: int | None = None):
    """Cumulant-sum route with every family Marčenko-Pastur."""
    w = make_word(word)
    mp = marchenko_pastur()
    return free_mixed_moment({f: mp for f in set(w)}, w, cap=cap)


def projection_aligned_complement(p: SetPartition) -> SetPartition:
    """Kreweras complement with each barred point placed *before* its partner.

    Equals :func:`~freeembed.partitions.kreweras` rotated by one (i -> i+1
    mod 2k): label j then names the projection standing in front of the j-th
    Wigner factor in  a0 W a1 W a0 W a1 W ... a0.
    """
    k = kreweras(p)
    n = p.size
    return SetPartition.from_blocks([[e % n + 1 for e in b] for b in k.blocks], p.ground)


def kreweras_parity_counts(p: SetPartition) -> tuple[int, int]:
    """(all-even, all-odd) block counts of the projection-aligned complement of p."""
    p = PairPartition(p.ground, p.blocks)
    if p.ground != tuple(range(1, p.size + 1)):
        p = PairPartition.from_partition(p.standardize())
    if not is_noncrossing(p):
        raise DomainError(f"{to_text(p)} is crossing")
    even = odd = 0
    for b in projection_aligned_complement(p).blocks:
        parities = {e % 2 for e in b}
        if len(parities) != 1:
            raise StructureViolation(f"complement block {b} of {to_text(p)} mixes parities")
        if parities == {0}:
            even += 1
        else:
            odd += 1
    if even + odd != p.size // 2 + 1:
        raise StructureViolation(f"complement of {to_text(p)} has {even + odd} blocks")
    return even, odd


def theorem2_rhs(word: Sequence[int], cap: int | None = None) -> YPolynomial:
    """Embedding route: (1+y)^(k+1) / y * sum over B_2k(w) of phi_{K(pi)}[projections].

    The trace word is cyclically s a1 s a0 s a1 s a0 ..., so in the plain
    Kreweras complement (barred point after its partner) odd slots carry the
    lower projection a1 and even slots the upper projection a0.  Semicircular
    pair cumulants are all 1.
    """
    st = word_stats(word)
    k = st.k
    a0, a1 = upper_corner_projection(), lower_corner_projection()
    slots = [a1 if j % 2 else a0 for j in range(1, 2 * k + 1)]
    total = RationalFunction(ZERO)
    for parts in enumerate_B(st.word, cap=cap).values():
        for p in parts:
            total = total + phi_pi(kreweras(p), slots)
    result = RationalFunction(ONE + Y) ** (k + 1) / Y * total
    if not result.is_polynomial():
        raise StructureViolation(f"embedding route for {st.word} is not a polynomial: {result}")
    return result.num


def theorem2_rhs_by_parity(word: Sequence[int], cap: int | None = None) -> YPolynomial:
    """Same value computed only from the (even, odd) complement block counts."""
    st = word_stats(word)
    k = st.k
    upper = RationalFunction(Y, ONE + Y)
    lower = RationalFunction(ONE, ONE + Y)
    total = RationalFunction(ZERO)
    for parts in enumerate_B(st.word, cap=cap).values():
        for p in parts:
            even, odd = kreweras_parity_counts(p)
            total = total + upper**odd * lower**even
    result = RationalFunction(ONE + Y) ** (k + 1) / Y * total
    if not result.is_polynomial():
        raise StructureViolation(f"parity route for {st.word} is not a polynomial: {result}")
    return result.num


def profile_key(t: Profile) -> str:
    return ",".join(map(str, t))


def word_report(word: Sequence[int], cap: int | None = None) -> dict:
    """JSON-ready comparison of the three routes for one word."""
    st = word_stats(word)
    A = enumerate_A(st.word, cap=cap)
    B = enumerate_B(st.word, cap=cap)
    return {
        "word": list(st.word),
        "families": list(st.families),
        "lemma2": lemma2_moment(st.word, cap=cap).to_json_obj(),
        "free_mixed": YPolynomial.coerce(free_moment(st.word, cap=cap)).to_json_obj(),
        "theorem2_rhs": theorem2_rhs(st.word, cap=cap).to_json_obj(),
        "profile_counts": {
            profile_key(t): {"A": len(A[t]), "B": len(B[t])} for t in st.profiles()
        },
    }


def word_report_json(word: Sequence[int], cap: int | None = None) -> str:
    return json.dumps(word_report(word, cap=cap), sort_keys=True)
