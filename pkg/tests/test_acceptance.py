"""Exit criteria.  Each test logs one PASS/FAIL line, shown in the terminal summary."""

import random
import statistics
import time
from itertools import product

import pytest

from freeembed.calculus import (
    CumulantSpec,
    MomentSpec,
    cumulants_from_moments,
    cumulants_of,
    free_mixed_moment,
    marchenko_pastur,
    moments_of,
    moments_from_cumulants,
    mp_moment_recursive,
)
from freeembed.mp import (
    bijection_f,
    enumerate_A,
    enumerate_B,
    kreweras_parity_counts,
    lemma2_moment,
    theorem2_rhs,
    word_stats,
)
from freeembed.partitions import SetPartition, catalan, enumerate_nc, enumerate_nc2, kreweras, mobius
from freeembed.poly import ONE, ZERO, YPolynomial
from freeembed.sim import SimConfig, convergence_study, embedding_check, mc_trace_moment

from conftest import ACCEPTANCE_LINES


def record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def all_words(max_k, m):
    for k in range(1, max_k + 1):
        yield from product(range(1, m + 1), repeat=k)


def test_01_catalan_counts():
    t0 = time.perf_counter()
    nc = [len(enumerate_nc(k)) for k in range(1, 9)]
    nc2 = [len(enumerate_nc2(2 * k)) for k in range(1, 7)]
    elapsed = time.perf_counter() - t0
    ok = nc == [1, 2, 5, 14, 42, 132, 429, 1430] and nc2 == [catalan(k) for k in range(1, 7)]
    record(1, "Catalan counts of NC(k), NC_2(2k)", ok and elapsed < 10, f"{elapsed:.2f}s")


def test_02_mobius_bottom_top():
    t0 = time.perf_counter()
    values = []
    for k in range(1, 8):
        ground = range(1, k + 1)
        values.append(mobius(SetPartition.singletons(ground), SetPartition.one_block(ground)))
    elapsed = time.perf_counter() - t0
    ok = values == [(-1) ** (k - 1) * catalan(k - 1) for k in range(1, 8)]
    record(2, "mu(0_k, 1_k) = (-1)^(k-1) Cat(k-1), k <= 7", ok and elapsed < 30, f"{values}, {elapsed:.2f}s")


def test_03_kreweras_bijective_with_block_count():
    ok = True
    for k in range(1, 8):
        parts = enumerate_nc(k)
        images = [kreweras(p) for p in parts]
        ok &= len(set(images)) == len(parts)
        ok &= all(len(p) + len(q) == k + 1 for p, q in zip(parts, images))
    record(3, "Kreweras bijective, |pi| + |K(pi)| = k + 1, k <= 7", ok)


def test_04_moment_cumulant_round_trip():
    rng = random.Random(20261018)
    ok = True
    for _ in range(20):
        kappas = [
            YPolynomial({e: rng.randint(-5, 5) for e in range(rng.randint(0, 3))}) for _ in range(6)
        ]
        spec = CumulantSpec("r", lambda k, ks=kappas: ks[k - 1])
        back = cumulants_of(moments_of(spec))
        ok &= all(back(k) == kappas[k - 1] for k in range(1, 7))
    record(4, "moment-cumulant round trip, 20 random sequences, k <= 6", ok)


def test_05_named_laws():
    # semicircle through the full NC(k) sum (not the pair shortcut)
    sc_full = CumulantSpec("s", lambda k: ONE if k == 2 else ZERO)
    sc_moments = [moments_from_cumulants(sc_full, k, cap=10) for k in range(1, 11)]
    sc_ok = sc_moments == [catalan(k // 2) if k % 2 == 0 else 0 for k in range(1, 11)]
    sc_back = MomentSpec("s", lambda k: YPolynomial.constant(catalan(k // 2) if k % 2 == 0 else 0))
    sc_ok &= all(cumulants_from_moments(sc_back, k, cap=10) == (ONE if k == 2 else ZERO) for k in range(1, 11))

    expected = [YPolynomial(c) for c in ([1], [1, 1], [1, 3, 1], [1, 6, 6, 1])]
    mp = marchenko_pastur()
    mp_enum = [moments_from_cumulants(mp, k) for k in range(1, 5)]
    mp_ok = mp_enum == expected
    mp_ok &= [mp_moment_recursive(k) for k in range(1, 5)] == expected
    mp_moms = MomentSpec("g", lambda k: expected[k - 1])
    mp_ok &= all(cumulants_from_moments(mp_moms, k) == YPolynomial.monomial(k - 1) for k in range(1, 5))
    record(5, "semicircular and Marcenko-Pastur moments", sc_ok and mp_ok,
           "MP: " + ", ".join(map(str, mp_enum)))


def test_06_three_way_agreement():
    t0 = time.perf_counter()
    mp = marchenko_pastur()
    bad = []
    count = 0
    for w in all_words(6, 3):
        count += 1
        a = lemma2_moment(w)
        b = free_mixed_moment({f: mp for f in set(w)}, w)
        c = theorem2_rhs(w)
        if not (a == b == c):
            bad.append(w)
    elapsed = time.perf_counter() - t0
    record(6, "graded count = free cumulant sum = embedding route", not bad and elapsed < 300,
           f"{count} words, {len(bad)} mismatches, {elapsed:.1f}s")


def test_07_bijection_profile_preserving():
    ok = True
    checked = 0
    for w in all_words(5, 3):
        A, B = enumerate_A(w), enumerate_B(w)
        for t in word_stats(w).profiles():
            images = [bijection_f(p) for p in B[t]]
            ok &= len(set(images)) == len(images) and set(images) == set(A[t])
            checked += 1
    record(7, "bijection maps B_t onto A_t, k <= 5, m <= 3", ok, f"{checked} profile classes")


def test_08_kreweras_parity():
    ok = True
    # every pairing is a member of B for the constant word, and the profile is forced
    for k in range(1, 7):
        for t, parts in enumerate_B((1,) * k).items():
            for p in parts:
                even, odd = kreweras_parity_counts(p)  # raises on a mixed-parity block
                ok &= even == t[0] + 1 and odd == k + 1 - even
    for w in all_words(5, 3):
        for t, parts in enumerate_B(w).items():
            for p in parts:
                ok &= kreweras_parity_counts(p)[0] == sum(ti + 1 for ti in t)
    record(8, "complement blocks of pairings have pure parity; even count = sum(t_i + 1)", ok)


def test_09_embedding_identity():
    t0 = time.perf_counter()
    rng = random.Random(9)
    worst = 0.0
    ok = True
    regimes = set()
    for i in range(50):
        p, n = rng.randint(1, 50), rng.randint(1, 50)
        if i == 0:
            p, n = 10, 40
        if i == 1:
            p, n = 40, 10
        regimes.add("y<1" if p < n else "y>1" if p > n else "y=1")
        dev, allowed = embedding_check(p, n, "gaussian" if i % 2 else "rademacher", seed=rng.randrange(2**32))
        ok &= dev <= allowed
        worst = max(worst, dev / allowed)
    elapsed = time.perf_counter() - t0
    ok &= {"y<1", "y>1"} <= regimes
    record(9, "embedding identity within 1e-12 (1 + max entry)", ok and elapsed < 10,
           f"worst dev/allowed {worst:.1e}, {elapsed:.2f}s")


BATTERY = [(1, 1), (1, 1, 1), (1, 2), (1, 2, 1, 2), (1, 1, 2, 2), (1, 2, 3, 1)]


def test_10_monte_carlo_battery():
    t0 = time.perf_counter()
    p = 200
    failures = []
    for w in BATTERY:
        for n in (400, 200, 100):  # y = 0.5, 1, 2
            r = mc_trace_moment(SimConfig(p, n, w, 200, seed=2026))
            allowed = max(3 * r.std_error, 0.05 * abs(r.oracle_value) + 10 / p)
            if r.abs_error > allowed:
                failures.append((w, n, r.estimate, r.oracle_value))
    elapsed = time.perf_counter() - t0
    record(10, "Monte Carlo vs oracle, p = 200, y in {0.5, 1, 2}", not failures and elapsed < 300,
           f"{len(BATTERY) * 3 - len(failures)}/{len(BATTERY) * 3} within tolerance, {elapsed:.1f}s")


@pytest.mark.parametrize("word", [(1, 1), (1, 2, 1, 2)])
def test_11_convergence_trend(word):
    t0 = time.perf_counter()
    ladder = [(50, 100), (100, 200), (200, 400), (400, 800)]
    errors = {p: [] for p, _ in ladder}
    for seed in range(5):
        for r in convergence_study(word, ladder, 200, seed=seed):
            errors[r.config["p"]].append(r.abs_error)
    medians = [statistics.median(errors[p]) for p, _ in ladder]
    elapsed = time.perf_counter() - t0
    ok = all(a >= b for a, b in zip(medians, medians[1:]))
    record(11, f"median error non-increasing along the ladder, word {word}", ok and elapsed < 600,
           "medians " + ", ".join(f"{m:.4f}" for m in medians) + f", {elapsed:.1f}s")


def test_12_reproducibility():
    cfg = SimConfig(60, 90, (1, 2, 1, 2), 30, seed=77)
    serial = [mc_trace_moment(cfg).to_json() for _ in range(2)]
    threaded = mc_trace_moment(cfg, workers=4).to_json()
    ladder_a = [r.to_json() for r in convergence_study((1, 1), [(20, 40), (40, 80)], 10, seed=3)]
    ladder_b = [r.to_json() for r in convergence_study((1, 1), [(20, 40), (40, 80)], 10, seed=3)]
    ok = serial[0] == serial[1] == threaded and ladder_a == ladder_b
    record(12, "identical seeds give byte-identical reports", ok)
