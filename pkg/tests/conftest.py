"""Shared brute-force oracles.  Deliberately naive: nothing here reuses the package's algorithms."""

from itertools import combinations

import pytest

ACCEPTANCE_LINES: list[str] = []


def all_set_partitions(elements):
    """Every set partition of ``elements`` (restricted growth strings)."""
    elements = list(elements)
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in all_set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def crosses_bruteforce(blocks, order=None):
    """True iff some a<b<c<d (in ``order``) has a,c in one block and b,d in another."""
    pos = {e: i for i, e in enumerate(order)} if order is not None else {e: e for b in blocks for e in b}
    label = {e: i for i, b in enumerate(blocks) for e in b}
    elems = sorted(label, key=pos.__getitem__)
    for a, b, c, d in combinations(elems, 4):
        if label[a] == label[c] != label[b] == label[d]:
            return True
    return False


def canon(blocks):
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def refines(p, q):
    return all(any(set(b) <= set(c) for c in q) for b in p)


def kreweras_definition(blocks, n):
    """Largest sigma on barred points with pi ∪ sigma non-crossing on 1,1bar,...,n,nbar."""
    order = [x for i in range(1, n + 1) for x in (i, -i)]  # -i stands for ibar
    admissible = []
    for sigma in all_set_partitions(range(1, n + 1)):
        joint = [list(b) for b in blocks] + [[-e for e in b] for b in sigma]
        if not crosses_bruteforce(joint, order):
            admissible.append(canon(sigma))
    tops = [s for s in admissible if all(refines(t, s) for t in admissible)]
    assert len(tops) == 1
    return tops[0]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES
