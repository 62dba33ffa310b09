import pytest

from treeqsym.tree import RootedTree

# Root with four children carrying 1, 1, 2 and 2 leaves.
FOUR_BRANCH = "((())(())(()())(()()))"

# Root with children A (one child with a leaf), B (one child with two
# leaves), C (a leaf and a child with two leaves), D (a child with a leaf
# and a child with two leaves).
NINETEEN = "(((()))((()()))(()(()()))((())(()())))"


@pytest.fixture
def four_branch():
    return RootedTree.parse(FOUR_BRANCH)


@pytest.fixture
def nineteen():
    return RootedTree.parse(NINETEEN)


def find_vertex(t, code, parent_code=None):
    """First vertex whose subtree is isomorphic to ``code`` (with parent ``parent_code``)."""
    code = RootedTree.parse(code).canonical_code()
    if parent_code is not None:
        parent_code = RootedTree.parse(parent_code).canonical_code()
    for v in t.preorder:
        if t.codes[v] != code:
            continue
        p = t.parent[v]
        if parent_code is None or (p is not None and t.codes[p] == parent_code):
            return v
    raise LookupError(code)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
