import pytest

from yonkit.presented import Arrow, Quiver, Relation, build_algebra


def make_a3():
    """Linear A3: 1 -a-> 2 -b-> 3, no relations (hereditary)."""
    q = Quiver([1, 2, 3], [Arrow("a", 1, 2), Arrow("b", 2, 3)])
    return build_algebra(q, [])


def make_a2():
    q = Quiver([1, 2], [Arrow("a", 1, 2)])
    return build_algebra(q, [])


def make_dual_numbers():
    """k[x]/(x^2): one vertex, loop x."""
    q = Quiver([1], [Arrow("x", 1, 1)])
    return build_algebra(q, [Relation(q, [(1, ("x", "x"))])])


def make_jordan(n):
    """k[x]/(x^n)."""
    q = Quiver([1], [Arrow("x", 1, 1)])
    return build_algebra(q, [Relation(q, [(1, ("x",) * n)])])


def make_a3_rad_square():
    """1 -a-> 2 -b-> 3 with ab = 0 (global dimension 2)."""
    q = Quiver([1, 2, 3], [Arrow("a", 1, 2), Arrow("b", 2, 3)])
    return build_algebra(q, [Relation(q, [(1, ("a", "b"))])])


def make_two_cycle():
    """a: 1 -> 2, b: 2 -> 1 with ab = 0 (global dimension 2, dim 5)."""
    q = Quiver([1, 2], [Arrow("a", 1, 2), Arrow("b", 2, 1)])
    return build_algebra(q, [Relation(q, [(1, ("a", "b"))])])


def make_loop_plus_arrow():
    """Loop a at 1, b: 1 -> 2, relations a^2 = 0, ab = 0 (not Gorenstein)."""
    q = Quiver([1, 2], [Arrow("a", 1, 1), Arrow("b", 1, 2)])
    return build_algebra(q, [Relation(q, [(1, ("a", "a"))]),
                             Relation(q, [(1, ("a", "b"))])])


def make_semisimple(n=2):
    q = Quiver(list(range(1, n + 1)), [])
    return build_algebra(q, [])


@pytest.fixture(scope="session")
def a3():
    return make_a3()


@pytest.fixture(scope="session")
def a2():
    return make_a2()


@pytest.fixture(scope="session")
def dual_numbers():
    return make_dual_numbers()


@pytest.fixture(scope="session")
def jordan3():
    return make_jordan(3)


@pytest.fixture(scope="session")
def a3_rad_square():
    return make_a3_rad_square()


@pytest.fixture(scope="session")
def two_cycle():
    return make_two_cycle()


@pytest.fixture(scope="session")
def loop_plus_arrow():
    return make_loop_plus_arrow()


@pytest.fixture(scope="session")
def semisimple():
    return make_semisimple()
