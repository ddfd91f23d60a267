import pytest

from siltengine import algebra, linalg

F = linalg.GF(32003)


def make_paper_algebra(field=F):
    """Nakayama-type algebra on two vertices with a 2-cycle of arrows.

    Quiver 1 <-> 2 (alpha: 1->2, beta: 2->1), relations alpha.beta.alpha
    and beta.alpha.beta.  Basis: e1, e2, alpha, beta, alpha.beta,
    beta.alpha (dimension 6, derived by hand from path reduction).
    """
    q = algebra.Quiver(2, [("alpha", 1, 2), ("beta", 2, 1)])
    rels = [
        algebra.Relation(q, [(1, (0, 1, 0))]),
        algebra.Relation(q, [(1, (1, 0, 1))]),
    ]
    return algebra.build_algebra(field, q, rels, 4)


def make_a2_algebra(field=F):
    """Path algebra of 1 -> 2, dimension 3."""
    q = algebra.Quiver(2, [("a", 1, 2)])
    return algebra.build_algebra(field, q, [], 2)


def make_a3_algebra(field=F):
    """Path algebra of 1 -> 2 -> 3, dimension 6."""
    q = algebra.Quiver(3, [("a", 1, 2), ("b", 2, 3)])
    return algebra.build_algebra(field, q, [], 3)


def make_loop_algebra(field=F):
    """One vertex, one loop x with x^2 = 0; dimension 2."""
    q = algebra.Quiver(1, [("x", 1, 1)])
    rels = [algebra.Relation(q, [(1, (0, 0))])]
    return algebra.build_algebra(field, q, rels, 2)


@pytest.fixture(scope="session")
def paper_algebra():
    return make_paper_algebra()


@pytest.fixture(scope="session")
def a2_algebra():
    return make_a2_algebra()


@pytest.fixture(scope="session")
def a3_algebra():
    return make_a3_algebra()


@pytest.fixture(scope="session")
def loop_algebra():
    return make_loop_algebra()
