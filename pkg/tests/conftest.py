"""Shared fixtures and helpers for the test suite."""

import random

import pytest

from heartglue.algebra import Relation, build_algebra, make_quiver
from heartglue.complexes import CxMap
from heartglue.derived import dhom_space
from heartglue.reps import RepMap, compose as rcompose


@pytest.fixture(scope="session")
def a2():
    return build_algebra(make_quiver(2, [("a", 1, 2)]))


@pytest.fixture(scope="session")
def kron():
    return build_algebra(make_quiver(2, [("a", 1, 2), ("b", 1, 2)]))


@pytest.fixture(scope="session")
def a3():
    return build_algebra(make_quiver(3, [("a", 1, 2), ("b", 2, 3)]))


@pytest.fixture(scope="session")
def a3rel():
    q = make_quiver(3, [("a", 1, 2), ("b", 2, 3)])
    return build_algebra(q, [Relation.of([(1, ("a", "b"))])])


@pytest.fixture(scope="session")
def a4rel():
    # linear A4 with both length-two paths killed; global dimension 3,
    # so degree-3 extension groups are nonzero
    q = make_quiver(4, [("a", 1, 2), ("b", 2, 3), ("c", 3, 4)])
    return build_algebra(q, [Relation.of([(1, ("a", "b"))]),
                             Relation.of([(1, ("b", "c"))])])


@pytest.fixture(scope="session")
def commsquare():
    q = make_quiver(4, [("a", 1, 2), ("b", 1, 3), ("c", 2, 4), ("d", 3, 4)])
    return build_algebra(q, [Relation.of([(1, ("a", "c")), (-1, ("b", "d"))])])


@pytest.fixture()
def rng():
    return random.Random(90125)


def class_of_module_map(f: RepMap):
    """Degree-0 Hom class of a plain module map."""
    sp = dhom_space(f.source, f.target, 0)
    comps = {i: rcompose(f, c) if i == 0 else c
             for i, c in sp.res.eps.components.items()}
    lifted = CxMap(sp.res.cx, sp.t,
                   {i: RepMap(sp.res.cx.term(i), sp.t.term(i), m.blocks)
                    for i, m in comps.items()})
    return sp.class_of(lifted)
