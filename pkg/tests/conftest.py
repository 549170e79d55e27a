"""Shared instance builders used across the test modules."""

from fractions import Fraction

import pytest

from orbimorse.quotient import EquivariantMorseSystem


def make_heart():
    """Two humps swapped by an involution, non-orientable saddle."""
    return EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("p", 2, Fraction(2)), ("q", 2, Fraction(2)),
                     ("r", 1, Fraction(1)), ("s", 0, Fraction(0))],
        crit_images=[[1, 0, 2, 3]], crit_signs=[[1, 1, -1, 1]],
        flows=[("g1", "p", "r", 1), ("g2", "q", "r", -1),
               ("d1", "r", "s", 1), ("d2", "r", "s", -1)],
        flow_images=[[1, 0, 3, 2]], ambient_dim=2)


def make_torus():
    """Torus under negation; both saddles fixed with reversed orientation."""
    return EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("M", 2, None), ("r1", 1, None), ("r2", 1, None),
                     ("b", 0, None)],
        crit_images=[[0, 1, 2, 3]], crit_signs=[[1, -1, -1, 1]],
        flows=[("u1", "M", "r1", 1), ("u2", "M", "r1", -1),
               ("u3", "M", "r2", 1), ("u4", "M", "r2", -1),
               ("w1", "r1", "b", 1), ("w2", "r1", "b", -1),
               ("w3", "r2", "b", 1), ("w4", "r2", "b", -1)],
        flow_images=[[1, 0, 3, 2, 5, 4, 7, 6]], ambient_dim=2)


def make_dented():
    """Sphere with a symmetric dent; every orbit orientable."""
    return EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("M", 2, None), ("r1", 1, None), ("r2", 1, None),
                     ("b1", 0, None), ("b2", 0, None), ("B", 0, None)],
        crit_images=[[0, 2, 1, 4, 3, 5]], crit_signs=[[1, 1, 1, 1, 1, 1]],
        flows=[("u1", "M", "r1", 1), ("u2", "M", "r1", -1),
               ("u3", "M", "r2", 1), ("u4", "M", "r2", -1),
               ("w1", "r1", "b1", 1), ("w2", "r1", "B", -1),
               ("w3", "r2", "b2", 1), ("w4", "r2", "B", -1)],
        flow_images=[[2, 3, 0, 1, 6, 7, 4, 5]], ambient_dim=2)


def make_wedge():
    """One fixed and one free middle orbit; broken weights are +-1."""
    return EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("p", 2, None), ("q1", 1, None), ("q2", 1, None),
                     ("q3", 1, None), ("r", 0, None)],
        crit_images=[[0, 1, 3, 2, 4]], crit_signs=[[1, 1, 1, 1, 1]],
        flows=[("a1", "p", "q1", 1), ("a2", "p", "q1", 1),
               ("b1", "p", "q2", 1), ("b2", "p", "q3", 1),
               ("c1", "q1", "r", 1),
               ("d1", "q2", "r", -1), ("d2", "q3", "r", -1)],
        flow_images=[[0, 1, 3, 2, 4, 6, 5]], ambient_dim=2)


def make_football(p):
    return EquivariantMorseSystem.from_generator_data(
        generators=[tuple(list(range(1, p)) + [0])], degree=p,
        crit_points=[("n", 2, None), ("s", 0, None)],
        crit_images=[[0, 1]], crit_signs=[[1, 1]],
        flows=[], flow_images=[[]], ambient_dim=2)


@pytest.fixture
def heart():
    return make_heart()


@pytest.fixture
def torus():
    return make_torus()


@pytest.fixture
def dented():
    return make_dented()


@pytest.fixture
def wedge():
    return make_wedge()
