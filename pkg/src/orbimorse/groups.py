"""Finite permutation groups, group actions, and weighted orbit counts.

Permutations are 0-based image tuples: g maps i to g[i].  Composition is
function composition, compose(g, h)[i] = g[h[i]].  Groups store their full
element table with the identity at index 0; element order is the breadth-first
closure order from the generators with lexicographic tie-break, so every
construction is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .errors import (
    ActionNotWellDefined,
    ClosureExceedsCap,
    MalformedPermutation,
    UnknownPoint,
    WeightNotOrbitConstant,
)

Perm = tuple[int, ...]

#: Largest group the closure routine will build unless told otherwise.
DEFAULT_CAP = 10080


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def compose(g: Perm, h: Perm) -> Perm:
    """g after h: (g*h)(i) = g(h(i))."""
    return tuple(g[x] for x in h)


def invert(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, gi in enumerate(g):
        out[gi] = i
    return tuple(out)


def check_perm(p: Sequence[int], degree: int) -> Perm:
    t = tuple(p)
    if len(t) != degree or sorted(t) != list(range(degree)):
        raise MalformedPermutation(
            f"not a 0-based image array of degree {degree}: {list(p)!r}")
    return t


@dataclass(frozen=True)
class FiniteGroup:
    """Permutation group of fixed degree with its full element table.

    elements[0] is the identity.  Closure under composition and inverse is
    guaranteed by the generate_group constructor; verify() re-checks it
    exhaustively for tests.
    """

    degree: int
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return self.elements[0]

    def __contains__(self, g) -> bool:
        return tuple(g) in set(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def verify(self) -> None:
        """Exhaustive closure/inverse/identity check (test helper)."""
        elems = set(self.elements)
        assert len(elems) == len(self.elements), "duplicate elements"
        assert self.elements[0] == identity_perm(self.degree)
        for g in self.elements:
            check_perm(g, self.degree)
            assert invert(g) in elems, f"inverse of {g} missing"
            for h in self.elements:
                assert compose(g, h) in elems, f"product {g}*{h} missing"


def generate_group(generators: Iterable[Sequence[int]], *,
                   degree: int | None = None,
                   cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Close a generator list under composition.

    Breadth-first from the identity, each level sorted lexicographically, so
    the element order is reproducible.  In a finite group the semigroup
    closure equals the subgroup closure, so inverses come for free.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise MalformedPermutation("degree required for an empty generator list")
        degree = len(gens[0])
    gens = [check_perm(g, degree) for g in gens]

    ident = identity_perm(degree)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        step = set()
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    step.add(y)
        frontier = sorted(step)
        seen.update(step)
        order.extend(frontier)
        if len(order) > cap:
            raise ClosureExceedsCap(
                f"group exceeds cap of {cap} elements (degree {degree})")
    return FiniteGroup(degree=degree, elements=tuple(order))


class GroupAction:
    """Action of a FiniteGroup on a finite labeled set.

    Stored as one image array over the point list per group element.  The
    identity and compatibility laws hold by construction for the provided
    constructors; verify() re-checks them exhaustively.
    """

    def __init__(self, group: FiniteGroup, points: Sequence[Hashable],
                 images: dict[Perm, tuple[int, ...]]):
        self.group = group
        self.points = tuple(points)
        self.index_of = {x: i for i, x in enumerate(self.points)}
        if len(self.index_of) != len(self.points):
            raise ActionNotWellDefined("duplicate points in acted-on set")
        self._images = images

    # -- constructors --------------------------------------------------

    @classmethod
    def natural(cls, group: FiniteGroup) -> "GroupAction":
        """The group acting on [0, degree) by its own permutations."""
        pts = range(group.degree)
        return cls(group, pts, {g: g for g in group.elements})

    @classmethod
    def from_generator_images(cls, group: FiniteGroup,
                              points: Sequence[Hashable],
                              gen_images: Sequence[Sequence[int]],
                              generators: Sequence[Sequence[int]]) -> "GroupAction":
        """Extend per-generator image arrays to the whole group.

        generators[i] (a ground permutation) acts on the points by
        gen_images[i].  The pair lists must line up.  Raises
        ActionNotWellDefined when the images do not factor through the
        group, i.e. two words with the same ground permutation disagree
        on the points.
        """
        d, m = group.degree, len(points)
        gens = [check_perm(g, d) for g in generators]
        imgs = [check_perm(a, m) for a in gen_images]
        if len(gens) != len(imgs):
            raise ActionNotWellDefined("one image array per generator required")
        combined = [g + tuple(d + x for x in a) for g, a in zip(gens, imgs)]
        try:
            big = generate_group(combined, degree=d + m, cap=group.order)
        except ClosureExceedsCap:
            raise ActionNotWellDefined(
                "generator images are inconsistent on some group element") from None
        if big.order != group.order:
            raise ActionNotWellDefined(
                "generator images are inconsistent on some group element")
        images: dict[Perm, tuple[int, ...]] = {}
        for e in big.elements:
            ground = e[:d]
            images[ground] = tuple(x - d for x in e[d:])
        if set(images) != set(group.elements):
            raise ActionNotWellDefined(
                "ground permutations do not generate the given group")
        return cls(group, points, images)

    # -- the action ----------------------------------------------------

    def image(self, g: Perm, x: Hashable) -> Hashable:
        if x not in self.index_of:
            raise UnknownPoint(f"{x!r} is not an acted-on point")
        return self.points[self._images[tuple(g)][self.index_of[x]]]

    def image_array(self, g: Perm) -> tuple[int, ...]:
        return self._images[tuple(g)]

    def verify(self) -> None:
        """Exhaustive identity/compatibility check (test helper)."""
        ident = self.group.identity
        assert self._images[ident] == tuple(range(len(self.points)))
        for g in self.group:
            ag = self._images[g]
            for h in self.group:
                ah = self._images[h]
                agh = self._images[compose(g, h)]
                assert agh == tuple(ag[x] for x in ah), \
                    f"action not compatible at {g}, {h}"


def stabilizer(action: GroupAction, x: Hashable) -> FiniteGroup:
    """Subgroup fixing x, in the parent element order."""
    if x not in action.index_of:
        raise UnknownPoint(f"{x!r} is not an acted-on point")
    i = action.index_of[x]
    elems = tuple(g for g in action.group if action._images[g][i] == i)
    return FiniteGroup(degree=action.group.degree, elements=elems)


def orbits(action: GroupAction) -> list[list[Hashable]]:
    """Orbit partition; each orbit sorted, orbits sorted by least member."""
    remaining = set(range(len(action.points)))
    out = []
    while remaining:
        seed = min(remaining)
        orb = {action._images[g][seed] for g in action.group}
        remaining -= orb
        out.append(sorted(action.points[i] for i in orb))
    out.sort(key=lambda o: o[0])
    return out


@dataclass(frozen=True)
class WeightedSet:
    """Finite labeled set with an exact rational weight per equivalence class.

    grouping partitions the points; the weight map must be constant on each
    class (checked on construction).
    """

    points: tuple
    weight: dict
    grouping: tuple[tuple, ...]

    def __post_init__(self):
        seen = []
        for cls_ in self.grouping:
            vals = {Fraction(self.weight[x]) for x in cls_}
            if len(vals) != 1:
                raise WeightNotOrbitConstant(
                    f"weights differ on class {list(cls_)!r}: {sorted(vals)}")
            seen.extend(cls_)
        if len(seen) != len(self.points) or set(seen) != set(self.points):
            raise WeightNotOrbitConstant("grouping does not partition the points")

    def class_weight(self, cls_) -> Fraction:
        return Fraction(self.weight[cls_[0]])


def weighted_orbit_count(action: GroupAction, weight: dict) -> Fraction:
    """Sum of one weight per orbit, computed two independent ways.

    Direct: sum the common weight over the orbit list.  Averaged: sum
    weight(x) * |Stab(x)| over all points and divide by |G|.  The two results
    are asserted equal before returning.
    """
    orbs = orbits(action)
    ws = WeightedSet(points=action.points,
                     weight=weight,
                     grouping=tuple(tuple(o) for o in orbs))
    direct = sum((ws.class_weight(o) for o in orbs), Fraction(0))
    averaged = Fraction(0)
    for x in action.points:
        averaged += Fraction(weight[x]) * stabilizer(action, x).order
    averaged /= action.group.order
    assert direct == averaged, (direct, averaged)
    return direct
