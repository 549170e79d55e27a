"""Simplicial complexes with group actions: subdivision, quotients, homology.

Simplices are stored as tuples sorted by label; boundary orientations come
from that global order.  Barycentric subdivision labels its vertices by the
simplices they subdivide (tuples), so a group action on the original vertices
extends canonically.

Regularity here means: a group element fixing a simplex setwise fixes it
vertex-wise.  That predicate alone does not guarantee a simplicial quotient
(distinct orbits can land on one vertex set, or a simplex can collapse), so
quotient() also rejects those collisions, and regularize() subdivides until
the quotient goes through; two subdivisions always suffice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .chaincx import GradedComplex, RationalMatrix, betti as complex_betti
from .errors import (
    ActionNotSimplicial,
    NotASubcomplex,
    NotRegular,
)
from .groups import FiniteGroup, GroupAction, orbits


def _close_downward(maximal):
    simplices = set()
    for s in maximal:
        t = tuple(sorted(set(s)))
        if len(t) != len(s):
            raise ActionNotSimplicial(f"simplex {s!r} repeats a vertex")
        for mask in range(1, 1 << len(t)):
            face = tuple(t[i] for i in range(len(t)) if mask >> i & 1)
            simplices.add(face)
    return simplices


class SimplicialComplex:
    """Finite abstract simplicial complex, downward closed by construction."""

    def __init__(self, vertices, maximal_simplices):
        self.vertices = tuple(sorted(set(vertices)))
        closed = _close_downward(maximal_simplices)
        for s in closed:
            for vtx in s:
                if vtx not in set(self.vertices):
                    raise NotASubcomplex(
                        f"simplex {s!r} uses undeclared vertex {vtx!r}")
        for vtx in self.vertices:
            closed.add((vtx,))
        self.by_dim: dict[int, tuple] = {}
        top = max((len(s) - 1 for s in closed), default=0)
        for k in range(top + 1):
            self.by_dim[k] = tuple(sorted(s for s in closed if len(s) == k + 1))

    @property
    def dim(self) -> int:
        return max(self.by_dim)

    def simplices(self, k: int) -> tuple:
        return self.by_dim.get(k, ())

    def all_simplices(self):
        for k in sorted(self.by_dim):
            yield from self.by_dim[k]

    def has(self, s) -> bool:
        t = tuple(sorted(s))
        return t in set(self.by_dim.get(len(t) - 1, ()))

    def contains(self, other: "SimplicialComplex") -> bool:
        return all(self.has(s) for s in other.all_simplices())

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.by_dim[k]) for k in sorted(self.by_dim))

    def chain_complex(self, sub: Optional["SimplicialComplex"] = None) -> GradedComplex:
        """Simplicial chain complex, relative to sub when given."""
        if sub is not None and not self.contains(sub):
            raise NotASubcomplex("relative part is not a subcomplex")
        in_sub = set(sub.all_simplices()) if sub is not None else set()
        labels = [[s for s in self.simplices(k) if s not in in_sub]
                  for k in range(self.dim + 1)]
        pos = [{s: i for i, s in enumerate(level)} for level in labels]
        boundaries = []
        for k in range(1, self.dim + 1):
            rows, cols = labels[k - 1], labels[k]
            m = [[Fraction(0)] * len(cols) for _ in rows]
            for j, s in enumerate(cols):
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    if face in pos[k - 1]:
                        m[pos[k - 1][face]][j] += (-1) ** i
            boundaries.append(RationalMatrix(m) if rows and cols
                              else RationalMatrix.zeros(len(rows), len(cols)))
        return GradedComplex.build(labels, boundaries)


def homology(K: SimplicialComplex,
             sub: Optional[SimplicialComplex] = None) -> tuple[int, ...]:
    """Betti numbers of K, or of the pair (K, sub)."""
    return complex_betti(K.chain_complex(sub))


def barycentric_subdivide(K: SimplicialComplex) -> SimplicialComplex:
    """First barycentric subdivision; vertices are the simplices of K."""
    maximal = []
    top = K.dim
    covered = set()
    for k in range(top, -1, -1):
        for s in K.simplices(k):
            if s in covered:
                continue
            # s is maximal: enumerate its full flags.
            for order in permutations(s):
                flag = tuple(tuple(sorted(order[:i + 1])) for i in range(len(s)))
                maximal.append(flag)
            for mask in range(1, 1 << len(s)):
                covered.add(tuple(s[i] for i in range(len(s)) if mask >> i & 1))
    return SimplicialComplex(vertices=list(K.all_simplices()),
                             maximal_simplices=maximal)


class GSimplicialComplex:
    """Simplicial complex with a vertex action mapping simplices to simplices."""

    def __init__(self, complex_: SimplicialComplex, group: FiniteGroup,
                 vertex_action: GroupAction):
        if vertex_action.points != complex_.vertices:
            raise ActionNotSimplicial(
                "vertex action must act on the complex's vertex list")
        self.complex = complex_
        self.group = group
        self.vertex_action = vertex_action
        for g in group:
            for s in complex_.all_simplices():
                img = tuple(sorted(vertex_action.image(g, vtx) for vtx in s))
                if len(set(img)) != len(s) or not complex_.has(img):
                    raise ActionNotSimplicial(
                        f"g={list(g)} sends simplex {s!r} to {img!r}")

    def simplex_image(self, g, s) -> tuple:
        return tuple(sorted(self.vertex_action.image(g, vtx) for vtx in s))

    def subdivided(self) -> "GSimplicialComplex":
        sd = barycentric_subdivide(self.complex)
        idx = {vtx: i for i, vtx in enumerate(sd.vertices)}
        images = {}
        for g in self.group:
            images[g] = tuple(idx[self.simplex_image(g, vtx)]
                              for vtx in sd.vertices)
        action = GroupAction(self.group, sd.vertices, images)
        return GSimplicialComplex(sd, self.group, action)


def is_regular(gk: GSimplicialComplex) -> bool:
    """True when every setwise-fixed simplex is fixed vertex-wise."""
    for g in gk.group:
        for s in gk.complex.all_simplices():
            img = gk.simplex_image(g, s)
            if img == s and any(gk.vertex_action.image(g, vtx) != vtx
                                for vtx in s):
                return False
    return True


@dataclass
class QuotientComplex:
    """Quotient simplicial complex with a representative per simplex orbit."""

    complex: SimplicialComplex
    provenance: dict = field(default_factory=dict)
    sub: Optional[SimplicialComplex] = None


def quotient(gk: GSimplicialComplex,
             sub: Optional[SimplicialComplex] = None) -> QuotientComplex:
    """Quotient by the action; simplices are orbits, faces via representatives.

    Raises NotRegular when a setwise-fixed simplex moves vertex-wise, when a
    simplex collapses in the quotient (two vertices sharing an orbit), or when
    two distinct orbits land on the same quotient vertex set.
    """
    if not is_regular(gk):
        raise NotRegular("a setwise-fixed simplex is moved vertex-wise")
    if sub is not None and not gk.complex.contains(sub):
        raise NotASubcomplex("relative part is not a subcomplex")

    vertex_label = {}
    for orb in orbits(gk.vertex_action):
        for vtx in orb:
            vertex_label[vtx] = orb[0]

    seen: dict[tuple, tuple] = {}
    maximal = []
    for s in gk.complex.all_simplices():
        down = tuple(sorted({vertex_label[vtx] for vtx in s}))
        if len(down) != len(s):
            raise NotRegular(
                f"simplex {s!r} collapses onto {down!r} in the quotient")
        orbit = min(gk.simplex_image(g, s) for g in gk.group)
        if down in seen and seen[down] != orbit:
            raise NotRegular(
                f"orbits of {seen[down]!r} and {orbit!r} share the quotient "
                f"vertex set {down!r}")
        seen[down] = orbit
        maximal.append(down)
    qc = SimplicialComplex(vertices=sorted({vertex_label[v] for v in gk.complex.vertices}),
                           maximal_simplices=maximal)
    provenance = {down: rep for down, rep in seen.items()}

    qsub = None
    if sub is not None:
        for g in gk.group:
            for s in sub.all_simplices():
                if not sub.has(gk.simplex_image(g, s)):
                    raise NotASubcomplex(
                        f"relative part is not invariant: g={list(g)} moves {s!r} out")
        qsub = SimplicialComplex(
            vertices=sorted({vertex_label[v] for v in sub.vertices}),
            maximal_simplices=[tuple(sorted({vertex_label[v] for v in s}))
                               for s in sub.all_simplices()])
    return QuotientComplex(complex=qc, provenance=provenance, sub=qsub)


def regularize(gk: GSimplicialComplex, sub: Optional[SimplicialComplex] = None,
               max_rounds: int = 2):
    """Subdivide until the quotient is simplicial; returns (gk, sub, rounds, q).

    One round is usually enough, two always are.
    """
    rounds = 0
    current, cur_sub = gk, sub
    while True:
        try:
            q = quotient(current, cur_sub)
            return current, cur_sub, rounds, q
        except NotRegular:
            if rounds >= max_rounds:
                raise
        current = current.subdivided()
        if cur_sub is not None:
            cur_sub = barycentric_subdivide(cur_sub)
        rounds += 1


def _perm_sign(values) -> int:
    inv = 0
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                inv += 1
    return -1 if inv % 2 else 1


def invariant_homology(gk: GSimplicialComplex,
                       sub: Optional[SimplicialComplex] = None) -> tuple[int, ...]:
    """Dimensions of the invariant part of (relative) homology.

    Averages the induced chain maps over the group; the average is an exact
    idempotent chain map, so the invariant dimension in each degree is the
    rank of its image on homology, computed from a kernel basis without ever
    choosing a homology basis.
    """
    if sub is not None:
        for g in gk.group:
            for s in sub.all_simplices():
                if not sub.has(gk.simplex_image(g, s)):
                    raise NotASubcomplex(
                        f"relative part is not invariant: g={list(g)} moves {s!r} out")
    C = gk.complex.chain_complex(sub)
    n = C.max_degree
    order = gk.group.order

    averaged = []
    for k in range(n + 1):
        basis = C.basis_labels[k]
        pos = {s: i for i, s in enumerate(basis)}
        rows = [[Fraction(0)] * len(basis) for _ in basis]
        for g in gk.group:
            for j, s in enumerate(basis):
                raw = [gk.vertex_action.image(g, vtx) for vtx in s]
                img = tuple(sorted(raw))
                rows[pos[img]][j] += Fraction(_perm_sign(raw), order)
        averaged.append(RationalMatrix(rows) if basis
                        else RationalMatrix.zeros(0, 0))

    for k in range(1, n + 1):
        lhs = C.boundary_at(k) * averaged[k]
        rhs = averaged[k - 1] * C.boundary_at(k)
        assert lhs == rhs, f"averaged map fails to commute at degree {k}"

    out = []
    for k in range(n + 1):
        cycles = C.boundary_at(k).nullspace()
        bmat = C.boundary_at(k + 1)
        pz = [RationalMatrix.from_columns([z], C.dim(k)) for z in cycles]
        cols = [averaged[k] * z for z in pz]
        aug_cols = [c.column(0) for c in cols] + \
                   [bmat.column(j) for j in range(bmat.cols)]
        if aug_cols:
            aug = RationalMatrix.from_columns(aug_cols, C.dim(k))
            out.append(aug.rank() - bmat.rank())
        else:
            out.append(0)
    return tuple(out)


@dataclass(frozen=True)
class CompareReport:
    morse_betti: tuple[int, ...]
    quotient_betti: tuple[int, ...]
    rounds: int
    equal: bool


def compare(system, gk: GSimplicialComplex) -> CompareReport:
    """Betti numbers of the invariant Morse complex against the quotient space."""
    from .chaincx import betti as _betti
    from .quotient import invariant_boundary

    morse = _betti(invariant_boundary(system))
    _, _, rounds, q = regularize(gk)
    simp = homology(q.complex)
    width = max(len(morse), len(simp))
    morse_p = tuple(morse) + (0,) * (width - len(morse))
    simp_p = tuple(simp) + (0,) * (width - len(simp))
    return CompareReport(morse_betti=morse_p, quotient_betti=simp_p,
                         rounds=rounds, equal=morse_p == simp_p)
