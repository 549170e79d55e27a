"""Morse systems on the quotient: weighted critical points and flow classes.

A system carries critical points (label, index, isotropy order, orientable
flag) and flow classes (label, endpoints, isotropy order, sign).  Flow signs
are taken verbatim; there is no orientation data left to re-gauge at this
level.  Two boundary conventions are supported:

    plus:   coefficient of q in d(p) sums  sign * iso(q) / iso(flow)
    minus:  coefficient of q in d(p) sums  sign * iso(p) / iso(flow)

Multiplication by the isotropy orders (psi) intertwines the two, so they
always share Betti numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chaincx import ChainMap, GradedComplex, RationalMatrix, verify_chain_map
from .errors import (
    DivisibilityViolation,
    IndexOutOfRange,
    MalformedSystem,
)


@dataclass(frozen=True)
class IntrinsicPoint:
    label: str
    index: int
    iso_order: int
    orientable: bool = True


@dataclass(frozen=True)
class IntrinsicFlow:
    label: str
    src: str
    dst: str
    iso_order: int
    sign: int


class OrbifoldMorseSystem:
    """Critical points and flow classes with isotropy weights.

    Non-orientable points may be stored for provenance; they contribute no
    chain generators and no flow may touch them.
    """

    def __init__(self, ambient_dim: int, crit_points, flows):
        self.ambient_dim = int(ambient_dim)
        self.crit = tuple(crit_points)
        self.flows = tuple(flows)
        self._by_label = {p.label: p for p in self.crit}
        if len(self._by_label) != len(self.crit):
            raise MalformedSystem("duplicate critical point labels")
        if len({f.label for f in self.flows}) != len(self.flows):
            raise MalformedSystem("duplicate flow labels")
        for p in self.crit:
            if not (0 <= p.index <= self.ambient_dim):
                raise IndexOutOfRange(
                    f"critical point {p.label!r} has index {p.index}, "
                    f"ambient dimension is {self.ambient_dim}")
            if p.iso_order < 1:
                raise MalformedSystem(f"iso_order of {p.label!r} must be positive")
        for f in self.flows:
            for end in (f.src, f.dst):
                if end not in self._by_label:
                    raise MalformedSystem(
                        f"flow {f.label!r} references unknown point {end!r}")
            s, d = self._by_label[f.src], self._by_label[f.dst]
            if not s.orientable or not d.orientable:
                raise MalformedSystem(
                    f"flow {f.label!r} touches a non-orientable point")
            if s.index != d.index + 1:
                raise MalformedSystem(
                    f"flow {f.label!r} does not drop index by one "
                    f"({s.index} -> {d.index})")
            if f.sign not in (1, -1):
                raise MalformedSystem(f"flow {f.label!r} has sign {f.sign}")
            if f.iso_order < 1:
                raise MalformedSystem(f"iso_order of flow {f.label!r} must be positive")
            for end in (s, d):
                if end.iso_order % f.iso_order != 0:
                    raise DivisibilityViolation(
                        f"iso_order {f.iso_order} of flow {f.label!r} does not "
                        f"divide iso_order {end.iso_order} of {end.label!r}")

    def point(self, label: str) -> IntrinsicPoint:
        return self._by_label[label]

    def generators(self, k: int) -> list:
        """Orientable critical points of index k, in declaration order."""
        return [p for p in self.crit if p.index == k and p.orientable]


def _boundary(s: OrbifoldMorseSystem, convention: str) -> GradedComplex:
    labels = [[p.label for p in s.generators(k)]
              for k in range(s.ambient_dim + 1)]
    pos = {lab: i for level in labels for i, lab in enumerate(level)}
    boundaries = []
    for k in range(1, s.ambient_dim + 1):
        rows, cols = labels[k - 1], labels[k]
        m = [[Fraction(0)] * len(cols) for _ in rows]
        for f in s.flows:
            if s.point(f.src).index != k:
                continue
            weight_point = s.point(f.dst if convention == "plus" else f.src)
            term = Fraction(f.sign * weight_point.iso_order, f.iso_order)
            if term.denominator != 1:
                raise DivisibilityViolation(
                    f"flow {f.label!r}: weight {term} is not an integer")
            m[pos[f.dst]][pos[f.src]] += term
        boundaries.append(RationalMatrix(m) if rows and cols
                          else RationalMatrix.zeros(len(rows), len(cols)))
    return GradedComplex.build(labels, boundaries)


def boundary_plus(s: OrbifoldMorseSystem) -> GradedComplex:
    """Boundary weighting each flow by the target isotropy order."""
    return _boundary(s, "plus")


def boundary_minus(s: OrbifoldMorseSystem) -> GradedComplex:
    """Boundary weighting each flow by the source isotropy order."""
    return _boundary(s, "minus")


def psi(s: OrbifoldMorseSystem) -> ChainMap:
    """Diagonal map p -> iso(p) * p from the minus complex to the plus complex.

    A chain map and an isomorphism over the rationals, so the two conventions
    have the same homology.
    """
    minus, plus = boundary_minus(s), boundary_plus(s)
    mats = []
    for k in range(s.ambient_dim + 1):
        mats.append(RationalMatrix.diagonal(
            [p.iso_order for p in s.generators(k)]))
    f = ChainMap(source=minus, target=plus, matrices=tuple(mats))
    ok, witness = verify_chain_map(f)
    assert ok, f"psi fails to commute with the boundaries at {witness}"
    return f


@dataclass(frozen=True)
class DSquaredReport:
    ok: bool
    witnesses: tuple  # (convention, top_label, bottom_label, value)


def verify_d_squared(s: OrbifoldMorseSystem) -> DSquaredReport:
    """Square the boundary under both conventions; collect nonzero entries."""
    witnesses = []
    for convention in ("plus", "minus"):
        c = _boundary(s, convention)
        for k in range(2, c.max_degree + 1):
            sq = c.boundary_at(k - 1) * c.boundary_at(k)
            for i, row in enumerate(sq.entries):
                for j, v in enumerate(row):
                    if v != 0:
                        witnesses.append((convention,
                                          c.basis_labels[k][j],
                                          c.basis_labels[k - 2][i], v))
    return DSquaredReport(ok=not witnesses, witnesses=tuple(witnesses))


def reverse(s: OrbifoldMorseSystem, n: int | None = None) -> OrbifoldMorseSystem:
    """System of the negated function: index k becomes n - k, flows turn around.

    Signs and isotropy orders are carried over verbatim; this is the
    convention used by the pairing identities.
    """
    if n is None:
        n = s.ambient_dim
    for p in s.crit:
        if p.index > n:
            raise IndexOutOfRange(
                f"index {p.index} of {p.label!r} exceeds ambient dimension {n}")
    crit = [IntrinsicPoint(label=p.label, index=n - p.index,
                           iso_order=p.iso_order, orientable=p.orientable)
            for p in s.crit]
    flows = [IntrinsicFlow(label=f.label, src=f.dst, dst=f.src,
                           iso_order=f.iso_order, sign=f.sign)
             for f in s.flows]
    return OrbifoldMorseSystem(ambient_dim=n, crit_points=crit, flows=flows)


@dataclass(frozen=True)
class PairingForm:
    """Diagonal inner product on the generators."""

    weights: dict

    def __post_init__(self):
        for lab, w in self.weights.items():
            if w <= 0:
                raise MalformedSystem(f"pairing weight of {lab!r} not positive")

    @classmethod
    def from_system(cls, s: OrbifoldMorseSystem, convention: str = "plus"):
        if convention == "plus":
            return cls({p.label: Fraction(1, p.iso_order) for p in s.crit
                        if p.orientable})
        return cls({p.label: Fraction(p.iso_order) for p in s.crit
                    if p.orientable})


@dataclass(frozen=True)
class PairingReport:
    ok: bool
    rows: tuple   # (p, q, convention, left, middle, right)
    witnesses: tuple


def pairing_check(s: OrbifoldMorseSystem, n: int | None = None) -> PairingReport:
    """Adjointness of the two boundaries under the diagonal pairings.

    With <p,p> = 1/iso(p): pairing d_plus(p) against q equals the bare sum of
    sign/iso(flow) over flows p -> q, and equals pairing p against the
    reversed system's plus-boundary of q.  With <p,p>' = iso(p) the same holds
    for the minus-boundaries.  Checked for every flow-connected pair.
    """
    rev = reverse(s, n)
    pairs = sorted({(f.src, f.dst) for f in s.flows})
    rows, witnesses = [], []
    for p, q in pairs:
        iso_p = Fraction(s.point(p).iso_order)
        iso_q = Fraction(s.point(q).iso_order)
        middle = sum((Fraction(f.sign, f.iso_order)
                      for f in s.flows if (f.src, f.dst) == (p, q)),
                     Fraction(0))
        n_plus = sum((Fraction(f.sign * s.point(q).iso_order, f.iso_order)
                      for f in s.flows if (f.src, f.dst) == (p, q)), Fraction(0))
        n_plus_rev = sum((Fraction(f.sign * rev.point(p).iso_order, f.iso_order)
                          for f in rev.flows if (f.src, f.dst) == (q, p)),
                         Fraction(0))
        left, right = n_plus / iso_q, n_plus_rev / iso_p
        rows.append((p, q, "plus", left, middle, right))
        if not (left == middle == right):
            witnesses.append((p, q, "plus", left, middle, right))
        n_minus = sum((Fraction(f.sign * s.point(p).iso_order, f.iso_order)
                       for f in s.flows if (f.src, f.dst) == (p, q)), Fraction(0))
        n_minus_rev = sum((Fraction(f.sign * rev.point(q).iso_order, f.iso_order)
                           for f in rev.flows if (f.src, f.dst) == (q, p)),
                          Fraction(0))
        leftu, rightu = n_minus * iso_q, n_minus_rev * iso_p
        midu = middle * iso_p * iso_q
        rows.append((p, q, "minus", leftu, midu, rightu))
        if not (leftu == midu == rightu):
            witnesses.append((p, q, "minus", leftu, midu, rightu))
    return PairingReport(ok=not witnesses, rows=tuple(rows),
                         witnesses=tuple(witnesses))
