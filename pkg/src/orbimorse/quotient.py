"""Equivariant Morse systems on a manifold with a finite group action.

The system records critical points, an orientation cocycle tau with values in
{+1, -1}, signed flows, and the induced actions on both.  tau(g, p) compares
the pushed-forward orientation of the unstable manifold at p with the chosen
orientation at g.p; the cocycle law tau(gh, p) = tau(g, h.p) tau(h, p) and the
sign-equivariance law eps(g.flow) = tau(g, src) tau(g, dst) eps(flow) tie the
data together.

Orbit classification: an orbit is orientable when tau(g, p) = +1 for every g
in the stabilizer of one (hence any) member.  Orientable orbits carry the
quotient chain generators; non-orientable orbits are discarded, and the
boundary of an orbit sum provably cancels on them.

Canonical gauge.  Orientation choices can be re-gauged (flip any subset of
unstable-manifold orientations, transforming tau and eps accordingly) without
changing the geometry.  All derived quantities here are computed in a
canonical gauge so they are literal functions of the gauge class: first the
orientations over each orientable orbit are made G-invariant by propagation
from the least member, then the leftover one-sign-per-orbit freedom is fixed
along a deterministic spanning forest of the orbit adjacency graph (the
lexicographically least flow class on each forest edge gets sign +1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chaincx import GradedComplex, RationalMatrix, verify_complex
from .errors import (
    ActionNotWellDefined,
    CancellationFailure,
    ClosureExceedsCap,
    GaugeFailure,
    IndexMismatch,
    InvarianceFailure,
    MalformedSystem,
    SignNotOrbitConstant,
    SystemNotValid,
    UnknownPoint,
)
from .groups import (
    DEFAULT_CAP,
    FiniteGroup,
    GroupAction,
    check_perm,
    compose,
    generate_group,
    orbits,
    stabilizer,
)
from .intrinsic import IntrinsicFlow, IntrinsicPoint, OrbifoldMorseSystem


@dataclass(frozen=True)
class CritPoint:
    label: str
    index: int
    value: Optional[Fraction] = None


@dataclass(frozen=True)
class Flow:
    label: str
    src: str
    dst: str
    sign: int


@dataclass(frozen=True)
class Violation:
    law: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    self_indexing: Optional[bool]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "ok"
        first = self.violations[0]
        return f"{len(self.violations)} violation(s), first: {first.law}: {first.detail}"


@dataclass(frozen=True)
class CriticalOrbit:
    members: tuple[str, ...]
    index: int
    iso_order: int
    orientable: bool

    @property
    def rep(self) -> str:
        return self.members[0]


class EquivariantMorseSystem:
    """Critical points, flows, orientation cocycle, and the group actions.

    Construction checks structure only (labels resolve, signs are +-1, the
    tau table covers the group).  The geometric laws are the validator's job,
    so defective systems can be built and diagnosed.
    """

    def __init__(self, group: FiniteGroup, crit_points, point_action: GroupAction,
                 tau_table: dict, flows, flow_action: GroupAction,
                 ambient_dim: int):
        self.group = group
        self.crit = tuple(crit_points)
        self.point_action = point_action
        self.flows = tuple(flows)
        self.flow_action = flow_action
        self.ambient_dim = int(ambient_dim)
        self._crit_by_label = {p.label: p for p in self.crit}
        self._flow_by_label = {f.label: f for f in self.flows}
        self._tau = {tuple(g): tuple(row) for g, row in tau_table.items()}
        self._cache: dict = {}

        if len(self._crit_by_label) != len(self.crit):
            raise MalformedSystem("duplicate critical point labels")
        if len(self._flow_by_label) != len(self.flows):
            raise MalformedSystem("duplicate flow labels")
        if point_action.points != tuple(p.label for p in self.crit):
            raise MalformedSystem("point action must act on the critical labels in order")
        if flow_action.points != tuple(f.label for f in self.flows):
            raise MalformedSystem("flow action must act on the flow labels in order")
        for f in self.flows:
            for end in (f.src, f.dst):
                if end not in self._crit_by_label:
                    raise MalformedSystem(
                        f"flow {f.label!r} references unknown point {end!r}")
            if f.sign not in (1, -1):
                raise MalformedSystem(f"flow {f.label!r} has sign {f.sign!r}")
        if set(self._tau) != set(group.elements):
            raise MalformedSystem("tau table must cover every group element")
        for g, row in self._tau.items():
            if len(row) != len(self.crit) or any(s not in (1, -1) for s in row):
                raise MalformedSystem("tau rows must be +-1 per critical point")

    # -- construction from generator data --------------------------------

    @classmethod
    def from_generator_data(cls, *, generators, degree=None, cap=DEFAULT_CAP,
                            crit_points, crit_images, crit_signs,
                            flows, flow_images, ambient_dim):
        """Build the full tables from per-generator data.

        The cocycle is extended by closing signed permutations: a critical
        label with a sign is a point of a doubled set, so plain permutation
        closure realizes exactly the cocycle composition law.  Inconsistent
        generator data fails to project onto the group and raises
        ActionNotWellDefined.
        """
        group = generate_group(generators, degree=degree, cap=cap)
        d = group.degree
        c, nf = len(crit_points), len(flows)
        gens = [check_perm(g, d) for g in generators]
        combined = []
        for gi, g in enumerate(gens):
            imgs = list(crit_images[gi])
            sgns = list(crit_signs[gi])
            if sorted(imgs) != list(range(c)) or any(s not in (1, -1) for s in sgns):
                raise MalformedSystem(
                    f"generator {gi}: bad critical images or signs")
            fimgs = list(flow_images[gi])
            if sorted(fimgs) != list(range(nf)):
                raise MalformedSystem(f"generator {gi}: bad flow images")
            perm = list(g)
            for j in range(c):
                k, s = imgs[j], sgns[j]
                perm.append(d + 2 * k + (0 if s == 1 else 1))
                perm.append(d + 2 * k + (1 if s == 1 else 0))
            for j in range(nf):
                perm.append(d + 2 * c + fimgs[j])
            combined.append(tuple(perm))

        if combined:
            try:
                big = generate_group(combined, degree=d + 2 * c + nf,
                                     cap=group.order)
            except ClosureExceedsCap:
                raise ActionNotWellDefined(
                    "cocycle or action data inconsistent across group words") from None
            if big.order != group.order:
                raise ActionNotWellDefined(
                    "cocycle or action data inconsistent across group words")
            elements = big.elements
        else:
            elements = (tuple(range(d + 2 * c + nf)),)

        point_images, tau_table, flow_images_full = {}, {}, {}
        for e in elements:
            ground = e[:d]
            pts, sgn = [], []
            for j in range(c):
                enc = e[d + 2 * j] - d
                pts.append(enc // 2)
                sgn.append(1 if enc % 2 == 0 else -1)
            point_images[ground] = tuple(pts)
            tau_table[ground] = tuple(sgn)
            flow_images_full[ground] = tuple(e[d + 2 * c + j] - (d + 2 * c)
                                             for j in range(nf))
        crit = tuple(CritPoint(*p) if not isinstance(p, CritPoint) else p
                     for p in crit_points)
        flws = tuple(Flow(*f) if not isinstance(f, Flow) else f for f in flows)
        pa = GroupAction(group, [p.label for p in crit], point_images)
        fa = GroupAction(group, [f.label for f in flws], flow_images_full)
        return cls(group, crit, pa, tau_table, flws, fa, ambient_dim)

    # -- access -----------------------------------------------------------

    def tau(self, g, label: str) -> int:
        if label not in self._crit_by_label:
            raise UnknownPoint(f"{label!r} is not a critical point")
        return self._tau[tuple(g)][self.point_action.index_of[label]]

    def crit_point(self, label: str) -> CritPoint:
        return self._crit_by_label[label]

    def flow(self, label: str) -> Flow:
        return self._flow_by_label[label]

    def manifold_complex(self) -> GradedComplex:
        """Chain complex of the ambient manifold's Morse data (no quotient)."""
        labels = [[p.label for p in self.crit if p.index == k]
                  for k in range(self.ambient_dim + 1)]
        pos = {lab: i for level in labels for i, lab in enumerate(level)}
        boundaries = []
        for k in range(1, self.ambient_dim + 1):
            rows, cols = labels[k - 1], labels[k]
            m = [[Fraction(0)] * len(cols) for _ in rows]
            for f in self.flows:
                if self._crit_by_label[f.src].index == k \
                        and self._crit_by_label[f.dst].index == k - 1:
                    m[pos[f.dst]][pos[f.src]] += f.sign
            boundaries.append(RationalMatrix(m) if rows and cols
                              else RationalMatrix.zeros(len(rows), len(cols)))
        return GradedComplex.build(labels, boundaries)


# -- validation -----------------------------------------------------------

def validate_system(s: EquivariantMorseSystem) -> ValidationReport:
    """Check every law, reporting each violation with a witness; never raises."""
    v: list[Violation] = []
    G = s.group

    for p in s.crit:
        if not (0 <= p.index <= s.ambient_dim):
            v.append(Violation("index_range",
                               f"point {p.label!r} has index {p.index}, "
                               f"ambient dimension {s.ambient_dim}"))

    for g in G:
        for p in s.crit:
            q = s.point_action.image(g, p.label)
            if s._crit_by_label[q].index != p.index:
                v.append(Violation(
                    "index_equivariance",
                    f"g={list(g)} sends {p.label!r} (index {p.index}) to "
                    f"{q!r} (index {s._crit_by_label[q].index})"))

    for f in s.flows:
        si = s._crit_by_label[f.src].index
        di = s._crit_by_label[f.dst].index
        if si != di + 1:
            v.append(Violation(
                "flow_index_step",
                f"flow {f.label!r} goes from index {si} to index {di}"))

    for g in G:
        for f in s.flows:
            gf = s._flow_by_label[s.flow_action.image(g, f.label)]
            if gf.src != s.point_action.image(g, f.src) \
                    or gf.dst != s.point_action.image(g, f.dst):
                v.append(Violation(
                    "endpoint_equivariance",
                    f"g={list(g)} sends flow {f.label!r} to {gf.label!r} "
                    f"but the endpoints do not match"))

    for g in G:
        for h in G:
            gh = compose(g, h)
            for p in s.crit:
                hp = s.point_action.image(h, p.label)
                if s.tau(gh, p.label) != s.tau(g, hp) * s.tau(h, p.label):
                    v.append(Violation(
                        "cocycle",
                        f"tau(gh, {p.label!r}) != tau(g, {hp!r}) tau(h, {p.label!r}) "
                        f"for g={list(g)}, h={list(h)}"))

    for g in G:
        for f in s.flows:
            gf = s._flow_by_label[s.flow_action.image(g, f.label)]
            want = s.tau(g, f.src) * s.tau(g, f.dst) * f.sign
            if gf.sign != want:
                v.append(Violation(
                    "sign_equivariance",
                    f"g={list(g)}: flow {f.label!r} maps to {gf.label!r} with "
                    f"sign {gf.sign}, expected {want}"))

    if not any(x.law in ("index_range", "flow_index_step") for x in v):
        ok, witness = verify_complex(s.manifold_complex())
        if not ok:
            k, row, col, val = witness
            v.append(Violation(
                "manifold_d_squared",
                f"boundary squared has entry {val} from {col!r} to {row!r}"))

    self_indexing: Optional[bool] = None
    values_present = [p for p in s.crit if p.value is not None]
    if values_present:
        for g in G:
            for p in values_present:
                q = s._crit_by_label[s.point_action.image(g, p.label)]
                if q.value != p.value:
                    v.append(Violation(
                        "value_equivariance",
                        f"g={list(g)} sends {p.label!r} (value {p.value}) to "
                        f"{q.label!r} (value {q.value})"))
        self_indexing = (len(values_present) == len(s.crit)
                         and all(p.value == p.index for p in s.crit))

    return ValidationReport(violations=tuple(v), self_indexing=self_indexing)


def _validated(s: EquivariantMorseSystem) -> ValidationReport:
    if "report" not in s._cache:
        s._cache["report"] = validate_system(s)
    return s._cache["report"]


def _require_valid(s: EquivariantMorseSystem, check_valid: bool) -> None:
    if check_valid:
        report = _validated(s)
        if not report.ok:
            raise SystemNotValid(report)


# -- classification ---------------------------------------------------------

def classify(s: EquivariantMorseSystem) -> tuple[CriticalOrbit, ...]:
    """Orbit classification, ordered by least member label.

    An orbit is orientable when tau is +1 on the stabilizer of its least
    member; by the cocycle law the negative part of a stabilizer is empty or
    exactly half, which is asserted.
    """
    if "classify" in s._cache:
        return s._cache["classify"]
    out = []
    for members in orbits(s.point_action):
        rep = members[0]
        stab = stabilizer(s.point_action, rep)
        neg = [g for g in stab if s.tau(g, rep) == -1]
        assert len(neg) in (0, stab.order // 2), \
            f"tau is not a homomorphism on the stabilizer of {rep!r}"
        out.append(CriticalOrbit(
            members=tuple(members),
            index=s._crit_by_label[rep].index,
            iso_order=stab.order,
            orientable=not neg))
    result = tuple(out)
    s._cache["classify"] = result
    return result


def orbit_of(s: EquivariantMorseSystem, label: str) -> CriticalOrbit:
    for orb in classify(s):
        if label in orb.members:
            return orb
    raise UnknownPoint(f"{label!r} is not a critical point")


# -- canonical gauge ----------------------------------------------------------

@dataclass(frozen=True)
class _Gauge:
    sigma: dict          # point label -> +-1
    eps: dict            # flow label -> canonical sign
    flow_orbits: tuple   # tuple of tuples of flow labels


def _flow_orbit_endpoints(s, members):
    f = s._flow_by_label[members[0]]
    return orbit_of(s, f.src), orbit_of(s, f.dst)


def _normalize(s: EquivariantMorseSystem) -> _Gauge:
    if "gauge" in s._cache:
        return s._cache["gauge"]
    cls = classify(s)

    # G-invariant orientations over each orientable orbit.
    sigma = {p.label: 1 for p in s.crit}
    for orb in cls:
        if not orb.orientable:
            continue
        rep = orb.rep
        for m in orb.members:
            for g in s.group:
                if s.point_action.image(g, rep) == m:
                    sigma[m] = s.tau(g, rep)
                    break
        for g in s.group:
            for p in orb.members:
                gp = s.point_action.image(g, p)
                if sigma[gp] * s.tau(g, p) * sigma[p] != 1:
                    raise GaugeFailure(
                        f"no G-invariant orientation on orbit of {rep!r}; "
                        f"witness g={list(g)}, p={p!r}")

    eps = {f.label: sigma[f.src] * sigma[f.dst] * f.sign for f in s.flows}

    flow_orbits = tuple(tuple(o) for o in orbits(s.flow_action))
    orientable_classes = {}
    for members in flow_orbits:
        src_orb, dst_orb = _flow_orbit_endpoints(s, members)
        if not (src_orb.orientable and dst_orb.orientable):
            continue
        signs = {eps[m] for m in members}
        if len(signs) != 1:
            raise SignNotOrbitConstant(
                f"flow orbit of {members[0]!r} carries signs {sorted(signs)} "
                f"after orientation normalization")
        pair = tuple(sorted((src_orb.rep, dst_orb.rep)))
        orientable_classes.setdefault(pair, []).append(members[0])

    # Fix the residual one-sign-per-orbit freedom along a spanning forest.
    adjacency: dict = {}
    for (a, b), reps in orientable_classes.items():
        if a == b:
            continue
        adjacency.setdefault(a, {})[b] = min(reps)
        adjacency.setdefault(b, {})[a] = min(reps)
    shift = {orb.rep: 1 for orb in cls if orb.orientable}
    seen = set()
    for orb in cls:
        if not orb.orientable or orb.rep in seen:
            continue
        seen.add(orb.rep)
        queue = [orb.rep]
        while queue:
            u = queue.pop(0)
            for vtx in sorted(adjacency.get(u, {})):
                if vtx in seen:
                    continue
                seen.add(vtx)
                anchor = adjacency[u][vtx]
                shift[vtx] = eps[anchor] * shift[u]
                queue.append(vtx)

    orbit_rep_of = {}
    for orb in cls:
        for m in orb.members:
            orbit_rep_of[m] = (orb.rep, orb.orientable)
    sigma_final = {}
    for p in s.crit:
        rep, orientable = orbit_rep_of[p.label]
        sigma_final[p.label] = sigma[p.label] * (shift[rep] if orientable else 1)
    eps_final = {f.label: sigma_final[f.src] * sigma_final[f.dst] * f.sign
                 for f in s.flows}

    gauge = _Gauge(sigma=sigma_final, eps=eps_final, flow_orbits=flow_orbits)
    s._cache["gauge"] = gauge
    return gauge


def regauge(s: EquivariantMorseSystem, sigma: dict) -> EquivariantMorseSystem:
    """Flip unstable-manifold orientations by sigma; transforms tau and eps.

    The result describes the same geometry in a different gauge; used by the
    invariance test suites.
    """
    sg = {p.label: sigma.get(p.label, 1) for p in s.crit}
    tau_table = {}
    for g in s.group:
        row = []
        for p in s.crit:
            gp = s.point_action.image(g, p.label)
            row.append(sg[gp] * s.tau(g, p.label) * sg[p.label])
        tau_table[g] = tuple(row)
    flows = [Flow(label=f.label, src=f.src, dst=f.dst,
                  sign=sg[f.src] * sg[f.dst] * f.sign) for f in s.flows]
    return EquivariantMorseSystem(s.group, s.crit, s.point_action, tau_table,
                                  flows, s.flow_action, s.ambient_dim)


# -- derived complexes --------------------------------------------------------

def invariant_boundary(s: EquivariantMorseSystem, *,
                       check_valid: bool = True) -> GradedComplex:
    """Boundary on the orbit sums of orientable orbits, in the canonical gauge.

    The boundary of sum(members of an orientable orbit) must vanish at every
    non-orientable point (CancellationFailure otherwise) and must be constant
    on every orbit (InvarianceFailure otherwise); both failures signal
    inconsistent input data.
    """
    _require_valid(s, check_valid)
    gauge = _normalize(s)
    cls = classify(s)
    orientable = [o for o in cls if o.orientable]
    labels = [[o.rep for o in orientable if o.index == k]
              for k in range(s.ambient_dim + 1)]
    pos = {lab: i for level in labels for i, lab in enumerate(level)}
    by_member = {}
    for o in cls:
        for m in o.members:
            by_member[m] = o

    boundaries = []
    for k in range(1, s.ambient_dim + 1):
        rows, cols = labels[k - 1], labels[k]
        m = [[Fraction(0)] * len(cols) for _ in rows]
        for o in orientable:
            if o.index != k:
                continue
            coeff: dict = {}
            for f in s.flows:
                if f.src in o.members:
                    coeff[f.dst] = coeff.get(f.dst, 0) + gauge.eps[f.label]
            for q, val in coeff.items():
                qo = by_member[q]
                if not qo.orientable and val != 0:
                    raise CancellationFailure(
                        f"boundary of the orbit sum of {o.rep!r} has "
                        f"coefficient {val} at non-orientable point {q!r}")
            for qo in cls:
                vals = {coeff.get(q, 0) for q in qo.members}
                if len(vals) != 1:
                    raise InvarianceFailure(
                        f"boundary of the orbit sum of {o.rep!r} is not "
                        f"constant on the orbit of {qo.rep!r}: {sorted(vals)}")
                if qo.orientable and qo.index == k - 1:
                    m[pos[qo.rep]][pos[o.rep]] = Fraction(vals.pop())
        boundaries.append(RationalMatrix(m) if rows and cols
                          else RationalMatrix.zeros(len(rows), len(cols)))

    out = GradedComplex.build(labels, boundaries)
    if check_valid:
        ok, witness = verify_complex(out)
        assert ok, f"invariant boundary fails to square to zero at {witness}"
    return out


def derive_intrinsic(s: EquivariantMorseSystem, *,
                     check_valid: bool = True) -> OrbifoldMorseSystem:
    """Quotient system: orientable orbits become weighted critical points.

    Orientations are first normalized to the canonical gauge; flow orbits
    whose endpoints are both orientable become flow classes with the
    stabilizer order of their least member and its canonical sign.
    """
    _require_valid(s, check_valid)
    gauge = _normalize(s)
    cls = classify(s)
    crit = [IntrinsicPoint(label=o.rep, index=o.index, iso_order=o.iso_order,
                           orientable=True)
            for o in cls if o.orientable]
    flows = []
    for members in gauge.flow_orbits:
        src_orb, dst_orb = _flow_orbit_endpoints(s, members)
        if not (src_orb.orientable and dst_orb.orientable):
            continue
        rep = members[0]
        iso = stabilizer(s.flow_action, rep).order
        flows.append(IntrinsicFlow(label=rep, src=src_orb.rep,
                                   dst=dst_orb.rep, iso_order=iso,
                                   sign=gauge.eps[rep]))
    return OrbifoldMorseSystem(ambient_dim=s.ambient_dim,
                               crit_points=crit, flows=flows)


def discarded_orbits(s: EquivariantMorseSystem) -> tuple[CriticalOrbit, ...]:
    """Non-orientable orbits, the ones carrying no quotient generator."""
    return tuple(o for o in classify(s) if not o.orientable)


# -- broken flow weights ------------------------------------------------------

def broken_weight(s: EquivariantMorseSystem, p: str, q: str, r: str, *,
                  check_valid: bool = True) -> Fraction:
    """Weight of the broken flows through the middle orbit, canonical gauge.

    Arguments name the three orbits by any member.  With a fixed
    representative m of the middle orbit, the weight is

        (1 / iso(m)) * sum(eps over flows top -> m) * sum(eps over m -> bottom)

    The result is recomputed at every representative and asserted equal.
    When the middle orbit is orientable the result is asserted to match the
    flow-class formula sum nu(a) nu(b) / iso(middle); when it is not, the
    result is asserted to be zero.
    """
    _require_valid(s, check_valid)
    P, Q, R = orbit_of(s, p), orbit_of(s, q), orbit_of(s, r)
    if not (P.index == Q.index + 1 == R.index + 2):
        raise IndexMismatch(
            f"orbit indices {P.index}, {Q.index}, {R.index} are not consecutive")
    if not P.orientable or not R.orientable:
        raise IndexMismatch("top and bottom orbits must be orientable")
    gauge = _normalize(s)

    results = []
    for m in Q.members:
        into = sum(gauge.eps[f.label] for f in s.flows
                   if f.dst == m and f.src in P.members)
        outof = sum(gauge.eps[f.label] for f in s.flows
                    if f.src == m and f.dst in R.members)
        results.append(Fraction(into * outof, Q.iso_order))
    assert len(set(results)) == 1, \
        f"broken weight depends on the representative: {results}"
    w = results[0]

    if Q.orientable:
        nu_in, nu_out = Fraction(0), Fraction(0)
        for members in gauge.flow_orbits:
            src_orb, dst_orb = _flow_orbit_endpoints(s, members)
            iso = stabilizer(s.flow_action, members[0]).order
            nu = Fraction(gauge.eps[members[0]] * Q.iso_order, iso)
            if src_orb.rep == P.rep and dst_orb.rep == Q.rep:
                nu_in += nu
            elif src_orb.rep == Q.rep and dst_orb.rep == R.rep:
                nu_out += nu
        expected = nu_in * nu_out / Q.iso_order
        assert w == expected, (w, expected)
    else:
        assert w == 0, f"weight through non-orientable orbit is {w}, not 0"
    return w


def admissible_triples(s: EquivariantMorseSystem):
    """All (top, middle, bottom) orbit triples broken_weight accepts."""
    cls = classify(s)
    out = []
    for P in cls:
        if not P.orientable:
            continue
        for R in cls:
            if not R.orientable or R.index != P.index - 2:
                continue
            for Q in cls:
                if Q.index == P.index - 1:
                    out.append((P, Q, R))
    return out
