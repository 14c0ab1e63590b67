"""Exact combinatorics of toric GIT data.

A ``GitData`` is a torus rank r and m integer characters (rows of length r).
On top of it: anticone sets for a stability condition, chamber comparison,
wall detection and classification, rational-class enumeration with sector
profiles and ages, and three derived GIT constructions (blow-up, local
model, projective bundle).

All arithmetic is exact (ints and Fractions).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .linalg import Fraction as Frac  # noqa: F401  (re-export convenience)
from .linalg import frac, fracvec


class GitError(ValueError):
    pass


class InfeasibleStability(GitError):
    """The stability condition is outside the nonnegative span."""


class NotAdjacent(GitError):
    """No single separating wall between the two chambers."""


class Degenerate(GitError):
    """Wall normal not unique up to scale, or degenerate case analysis."""


class UnboundedEnumeration(GitError):
    """The requested class box is infinite."""


@dataclass(frozen=True)
class GitData:
    """Torus rank, character rows, and optional labels."""

    rank: int
    chars: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise GitError("rank must be positive")
        chars = tuple(tuple(int(x) for x in row) for row in self.chars)
        object.__setattr__(self, "chars", chars)
        for row in chars:
            if len(row) != self.rank:
                raise GitError("character length does not match rank")
        if self.names is not None and len(self.names) != len(chars):
            raise GitError("names length does not match character count")

    @property
    def m(self) -> int:
        return len(self.chars)

    def pairing(self, i: int, d: Sequence) -> Fraction:
        """D_i . d for a rational class d (0-based index)."""
        return la.dot(self.chars[i], d)

    def pairings(self, d: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.pairing(i, d) for i in range(self.m))

    def name(self, i: int) -> str:
        return self.names[i] if self.names else f"D{i + 1}"


@dataclass(frozen=True)
class Diagnostics:
    rank_of_chars: int
    full_rank: bool
    degenerate_rows: tuple[int, ...]
    enough_chars: bool
    chamber_exists: bool

    @property
    def valid(self) -> bool:
        return (
            self.full_rank
            and not self.degenerate_rows
            and self.enough_chars
            and self.chamber_exists
        )


def validate(git: GitData) -> Diagnostics:
    """Diagnostic report: rank, zero rows, and full-dimensional chamber test."""
    degenerate = tuple(i for i, row in enumerate(git.chars) if all(x == 0 for x in row))
    r = la.rank([list(row) for row in git.chars])
    enough = git.m >= git.rank
    # a full-dimensional chamber exists iff the characters span the whole
    # space: then a generic stability condition inside the span works
    chamber = r == git.rank and enough
    return Diagnostics(r, r == git.rank, degenerate, enough, chamber)


# ---------------------------------------------------------------------------
# anticones and chambers


@dataclass(frozen=True)
class AnticoneSet:
    """Minimal anticones; the full set is the upward closure."""

    m: int
    minimal: frozenset[frozenset[int]]

    def contains(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return any(mini <= s for mini in self.minimal)

    def all_members(self) -> list[frozenset[int]]:
        """Every anticone, by upward closure (exponential; small m only)."""
        out = []
        universe = range(self.m)
        for k in range(self.m + 1):
            for combo in itertools.combinations(universe, k):
                if self.contains(combo):
                    out.append(frozenset(combo))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, AnticoneSet)
            and self.m == other.m
            and self.minimal == other.minimal
        )

    def __hash__(self):
        return hash((self.m, self.minimal))


def omega_in_span(git: GitData, omega: Sequence) -> bool:
    return la.nonnegative_combination([list(c) for c in git.chars], fracvec(omega))


def strictly_spans(git: GitData, subset: Iterable[int], omega: Sequence) -> bool:
    """Is omega a strictly positive combination of the subset's characters?

    The empty subset spans exactly the zero vector, which matters for
    midpoints of walls through the origin.
    """
    idx = sorted(set(subset))
    vecs = [list(git.chars[i]) for i in idx]
    return la.strict_positive_combination(vecs, fracvec(omega))


def anticones(git: GitData, omega: Sequence) -> AnticoneSet:
    """Minimal subsets I with omega in the strictly positive span of D_I."""
    om = fracvec(omega)
    if len(om) != git.rank:
        raise GitError("stability condition has wrong length")
    if not omega_in_span(git, om):
        raise InfeasibleStability(
            "stability condition lies outside the nonnegative span of the characters"
        )
    minimal: list[frozenset[int]] = []
    for k in range(git.m + 1):
        for combo in itertools.combinations(range(git.m), k):
            s = frozenset(combo)
            if any(mini <= s for mini in minimal):
                continue
            if strictly_spans(git, s, om):
                minimal.append(s)
    return AnticoneSet(git.m, frozenset(minimal))


def extended_set(git: GitData, omega: Sequence) -> frozenset[int]:
    """Indices whose complement fails to be an anticone."""
    om = fracvec(omega)
    out = set()
    for i in range(git.m):
        rest = set(range(git.m)) - {i}
        if not strictly_spans(git, rest, om):
            out.add(i)
    return frozenset(out)


def same_chamber(git: GitData, omega1: Sequence, omega2: Sequence) -> bool:
    return anticones(git, omega1) == anticones(git, omega2)


# ---------------------------------------------------------------------------
# walls


class WallType(Enum):
    I = "I"
    II_REMOVE_RAY = "II_remove_ray"
    II_ADD_RAY = "II_add_ray"
    III = "III"


@dataclass(frozen=True)
class WallCrossing:
    e: tuple[int, ...]
    m_plus: frozenset[int]
    m_minus: frozenset[int]
    m_zero: frozenset[int]
    s_plus: frozenset[int]
    s_minus: frozenset[int]
    wall_type: WallType
    crepancy: int
    omega_plus: tuple[Fraction, ...]
    omega_minus: tuple[Fraction, ...]
    omega_mid: tuple[Fraction, ...]

    @property
    def s_zero(self) -> frozenset[int]:
        return self.s_plus & self.s_minus

    @property
    def crepant(self) -> bool:
        return self.crepancy == 0


def _candidate_normals(git: GitData, omega_mid: Sequence) -> list[tuple[int, ...]]:
    """Primitive normals of hyperplanes spanned by character subsets through
    the midpoint."""
    r = git.rank
    if r == 1:
        return [(1,)]
    cands: set[tuple[int, ...]] = set()
    for combo in itertools.combinations(range(git.m), r - 1):
        rows = [list(git.chars[i]) for i in combo]
        if la.rank(rows) != r - 1:
            continue
        kernel = la.integer_kernel(rows)
        if len(kernel) != 1:
            continue
        e = la.primitive(kernel[0])
        # sign-normalize for dedup; orientation fixed later
        first = next(x for x in e if x != 0)
        if first < 0:
            e = tuple(-x for x in e)
        cands.add(e)
    return sorted(cands)


def _reconstruct_membership(
    in_a0, m_plus: frozenset[int], m_minus: frozenset[int], subset: frozenset[int]
) -> bool:
    """Anticone membership on one side of a wall, reconstructed from
    midpoint membership `in_a0` and the positive/negative index sets (here
    the plus side; swap the M arguments for the minus side)."""
    if subset & m_minus:
        # thick: must already hold at the midpoint and touch both sides
        return bool(subset & m_plus) and in_a0(subset)
    if subset & m_plus:
        return in_a0(subset - m_plus)
    return False


def classify_wall(git: GitData, omega_plus: Sequence, omega_minus: Sequence) -> WallCrossing:
    """Identify and classify the single wall separating two chambers.

    The midpoint of the two stability conditions must lie on the wall (in
    the relative interior of the shared facet); inputs whose chambers are
    not adjacent across one wall are rejected.
    """
    wp = fracvec(omega_plus)
    wm = fracvec(omega_minus)
    a_plus = anticones(git, wp)
    a_minus = anticones(git, wm)
    if a_plus == a_minus:
        raise NotAdjacent("both stability conditions lie in the same chamber")
    mid = tuple((a + b) / 2 for a, b in zip(wp, wm))
    if not omega_in_span(git, mid):
        raise NotAdjacent("midpoint leaves the nonnegative span")

    def membership_tester(omega):
        cache: dict[frozenset[int], bool] = {}

        def test(subset: frozenset[int]) -> bool:
            if subset not in cache:
                cache[subset] = strictly_spans(git, subset, omega)
            return cache[subset]

        return test

    in_plus = membership_tester(wp)
    in_minus = membership_tester(wm)
    in_mid = membership_tester(mid)

    matches = []
    for e in _candidate_normals(git, mid):
        pe = la.dot(wp, e)
        me = la.dot(wm, e)
        if pe == 0 or me == 0:
            continue
        if pe < 0:
            e = tuple(-x for x in e)
            pe, me = -pe, -me
        if me > 0:
            continue
        if la.dot(mid, e) != 0:
            continue
        m_pl = frozenset(i for i in range(git.m) if git.pairing(i, e) > 0)
        m_mi = frozenset(i for i in range(git.m) if git.pairing(i, e) < 0)
        if not m_pl or not m_mi:
            continue
        # validate against the chamber structure on both sides
        ok = True
        if git.m <= 12:
            for k in range(git.m + 1):
                for combo in itertools.combinations(range(git.m), k):
                    s = frozenset(combo)
                    if _reconstruct_membership(in_mid, m_pl, m_mi, s) != in_plus(s):
                        ok = False
                        break
                    if _reconstruct_membership(in_mid, m_mi, m_pl, s) != in_minus(s):
                        ok = False
                        break
                if not ok:
                    break
        else:
            # spot-check the minimal anticones only
            ok = all(
                _reconstruct_membership(in_mid, m_pl, m_mi, s) for s in a_plus.minimal
            ) and all(
                _reconstruct_membership(in_mid, m_mi, m_pl, s) for s in a_minus.minimal
            )
        if ok:
            matches.append((e, m_pl, m_mi))

    if not matches:
        raise NotAdjacent("no single separating wall found between the chambers")
    normals = {m[0] for m in matches}
    if len(normals) > 1:
        raise Degenerate(f"wall normal not unique: {sorted(normals)}")
    e, m_pl, m_mi = matches[0]
    m_ze = frozenset(range(git.m)) - m_pl - m_mi
    s_pl = extended_set(git, wp)
    s_mi = extended_set(git, wm)
    s0 = s_pl & s_mi

    if len(m_pl) >= 2 and len(m_mi) >= 2:
        wtype = WallType.I
        if s_pl != s_mi:
            raise Degenerate("type I wall with differing extended data")
    elif len(m_pl) >= 2 and len(m_mi) == 1:
        wtype = WallType.II_REMOVE_RAY
        if s_mi != s_pl | m_mi:
            raise Degenerate("type II wall with inconsistent extended data")
    elif len(m_pl) == 1 and len(m_mi) >= 2:
        wtype = WallType.II_ADD_RAY
        if s_pl != s_mi | m_pl:
            raise Degenerate("type II wall with inconsistent extended data")
    else:
        wtype = WallType.III
        if s_pl != s0 | m_pl or s_mi != s0 | m_mi:
            raise Degenerate("type III wall with inconsistent extended data")
        if not s0 <= m_ze:
            raise Degenerate("type III wall with extended data off the wall")

    crep = sum(git.pairing(i, e) for i in range(git.m))
    assert crep.denominator == 1
    return WallCrossing(
        e=tuple(e),
        m_plus=m_pl,
        m_minus=m_mi,
        m_zero=m_ze,
        s_plus=s_pl,
        s_minus=s_mi,
        wall_type=wtype,
        crepancy=int(crep),
        omega_plus=wp,
        omega_minus=wm,
        omega_mid=mid,
    )


# ---------------------------------------------------------------------------
# rational classes, sectors, ages


@dataclass(frozen=True)
class CurveClassSample:
    d: tuple[Fraction, ...]
    pairings: tuple[Fraction, ...]
    sector: tuple[Fraction, ...]
    age: Fraction
    exponents: tuple[Fraction, ...]  # p_a . d for the requested basis

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in self.sector) and all(
            s == 0 for s in self.sector
        )


def _fractional(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def make_sample(git: GitData, d: Sequence, p_basis: Sequence[Sequence]) -> CurveClassSample:
    dv = fracvec(d)
    pairings = git.pairings(dv)
    sector = tuple(_fractional(x) for x in pairings)
    age = sum(sector, Fraction(0))
    exps = tuple(la.dot(p, dv) for p in p_basis)
    return CurveClassSample(dv, pairings, sector, age, exps)


def in_kset(git: GitData, cones: AnticoneSet, d: Sequence) -> bool:
    integral = {i for i in range(git.m) if git.pairing(i, d).denominator == 1}
    return cones.contains(integral)


def kset_enumerate(
    git: GitData,
    omega: Sequence,
    p_basis: Sequence[Sequence],
    bound,
    lower=0,
) -> list[CurveClassSample]:
    """All classes d with integral pairings on some anticone and
    lower <= p_a . d <= bound for every basis element p_a.

    The basis must be linearly independent (otherwise the box is infinite).
    """
    bound = frac(bound)
    lower = frac(lower)
    cones = anticones(git, omega)
    r = git.rank
    pmat = [[frac(x) for x in p] for p in p_basis]
    if len(pmat) != r or la.rank(pmat) != r:
        raise UnboundedEnumeration("class box is infinite: basis does not span")
    pinv = la.invert(pmat)

    # candidate superlattices: duals of the subgroups spanned by each
    # minimal anticone (full rank since chambers are full-dimensional)
    seen: set[tuple[Fraction, ...]] = set()
    out: list[CurveClassSample] = []
    corners = list(itertools.product([lower, bound], repeat=r))
    for mini in sorted(cones.minimal, key=sorted):
        rows = [list(git.chars[i]) for i in sorted(mini)]
        if la.rank(rows) != r:
            raise Degenerate(
                "minimal anticone does not span; chamber is not full-dimensional"
            )
        h, _u = la.hermite_form(rows)
        h = [row for row in h if any(x != 0 for x in row)]
        hinv = la.invert(h)  # columns span the dual lattice
        # bounds for k with d = hinv . k inside the box: map box corners
        # through h . pinv and take the bounding box (convexity)
        kmin = [None] * r
        kmax = [None] * r
        for corner in corners:
            dvert = [
                sum(pinv[i][j] * corner[j] for j in range(r)) for i in range(r)
            ]
            kvert = [sum(frac(h[i][j]) * dvert[j] for j in range(r)) for i in range(r)]
            for i in range(r):
                if kmin[i] is None or kvert[i] < kmin[i]:
                    kmin[i] = kvert[i]
                if kmax[i] is None or kvert[i] > kmax[i]:
                    kmax[i] = kvert[i]
        ranges = []
        for i in range(r):
            lo = -(-kmin[i].numerator // kmin[i].denominator)  # ceil
            hi = kmax[i].numerator // kmax[i].denominator  # floor
            ranges.append(range(lo, hi + 1))
        for k in itertools.product(*ranges):
            d = tuple(
                sum(hinv[i][j] * k[j] for j in range(r)) for i in range(r)
            )
            if d in seen:
                continue
            exps = [la.dot(p, d) for p in pmat]
            if any(x < lower or x > bound for x in exps):
                continue
            if not in_kset(git, cones, d):
                continue
            seen.add(d)
            out.append(make_sample(git, d, pmat))
    out.sort(key=lambda s: (sum(s.exponents), s.exponents, s.d))
    return out


# ---------------------------------------------------------------------------
# derived GIT data


@dataclass(frozen=True)
class DerivedGit:
    kind: str
    git: GitData
    stability: tuple[Fraction, ...]
    extra: dict = field(default_factory=dict, compare=False)


def blowup_git(git: GitData, wall: WallCrossing, epsilon=Fraction(1, 1000)) -> DerivedGit:
    """Rank r+1 GIT data resolving both sides of a wall by one extra ray.

    New characters: D_i + 0 on the nonpositive side, D_i + (-D_i.e) on the
    positive side, and an exceptional character E = (0,...,0,1).  Stability
    is (midpoint, -epsilon).  The exceptional lattice relation
    b_{m+1} = sum_{i in M+} (D_i.e) b_i is verified in the cokernel.
    """
    if not wall.m_plus or not wall.m_minus:
        raise Degenerate("wall must have nonempty positive and negative parts")
    eps = frac(epsilon)
    if eps <= 0:
        raise GitError("epsilon must be positive")
    new_chars = []
    for i, row in enumerate(git.chars):
        pe = git.pairing(i, wall.e)
        extra = -int(pe) if pe > 0 else 0
        new_chars.append(tuple(row) + (extra,))
    new_chars.append(tuple([0] * git.rank) + (1,))
    names = tuple(git.name(i) for i in range(git.m)) + ("E",)
    out = GitData(git.rank + 1, tuple(new_chars), names)
    stability = tuple(list(wall.omega_mid) + [-eps])

    # verify the exceptional relation in the cokernel of the inclusion
    # L + Z -> Z^(m+1) given by the new character rows (columns of M below)
    mat = [list(new_chars[i]) for i in range(len(new_chars))]
    target = [0] * (git.m + 1)
    target[git.m] = 1
    for i in sorted(wall.m_plus):
        target[i] -= int(git.pairing(i, wall.e))
    # membership of e_{m+1} - sum (D_i.e) e_i in the column span over Z
    if not la.in_image(mat, target):
        raise Degenerate("exceptional lattice relation failed in the cokernel")
    return DerivedGit(
        kind="blowup",
        git=out,
        stability=stability,
        extra={"exceptional_index": git.m, "wall": wall},
    )


def local_model_git(
    git: GitData, wall: WallCrossing, divisor_indices: Iterable[int] | None = None
) -> DerivedGit:
    """Append the character -D, D = sum of the chosen divisor characters.

    Defaults to the union of the positive and negative wall sets.  The
    induced crossing of the same wall is re-classified; a crepant input
    stays crepant of the same type and a discrepant resolution becomes a
    flop (both verified).
    """
    idx = sorted(set(divisor_indices)) if divisor_indices is not None else sorted(
        wall.m_plus | wall.m_minus
    )
    if not idx:
        raise GitError("empty divisor index set")
    dsum = [0] * git.rank
    for i in idx:
        for j in range(git.rank):
            dsum[j] += git.chars[i][j]
    # a zero divisor sum is legitimate for crepant inputs (trivial bundle)
    last = tuple(-x for x in dsum)
    names = tuple(git.name(i) for i in range(git.m)) + ("-D",)
    out = GitData(git.rank, git.chars + (last,), names)

    induced = classify_wall(out, wall.omega_plus, wall.omega_minus)
    if wall.crepant:
        if not induced.crepant or induced.wall_type != wall.wall_type:
            raise Degenerate("induced crossing should be crepant of the same type")
    elif wall.wall_type == WallType.II_REMOVE_RAY and set(idx) == set(
        wall.m_plus | wall.m_minus
    ):
        if not (induced.crepant and induced.wall_type == WallType.I):
            raise Degenerate("induced crossing of a discrepant resolution should be a flop")
    return DerivedGit(
        kind="local_model",
        git=out,
        stability=wall.omega_plus,
        extra={"divisor_indices": tuple(idx), "induced_wall": induced, "wall": wall},
    )


def proj_bundle_git(
    git: GitData,
    wall: WallCrossing,
    divisor_indices: Iterable[int] | None = None,
    epsilon=Fraction(1, 1000),
) -> DerivedGit:
    """Compactified local model: rank r+1 data with characters
    (D_i, 0), (-D, 1), (0, 1) and stability (omega, epsilon).

    Returns the two wall normals.  For a crepant input they coincide (one
    crepant crossing); for a discrepant resolution the first crossing is a
    flop and the second a discrepant resolution (both verified).
    """
    eps = frac(epsilon)
    if eps <= 0:
        raise GitError("epsilon must be positive")
    idx = sorted(set(divisor_indices)) if divisor_indices is not None else sorted(
        wall.m_plus | wall.m_minus
    )
    dsum = [0] * git.rank
    for i in idx:
        for j in range(git.rank):
            dsum[j] += git.chars[i][j]
    chars = [tuple(row) + (0,) for row in git.chars]
    chars.append(tuple(-x for x in dsum) + (1,))
    chars.append(tuple([0] * git.rank) + (1,))
    names = tuple(git.name(i) for i in range(git.m)) + ("-D|1", "0|1")
    out = GitData(git.rank + 1, tuple(chars), names)

    d_dot_e = sum(git.pairing(i, wall.e) for i in idx)
    assert d_dot_e.denominator == 1
    d_dot_e = int(d_dot_e)
    e1 = tuple(wall.e) + (0,)
    e2 = tuple(wall.e) + (d_dot_e,)

    om_plus = tuple(list(wall.omega_plus) + [eps])
    om_minus = tuple(list(wall.omega_minus) + [eps])

    extra = {"wall_normals": (e1, e2), "wall": wall, "divisor_indices": tuple(idx)}
    if e1 == e2:
        crossing = classify_wall(out, om_plus, om_minus)
        if not crossing.crepant:
            raise Degenerate("single-wall case should be crepant")
        extra["crossings"] = (crossing,)
    else:
        # build an intermediate point between the two parallel crossings:
        # pairings with e1 pass 0 first, with e2 pass 0 at -eps * (D.e)
        lam_target = -eps * d_dot_e / 2
        pe, me = la.dot(wall.omega_plus, wall.e), la.dot(wall.omega_minus, wall.e)
        lam = (pe - lam_target) / (pe - me)
        om_lam = tuple(
            (1 - lam) * a + lam * b for a, b in zip(wall.omega_plus, wall.omega_minus)
        )
        w_mid = tuple(list(om_lam) + [eps])
        # scale within the (conical) intermediate chamber so each midpoint
        # lands on its wall
        t1 = -la.dot(om_plus, e1) / la.dot(w_mid, e1)
        v1 = tuple(t1 * x for x in w_mid)
        first = classify_wall(out, om_plus, v1)
        t2 = -la.dot(om_minus, e2) / la.dot(w_mid, e2)
        v2 = tuple(t2 * x for x in w_mid)
        second = classify_wall(out, v2, om_minus)
        if not first.crepant:
            raise Degenerate("first crossing should be crepant")
        if not wall.crepant:
            if first.wall_type != WallType.I:
                raise Degenerate("first crossing of a discrepant resolution should be a flop")
            if second.crepant or second.wall_type != WallType.II_REMOVE_RAY:
                raise Degenerate("second crossing should be a discrepant resolution")
        extra["crossings"] = (first, second)
    return DerivedGit(kind="proj_bundle", git=out, stability=om_plus, extra=extra)


# ---------------------------------------------------------------------------
# bases and the change of variables across a wall


class InvalidBasis(GitError):
    pass


@dataclass(frozen=True)
class BasisChoice:
    p_plus: tuple[tuple[Fraction, ...], ...]
    p_minus: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "p_plus", tuple(fracvec(p) for p in self.p_plus)
        )
        object.__setattr__(
            self, "p_minus", tuple(fracvec(p) for p in self.p_minus)
        )


@dataclass(frozen=True)
class ChangeOfVariables:
    c: Fraction
    c_list: tuple[Fraction, ...]
    basis: BasisChoice

    def minus_exponents_in_plus_variables(self, exps_minus: Sequence) -> tuple:
        """Rewrite a monomial prod yt_i^{b_i} in the plus variables.

        yt_i = y_i * y_r^{c_i} for i < r and yt_r = y_r^{-c}; the result is
        the exponent vector in (y_1, ..., y_r).
        """
        b = fracvec(exps_minus)
        r = len(b)
        out = list(b[:-1]) + [Fraction(0)]
        out[r - 1] = sum(self.c_list[i] * b[i] for i in range(r - 1)) - self.c * b[r - 1]
        return tuple(out)


def _in_closed_chamber(git: GitData, cones: AnticoneSet, p: Sequence) -> bool:
    pv = fracvec(p)
    return all(
        la.nonnegative_combination([list(git.chars[i]) for i in sorted(mini)], pv)
        for mini in cones.minimal
    )


def change_of_variables(
    git: GitData, wall: WallCrossing, basis: BasisChoice, check_bound: int = 2
) -> ChangeOfVariables:
    """Validate a basis pair across a wall and compute (c, c_i).

    Requirements: p_i^+ = p_i^- for i < r and both lie on the wall; each
    side's vectors lie in the closed extended ample cone of that side; the
    last pair has c = -(p_r^+ . e)/(p_r^- . e) > 0.  The induced monomial
    map is verified against the exponent systems on a box of test classes.
    """
    r = git.rank
    if all(x == 0 for x in wall.e):
        raise InvalidBasis("wall normal is zero")
    if len(basis.p_plus) != r or len(basis.p_minus) != r:
        raise InvalidBasis("need r basis vectors per side")
    for i in range(r - 1):
        if basis.p_plus[i] != basis.p_minus[i]:
            raise InvalidBasis(f"shared basis vectors differ at position {i}")
        if la.dot(basis.p_plus[i], wall.e) != 0:
            raise InvalidBasis(f"shared basis vector {i} is not on the wall")
    cones_plus = anticones(git, wall.omega_plus)
    cones_minus = anticones(git, wall.omega_minus)
    for p in basis.p_plus:
        if not _in_closed_chamber(git, cones_plus, p):
            raise InvalidBasis(f"{p} is outside the closed plus-side chamber")
    for p in basis.p_minus:
        if not _in_closed_chamber(git, cones_minus, p):
            raise InvalidBasis(f"{p} is outside the closed minus-side chamber")
    pe = la.dot(basis.p_plus[r - 1], wall.e)
    me = la.dot(basis.p_minus[r - 1], wall.e)
    if me == 0 or pe == 0:
        raise InvalidBasis("transverse basis vectors must pair nonzero with the wall normal")
    c = -pe / me
    if c <= 0:
        raise InvalidBasis("c must be positive")
    # p_r^+ = sum_i c_i p_i^+ - c p_r^-, solved exactly
    cols = [list(basis.p_plus[i]) for i in range(r - 1)]
    rhs = [
        basis.p_plus[r - 1][j] + c * basis.p_minus[r - 1][j] for j in range(r)
    ]
    if r == 1:
        c_list: tuple[Fraction, ...] = ()
        if any(x != 0 for x in rhs):
            raise InvalidBasis("basis relation unsolvable")
    else:
        mat = [[cols[i][j] for i in range(r - 1)] for j in range(r)]
        sol, _null = la.solve(mat, rhs)
        if sol is None:
            raise InvalidBasis("basis relation unsolvable")
        c_list = tuple(sol)
    cov = ChangeOfVariables(c=c, c_list=c_list, basis=basis)

    # exponent-matching audit on a small box of integer classes
    for d in itertools.product(range(-check_bound, check_bound + 1), repeat=r):
        plus_exps = tuple(la.dot(p, d) for p in basis.p_plus)
        minus_exps = tuple(la.dot(p, d) for p in basis.p_minus)
        if cov.minus_exponents_in_plus_variables(minus_exps) != plus_exps:
            raise InvalidBasis("exponent systems disagree under the change of variables")
    return cov
