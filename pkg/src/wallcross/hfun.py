"""Relative hypergeometric series for toric pairs and complete intersections.

Builds truncated H-functions and I-functions attached to GIT data with a
chosen set of relative divisor components and optional bundle factors,
the Gamma-class twist relating them, and the coefficient-identification
check across a wall.

Coefficients are exact ``gammaring.Poly`` values: truncated polynomials in
divisor-class symbols over Q[g, z2, ...] with per-term powers of the formal
units z and tau (tau stands for 2*pi*i).  A symbol power k produced by an
H-coefficient carries tau^(-k), i.e. the stored symbol means class/tau.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import gitdata as gd
from . import linalg as la
from .gammaring import Poly, Scalar, gamma_one_plus, gamma_shift, gamma_shift_recip
from .linalg import frac, fracvec


class SeriesError(ValueError):
    pass


class TwistedSectorError(SeriesError):
    """Exact coefficients for twisted sectors are out of scope."""


class NegativeBundleDegree(SeriesError):
    pass


Combo = Mapping[str, object]  # linear combination of symbols, name -> rational


@dataclass(frozen=True)
class BundleSpec:
    """A line-bundle factor: its character row and its class."""

    char: tuple[int, ...]
    cls: tuple[tuple[str, Fraction], ...]
    relative: bool = False

    @staticmethod
    def make(char: Sequence[int], cls: Combo, relative: bool = False) -> "BundleSpec":
        return BundleSpec(
            tuple(int(x) for x in char),
            tuple(sorted((k, frac(v)) for k, v in cls.items())),
            relative,
        )

    def combo(self) -> dict[str, Fraction]:
        return dict(self.cls)


@dataclass(frozen=True)
class PairData:
    """GIT data with stability, divisor classes, and the relative structure.

    `char_classes[i]` is the divisor class of the i-th character as a linear
    combination of `symbols` (extended characters get the zero class).
    `relative` lists the toric relative components; `bundles` hold complete
    intersection and relative bundle factors; `concave` holds nonpositive
    twist bundles for local models.  `p_basis` fixes the exponent system and
    `p_classes` its divisor classes (the prefactor is sum p_a log y_a).
    """

    git: gd.GitData
    omega: tuple[Fraction, ...]
    symbols: tuple[str, ...]
    char_classes: tuple[tuple[tuple[str, Fraction], ...], ...]
    relative: frozenset[int]
    p_basis: tuple[tuple[Fraction, ...], ...]
    p_classes: tuple[tuple[tuple[str, Fraction], ...], ...]
    cutoff: int
    bundles: tuple[BundleSpec, ...] = ()
    concave: tuple[BundleSpec, ...] = ()
    extended: frozenset[int] = frozenset()

    @staticmethod
    def make(
        git: gd.GitData,
        omega: Sequence,
        symbols: Sequence[str],
        char_classes: Sequence[Combo],
        p_basis: Sequence[Sequence],
        p_classes: Sequence[Combo],
        relative: Iterable[int] = (),
        cutoff: int | None = None,
        bundles: Sequence[BundleSpec] = (),
        concave: Sequence[BundleSpec] = (),
        extended: Iterable[int] | None = None,
    ) -> "PairData":
        if cutoff is None:
            cutoff = git.m - git.rank
        ext = (
            frozenset(extended)
            if extended is not None
            else gd.extended_set(git, fracvec(omega))
        )
        rel = frozenset(relative)
        if rel & ext:
            raise SeriesError("relative components cannot be extended characters")
        if len(char_classes) != git.m:
            raise SeriesError("need one class per character")
        return PairData(
            git=git,
            omega=fracvec(omega),
            symbols=tuple(symbols),
            char_classes=tuple(
                tuple(sorted((k, frac(v)) for k, v in c.items())) for c in char_classes
            ),
            relative=rel,
            p_basis=tuple(fracvec(p) for p in p_basis),
            p_classes=tuple(
                tuple(sorted((k, frac(v)) for k, v in c.items())) for c in p_classes
            ),
            cutoff=int(cutoff),
            bundles=tuple(bundles),
            concave=tuple(concave),
            extended=ext,
        )

    def with_relative(self, relative: Iterable[int]) -> "PairData":
        return replace(self, relative=frozenset(relative))

    # -- class helpers -------------------------------------------------------

    def class_poly(self, i: int) -> Poly:
        return Poly.from_combo(dict(self.char_classes[i]), self.symbols, self.cutoff)

    def combo_poly(self, combo: Combo) -> Poly:
        return Poly.from_combo(dict(combo), self.symbols, self.cutoff)

    def gamma_argument(self, combo: Combo) -> Poly:
        """class / tau, the natural argument of H-coefficient Gamma factors."""
        return self.combo_poly(combo).shift_units(tau_pow=-1)

    @property
    def dim(self) -> int:
        return self.git.m - self.git.rank

    def gamma_indices(self) -> list[int]:
        """Characters contributing reciprocal Gamma factors: all non-relative."""
        return [i for i in range(self.git.m) if i not in self.relative]

    def rho_combo(self) -> dict[str, Fraction]:
        """Class of the log-tangent first Chern class: sum of the
        non-relative character classes (extended ones carry class zero)."""
        out: dict[str, Fraction] = {}
        for i in self.gamma_indices():
            for name, coeff in self.char_classes[i]:
                out[name] = out.get(name, Fraction(0)) + coeff
        return {k: v for k, v in out.items() if v != 0}

    def rho_pairing(self, d: Sequence) -> Fraction:
        return sum(
            (self.git.pairing(i, d) for i in self.gamma_indices()), Fraction(0)
        )


@dataclass(frozen=True)
class BracketLabel:
    sector: tuple[Fraction, ...]
    tangency: tuple[Fraction, ...]


@dataclass(frozen=True)
class HEntry:
    sample: gd.CurveClassSample
    label: BracketLabel
    coeff: Poly

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return self.sample.exponents


@dataclass(frozen=True)
class HSeries:
    pair: PairData
    bound: Fraction
    entries: tuple[HEntry, ...]
    kind: str  # "H" or "I"

    def prefactor(self) -> tuple[tuple[tuple[str, Fraction], ...], ...]:
        """The linear form sum_a p_a log y_a, recorded symbolically."""
        return self.pair.p_classes

    def entry_at(self, d: Sequence) -> HEntry | None:
        dv = fracvec(d)
        for e in self.entries:
            if e.sample.d == dv:
                return e
        return None

    def entry_by_exponents(self, exps: Sequence) -> HEntry | None:
        ev = fracvec(exps)
        for e in self.entries:
            if e.exponents == ev:
                return e
        return None

    def to_json(self) -> list[dict]:
        out = []
        for e in self.entries:
            out.append(
                {
                    "d": [la.format_frac(x) for x in e.sample.d],
                    "exponents": [la.format_frac(x) for x in e.exponents],
                    "sector": [la.format_frac(x) for x in e.label.sector],
                    "tangency": [la.format_frac(x) for x in e.label.tangency],
                    "age": la.format_frac(e.sample.age),
                    "coeff": e.coeff.to_json(),
                }
            )
        return out


def _require_integer(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise TwistedSectorError(
            f"{what} is not an integer; twisted-sector coefficients are not "
            "representable in the exact scalar ring"
        )
    return int(x)


def _label_for(pair: PairData, sample: gd.CurveClassSample) -> BracketLabel:
    tangency = [pair.git.pairing(i, sample.d) for i in sorted(pair.relative)]
    for b in pair.bundles:
        if b.relative:
            tangency.append(la.dot(b.char, sample.d))
    return BracketLabel(sector=sample.sector, tangency=tuple(tangency))


# ---------------------------------------------------------------------------
# H-series


def h_coefficient(pair: PairData, sample: gd.CurveClassSample) -> Poly:
    """Exact H-coefficient at one class: reciprocal Gamma factors for every
    non-relative character and Gamma numerators for every bundle."""
    coeff = Poly.one(pair.symbols, pair.cutoff)
    for i in pair.gamma_indices():
        n = _require_integer(sample.pairings[i], f"pairing of character {i}")
        if i in pair.extended and n < 0:
            # 1/Gamma(1 + n) vanishes at negative integers
            return Poly.zero(pair.symbols, pair.cutoff)
        arg = pair.gamma_argument(dict(pair.char_classes[i]))
        coeff = coeff * gamma_shift_recip(arg, n, pair.cutoff)
    for b in pair.bundles:
        n = _require_integer(la.dot(b.char, sample.d), "bundle degree")
        if n < 0:
            raise NegativeBundleDegree(
                f"bundle pairs negatively ({n}) with an enumerated class"
            )
        arg = pair.gamma_argument(b.combo())
        coeff = coeff * gamma_shift(arg, n, pair.cutoff).poly
    if pair.concave:
        raise SeriesError("concave twists belong to the I-side local series")
    return coeff


def h_series(pair: PairData, bound) -> HSeries:
    """Truncated relative H-function: one entry per enumerated class."""
    samples = gd.kset_enumerate(pair.git, pair.omega, pair.p_basis, bound)
    entries = []
    for s in samples:
        coeff = h_coefficient(pair, s)
        if coeff.is_zero():
            continue
        entries.append(HEntry(s, _label_for(pair, s), coeff))
    return HSeries(pair=pair, bound=frac(bound), entries=tuple(entries), kind="H")


def h_series_ci(pair: PairData, bound) -> HSeries:
    """Complete-intersection variant; requires at least the bundle data.

    With no bundles this is exactly `h_series`.
    """
    return h_series(pair, bound)


def h_series_exchange(pair: PairData, bound) -> HSeries:
    """Exchange variant: at least one bundle must be flagged relative so the
    tangency label carries the bundle pairing."""
    if pair.bundles and not any(b.relative for b in pair.bundles):
        raise SeriesError("exchange configuration needs a relative bundle")
    return h_series(pair, bound)


# ---------------------------------------------------------------------------
# I-series


def _linear_z_factor(pair: PairData, combo: Combo, a: Fraction) -> Poly:
    """The degree-one factor (class + a z)."""
    c = pair.combo_poly(dict(combo))
    return c + Poly.unit(pair.symbols, pair.cutoff, z_pow=1) * frac(a)


def ratio_factor(pair: PairData, combo: Combo, n: Fraction) -> Poly:
    """prod_{a<=0, <a>=<n>} (c+az) / prod_{a<=n, <a>=<n>} (c+az), exactly.

    For n > 0 this is 1/prod_{0<a<=n}; for n < 0 a finite numerator product
    that may contain the bare class (at a = 0) or the bare z-multiples.
    """
    n = frac(n)
    fracpart = n - (n.numerator // n.denominator)
    one = Poly.one(pair.symbols, pair.cutoff)
    out = one
    if n > 0:
        a = n
        while a > 0:
            out = out * _linear_z_factor(pair, combo, a).inverse()
            a -= 1
        return out
    if n < 0:
        a = fracpart - 1 if fracpart > 0 else Fraction(0)
        while a > n:
            out = out * _linear_z_factor(pair, combo, a)
            a -= 1
        return out
    return one


def i_coefficient(pair: PairData, sample: gd.CurveClassSample) -> Poly:
    """Exact I-coefficient at one class, including the global factor z."""
    coeff = Poly.unit(pair.symbols, pair.cutoff, z_pow=1)
    for i in pair.gamma_indices():
        n = sample.pairings[i]
        coeff = coeff * ratio_factor(pair, dict(pair.char_classes[i]), n)
        if coeff.is_zero():
            return coeff
    for b in pair.bundles:
        n = _require_integer(la.dot(b.char, sample.d), "bundle degree")
        if n < 0:
            raise NegativeBundleDegree(
                f"bundle pairs negatively ({n}) with an enumerated class"
            )
        prod = Poly.one(pair.symbols, pair.cutoff)
        for a in range(1, n + 1):
            prod = prod * _linear_z_factor(pair, b.combo(), Fraction(a))
        coeff = coeff * prod
    for b in pair.concave:
        n = la.dot(b.char, sample.d)
        if n > 0:
            raise SeriesError("concave bundle pairs positively with a class")
        coeff = coeff * ratio_factor(pair, b.combo(), n)
    for i in sorted(pair.relative):
        n = pair.git.pairing(i, sample.d)
        if n > 0:
            coeff = coeff * _linear_z_factor(pair, dict(pair.char_classes[i]), n).inverse()
    for b in pair.bundles:
        if b.relative:
            n = la.dot(b.char, sample.d)
            if n > 0:
                coeff = coeff * _linear_z_factor(pair, b.combo(), n).inverse()
    return coeff


def i_series(pair: PairData, bound) -> HSeries:
    samples = gd.kset_enumerate(pair.git, pair.omega, pair.p_basis, bound)
    entries = []
    for s in samples:
        coeff = i_coefficient(pair, s)
        if coeff.is_zero():
            continue
        entries.append(HEntry(s, _label_for(pair, s), coeff))
    return HSeries(pair=pair, bound=frac(bound), entries=tuple(entries), kind="I")


def local_i_series(
    git: gd.GitData,
    omega: Sequence,
    symbols: Sequence[str],
    char_classes: Sequence[Combo],
    p_basis: Sequence[Sequence],
    p_classes: Sequence[Combo],
    lefschetz: Sequence[BundleSpec] = (),
    concave: Sequence[BundleSpec] = (),
    bound=0,
    cutoff: int | None = None,
) -> HSeries:
    """Absolute local-model I-series: toric factors, Lefschetz numerators,
    and concave (nonpositive) bundle twists; no relative components."""
    pair = PairData.make(
        git,
        omega,
        symbols,
        char_classes,
        p_basis,
        p_classes,
        relative=(),
        cutoff=cutoff,
        bundles=tuple(lefschetz),
        concave=tuple(concave),
    )
    return i_series(pair, bound)


# ---------------------------------------------------------------------------
# extended I-series for a smooth total divisor


@dataclass(frozen=True)
class ExtendedEntry:
    sample: gd.CurveClassSample
    orders: tuple[int, ...]  # one k per extension datum
    branch: str  # "pos" or "neg"
    tangency: Fraction  # D.d - sum k_i a_i
    coeff: Poly


def extended_i_series(
    pair: PairData, extension: Sequence[int], bound, order_bound: int | None = None
) -> tuple[ExtendedEntry, ...]:
    """Extended I-series for the smooth divisor of class D = sum of the
    relative components, with extension orders a_1..a_s (positive integers).

    Terms are indexed by (class d, multidegree k); the branch with
    sum k_i a_i < D.d carries the extra reciprocal factor
    (D + (D.d - sum k_i a_i) z); x-monomials are recorded through `orders`
    and the factor 1/(z^{sum k} prod k_i!) is part of the coefficient.
    """
    ext = [int(a) for a in extension]
    if any(a <= 0 for a in ext):
        raise SeriesError("extension orders must be positive integers")
    kb = int(order_bound) if order_bound is not None else int(frac(bound))
    d_combo: dict[str, Fraction] = {}
    d_char = [0] * pair.git.rank
    for i in sorted(pair.relative):
        for name, coeff in pair.char_classes[i]:
            d_combo[name] = d_combo.get(name, Fraction(0)) + coeff
        for j in range(pair.git.rank):
            d_char[j] += pair.git.chars[i][j]
    samples = gd.kset_enumerate(pair.git, pair.omega, pair.p_basis, bound)
    out = []
    for s in samples:
        dd = _require_integer(la.dot(d_char, s.d), "total divisor degree")
        base = Poly.unit(pair.symbols, pair.cutoff, z_pow=1)
        for i in pair.gamma_indices():
            base = base * ratio_factor(pair, dict(pair.char_classes[i]), s.pairings[i])
        ql = Poly.one(pair.symbols, pair.cutoff)
        for a in range(1, dd + 1):
            ql = ql * _linear_z_factor(pair, d_combo, Fraction(a))
        for ks in itertools.product(range(kb + 1), repeat=len(ext)):
            ktot = sum(k * a for k, a in zip(ks, ext))
            tangency = Fraction(dd - ktot)
            kfac = 1
            for k in ks:
                for j in range(1, k + 1):
                    kfac *= j
            scale = Poly.unit(
                pair.symbols, pair.cutoff, z_pow=-sum(ks)
            ) * Fraction(1, kfac)
            if ktot < dd:
                coeff = (
                    base
                    * ql
                    * scale
                    * _linear_z_factor(pair, d_combo, tangency).inverse()
                )
                branch = "pos"
            else:
                coeff = base * ql * scale
                branch = "neg"
            if not coeff.is_zero():
                out.append(ExtendedEntry(s, ks, branch, -tangency, coeff))
    return tuple(out)


def smooth_pair_i_series(pair: PairData, bound) -> tuple[ExtendedEntry, ...]:
    """Non-extended I-series of the smooth total-divisor pair (all k = 0)."""
    return tuple(
        e for e in extended_i_series(pair, (1,), bound, order_bound=0)
    )


def extended_pair_terms(
    pair: PairData, orders: Mapping[int, Sequence[int]], bound
) -> list[tuple[gd.CurveClassSample, dict[int, tuple[int, ...]], Poly]]:
    """Degree-zero part of the extended relative I-series for the pair:
    contributions indexed by (d, k) with sum_j a_ij k_ij = D_i.d for each
    relative component i, coefficient = toric ratios / (z^sum k prod k!).
    """
    samples = gd.kset_enumerate(pair.git, pair.omega, pair.p_basis, bound)
    out = []
    for s in samples:
        base = Poly.unit(pair.symbols, pair.cutoff, z_pow=1)
        for i in pair.gamma_indices():
            base = base * ratio_factor(pair, dict(pair.char_classes[i]), s.pairings[i])
        if base.is_zero():
            continue
        per_index: list[list[tuple[int, tuple[int, ...]]]] = []
        feasible = True
        for i in sorted(pair.relative):
            target = _require_integer(s.pairings[i], "relative pairing")
            a_list = list(orders.get(i, ()))
            sols = []
            if not a_list:
                if target == 0:
                    sols.append((i, ()))
            else:
                rng = range(0, max(target, 0) + 1)
                for ks in itertools.product(rng, repeat=len(a_list)):
                    if sum(k * a for k, a in zip(ks, a_list)) == target:
                        sols.append((i, ks))
            if not sols:
                feasible = False
                break
            per_index.append(sols)
        if not feasible:
            continue
        for combo in itertools.product(*per_index):
            ktotal = 0
            kfac = 1
            kmap = {}
            for i, ks in combo:
                kmap[i] = ks
                for k in ks:
                    ktotal += k
                    for j in range(1, k + 1):
                        kfac *= j
            coeff = base * Poly.unit(
                pair.symbols, pair.cutoff, z_pow=-ktotal
            ) * Fraction(1, kfac)
            out.append((s, kmap, coeff))
    return out


# ---------------------------------------------------------------------------
# Gamma-class and the H/I relation


def gamma_hat_block(
    pair: PairData, sector: Sequence[Fraction], tangency: Sequence[Fraction]
) -> Poly:
    """Gamma-class block at one (sector, tangency): products of
    Gamma(1 + class - <pairing>) over the non-relative characters, divided
    by Gamma(1 + v) per bundle, with a factor 1/(class - s) per negative
    tangency entry."""
    if any(frac(x) != 0 for x in sector):
        raise TwistedSectorError("Gamma-class blocks for twisted sectors are not exact")
    out = Poly.one(pair.symbols, pair.cutoff)
    for i in pair.gamma_indices():
        arg = pair.combo_poly(dict(pair.char_classes[i]))
        out = out * gamma_one_plus(arg, pair.cutoff)
    for b in pair.bundles:
        arg = pair.combo_poly(b.combo())
        out = out * gamma_one_plus(arg, pair.cutoff).inverse()
    rel = sorted(pair.relative)
    rel_classes = [dict(pair.char_classes[i]) for i in rel]
    for b in pair.bundles:
        if b.relative:
            rel_classes.append(b.combo())
    if len(tangency) != len(rel_classes):
        raise SeriesError("tangency length does not match the relative structure")
    for combo, s in zip(rel_classes, tangency):
        s = frac(s)
        if s < 0:
            factor = pair.combo_poly(combo) - s
            out = out * factor.inverse()
    return out


def gamma_hat(pair: PairData, series: HSeries) -> dict[BracketLabel, Poly]:
    """Gamma-class blocks for every (inverted) label occurring in a series."""
    out: dict[BracketLabel, Poly] = {}
    for e in series.entries:
        inv_label = BracketLabel(
            sector=tuple(gd._fractional(-x) for x in e.label.sector),
            tangency=tuple(-x for x in e.label.tangency),
        )
        if inv_label not in out:
            out[inv_label] = gamma_hat_block(pair, inv_label.sector, inv_label.tangency)
    return out


@dataclass(frozen=True)
class ConsistencyReport:
    checked: int
    mismatches: tuple[tuple[Fraction, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def h_i_consistency(pair: PairData, bound, mutate: str | None = None) -> ConsistencyReport:
    """Blockwise check that the I-coefficients equal the Gamma-class twist
    of the H-coefficients.

    Per entry d the right side is built from the H-coefficient by: rescaling
    y (a z-power shift by the log-tangent pairing), the tau-degree twist,
    the tangency/sector inversion, the Gamma-class cup product, the diagonal
    grading power of z, and the global z^(-dim/2); the left side is
    z^(-1) times the I-coefficient.  `mutate` deliberately corrupts one
    ingredient (negative controls): one of "mu", "rho", "tau", "inv",
    "gamma_hat".
    """
    if pair.bundles or pair.concave:
        raise SeriesError("the exact H/I check covers the toric-pair configuration")
    hs = h_series(pair, bound)
    dim = pair.dim
    mismatches = []
    for entry in hs.entries:
        s = entry.sample
        lhs = i_coefficient(pair, s).shift_units(z_pow=-1)

        rho_d = pair.rho_pairing(s.d)
        if mutate == "rho":
            rho_d += 1
        rhs = entry.coeff.shift_units(z_pow=-rho_d)

        tau_shift = 1 if mutate == "tau" else 0
        rhs = rhs.map_terms(lambda e, z, t, c: (e, z, t + sum(e) + tau_shift, c))

        if mutate == "inv":
            inv_tangency = entry.label.tangency
        else:
            inv_tangency = tuple(-x for x in entry.label.tangency)
        inv_sector = tuple(gd._fractional(-x) for x in entry.label.sector)
        block = gamma_hat_block(pair, inv_sector, inv_tangency)
        if mutate == "gamma_hat":
            block = Poly.one(pair.symbols, pair.cutoff)
        rhs = rhs * block

        neg = sum(1 for x in inv_tangency if x < 0)
        mu_shift = 1 if mutate == "mu" else 0
        half_dim = Fraction(dim, 2)
        rhs = rhs.map_terms(
            lambda e, z, t, c: (
                e,
                z - (sum(e) + neg + mu_shift - half_dim),
                t,
                c,
            )
        )
        rhs = rhs.shift_units(z_pow=-half_dim)
        if lhs != rhs:
            mismatches.append(s.d)
    return ConsistencyReport(checked=len(hs.entries), mismatches=tuple(mismatches))


# ---------------------------------------------------------------------------
# comparison across a wall


@dataclass(frozen=True)
class MatchedPair:
    exponents: tuple[Fraction, ...]
    plus_label: BracketLabel
    minus_label: BracketLabel
    equal: bool


@dataclass(frozen=True)
class CompareReport:
    matched: tuple[MatchedPair, ...]
    unmatched_plus: tuple[tuple[tuple[Fraction, ...], bool], ...]
    unmatched_minus: tuple[tuple[Fraction, ...], ...]
    minus_unmatched_is_error: bool

    @property
    def ok(self) -> bool:
        if any(not m.equal for m in self.matched):
            return False
        if any(not explained for _, explained in self.unmatched_plus):
            return False
        if self.minus_unmatched_is_error and self.unmatched_minus:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "matched": [
                {
                    "exponents": [la.format_frac(x) for x in m.exponents],
                    "plus_tangency": [la.format_frac(x) for x in m.plus_label.tangency],
                    "minus_tangency": [la.format_frac(x) for x in m.minus_label.tangency],
                    "equal": m.equal,
                }
                for m in self.matched
            ],
            "unmatched_plus": [
                {
                    "exponents": [la.format_frac(x) for x in e],
                    "explained": ok,
                }
                for e, ok in self.unmatched_plus
            ],
            "unmatched_minus": [
                [la.format_frac(x) for x in e] for e in self.unmatched_minus
            ],
            "ok": self.ok,
        }


@dataclass(frozen=True)
class Reduction:
    """Alignment of a lower-rank minus side inside the plus exponent system.

    `keep[j]` is the plus exponent index matching the j-th minus exponent;
    `spec_var` is the plus exponent index of the specialization variable,
    which must vanish on matched entries.
    """

    keep: tuple[int, ...]
    spec_var: int


def compare_sides(
    plus: HSeries,
    minus: HSeries,
    phi: Mapping[str, Combo],
    cov: gd.ChangeOfVariables | None = None,
    reduction: Reduction | None = None,
    minus_unmatched_is_error: bool = True,
) -> CompareReport:
    """Match entries of two series by monomial exponents and compare exact
    coefficients under the class substitution phi (plus to minus symbols).

    With `cov` the minus exponents are rewritten through the change of
    variables (same-rank comparison); with `reduction` the minus side is a
    lower-rank model matched at specialization-variable exponent zero.
    Unmatched plus entries must be explained: positive exponent of the
    specialization variable, or a would-be partner outside the minus box.
    """
    r_plus = len(plus.pair.p_basis)
    minus_index: dict[tuple[Fraction, ...], HEntry] = {}
    minus_box: set[tuple[Fraction, ...]] = set()
    for e in minus.entries:
        if cov is not None:
            key = cov.minus_exponents_in_plus_variables(e.exponents)
        elif reduction is not None:
            key_l = [Fraction(0)] * r_plus
            for j, idx in enumerate(reduction.keep):
                key_l[idx] = e.exponents[j]
            key = tuple(key_l)
        else:
            key = e.exponents
        if key in minus_index:
            raise SeriesError("minus entries are not exponent-unique")
        minus_index[key] = e
        minus_box.add(key)

    def minus_partner_possible(exps: tuple[Fraction, ...]) -> bool:
        """Can the minus side contain a partner within its box?"""
        if reduction is not None:
            if exps[reduction.spec_var] != 0:
                return False
            back = tuple(exps[idx] for idx in reduction.keep)
            return all(0 <= x <= minus.bound for x in back)
        if cov is not None:
            # invert the change of variables: shared exponents stay, the
            # last minus exponent solves the c-relation
            shared = exps[: r_plus - 1]
            c_list = cov.c_list
            last = (
                sum(c_list[i] * shared[i] for i in range(r_plus - 1)) - exps[-1]
            ) / cov.c
            back = tuple(list(shared) + [last])
            return all(0 <= x <= minus.bound for x in back)
        return all(0 <= x <= minus.bound for x in exps)

    matched = []
    unmatched_plus = []
    seen_minus = set()
    target_symbols = minus.pair.symbols
    for e in plus.entries:
        key = e.exponents
        partner = minus_index.get(key)
        if partner is None:
            if reduction is not None:
                explained = key[reduction.spec_var] > 0
            else:
                explained = not minus_partner_possible(key)
            unmatched_plus.append((key, explained))
            continue
        seen_minus.add(key)
        image = e.coeff.substitute(dict(phi), target_symbols)
        matched.append(
            MatchedPair(
                exponents=key,
                plus_label=e.label,
                minus_label=partner.label,
                equal=image == partner.coeff,
            )
        )
    unmatched_minus = tuple(
        minus_index[k].sample.d for k in sorted(minus_box - seen_minus, key=repr)
    )
    return CompareReport(
        matched=tuple(matched),
        unmatched_plus=tuple(unmatched_plus),
        unmatched_minus=unmatched_minus,
        minus_unmatched_is_error=minus_unmatched_is_error,
    )
