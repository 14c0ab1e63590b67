"""Exact truncated series arithmetic.

Two layers:

  * ``Scalar``: a polynomial over Q in the Euler constant ``g`` (weight 1)
    and zeta values ``z2, z3, ...`` (weight k), truncated above a total
    weight cutoff.  The generators commute freely; no relations between
    them are ever assumed, so equality of Scalars is a complete test for
    the identities handled here.

  * ``Poly``: a polynomial in nilpotent divisor symbols with Scalar
    coefficients, truncated above a total symbol degree, with two exact
    formal units tracked per term: a power of ``z`` (half-integers allowed)
    and a power of ``tau`` (tau stands for 2*pi*i and is never expanded).

On top of these, expansions of shifted Gamma factors:
``gamma_shift(n, x, order)`` is the truncation of Gamma(1 + x + n) and
``gamma_shift_recip`` its reciprocal.  For n < 0 the expansion of
Gamma(1 + x + n) carries a single non-invertible factor 1/x, reported as
an explicit pole order instead of being inverted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .linalg import frac, format_frac

ScalarKey = tuple[int, tuple[tuple[int, int], ...]]  # (gamma exp, ((k, exp), ...))
TermKey = tuple[tuple[int, ...], Fraction, int]  # (symbol exps, z power, tau power)


class NonInvertibleError(ArithmeticError):
    """Raised when a series with no invertible leading part is inverted."""


def _key_weight(key: ScalarKey) -> int:
    g, zetas = key
    return g + sum(k * e for k, e in zetas)


class Scalar:
    """Element of Q[g, z2, z3, ...] truncated above total weight `cutoff`."""

    __slots__ = ("cutoff", "terms")

    def __init__(self, cutoff: int, terms: Mapping[ScalarKey, Fraction] | None = None):
        self.cutoff = int(cutoff)
        clean: dict[ScalarKey, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                c = frac(coeff)
                if c == 0 or _key_weight(key) > self.cutoff:
                    continue
                clean[key] = clean.get(key, Fraction(0)) + c
                if clean[key] == 0:
                    del clean[key]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(value, cutoff: int) -> "Scalar":
        return Scalar(cutoff, {(0, ()): frac(value)})

    @staticmethod
    def euler(cutoff: int) -> "Scalar":
        return Scalar(cutoff, {(1, ()): Fraction(1)})

    @staticmethod
    def zeta(k: int, cutoff: int) -> "Scalar":
        if k < 2:
            raise ValueError("zeta generators start at weight 2")
        return Scalar(cutoff, {(0, ((k, 1),)): Fraction(1)})

    # -- ring ops ----------------------------------------------------------

    def _check(self, other: "Scalar"):
        if self.cutoff != other.cutoff:
            raise ValueError("weight cutoffs differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other, self.cutoff)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Scalar(self.cutoff, out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.cutoff, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Scalar) else Scalar.const(-frac(other), self.cutoff))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self.cutoff, {k: c * frac(other) for k, c in self.terms.items()})
        self._check(other)
        out: dict[ScalarKey, Fraction] = {}
        for (g1, zs1), c1 in self.terms.items():
            for (g2, zs2), c2 in other.terms.items():
                g = g1 + g2
                zd: dict[int, int] = {}
                for k, e in zs1:
                    zd[k] = zd.get(k, 0) + e
                for k, e in zs2:
                    zd[k] = zd.get(k, 0) + e
                key = (g, tuple(sorted(zd.items())))
                if _key_weight(key) > self.cutoff:
                    continue
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Scalar(self.cutoff, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other, self.cutoff)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.cutoff == other.cutoff and self.terms == other.terms

    def __hash__(self):
        return hash((self.cutoff, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def rational_part(self) -> Fraction:
        return self.terms.get((0, ()), Fraction(0))

    def inverse(self) -> "Scalar":
        """Invert; requires a nonzero rational part.

        The positive-weight part is nilpotent modulo the weight cutoff, so a
        finite geometric series suffices.
        """
        c0 = self.rational_part
        if c0 == 0:
            raise NonInvertibleError("scalar has no rational part")
        # 1/(c0 (1 + u)) = (1 - u + u^2 - ...) / c0 with u nilpotent mod cutoff
        rest = self - Scalar.const(c0, self.cutoff)
        inv_c0 = Scalar.const(1 / c0, self.cutoff)
        u = rest * inv_c0
        out = Scalar.const(1, self.cutoff)
        power = Scalar.const(1, self.cutoff)
        sign = -1
        for _ in range(self.cutoff):
            power = power * u
            if power.is_zero():
                break
            out = out + power * sign
            sign = -sign
        return out * inv_c0

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (g, zs), c in sorted(self.terms.items()):
            factors = []
            if g:
                factors.append("g" if g == 1 else f"g^{g}")
            for k, e in zs:
                factors.append(f"z{k}" if e == 1 else f"z{k}^{e}")
            mono = "*".join(factors) if factors else "1"
            bits.append(f"({format_frac(c)})*{mono}")
        return " + ".join(bits)

    def to_mpf(self, dps: int = 30):
        """Numeric value with g = EulerGamma, zk = zeta(k) (for test oracles)."""
        import mpmath

        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for (g, zs), c in self.terms.items():
                val = mpmath.mpf(c.numerator) / c.denominator
                if g:
                    val *= mpmath.euler**g
                for k, e in zs:
                    val *= mpmath.zeta(k) ** e
                total += val
            return total

    def to_float(self, dps: int = 30) -> float:
        return float(self.to_mpf(dps))


LinearCombo = Mapping[str, Union[int, Fraction]]


class Poly:
    """Truncated polynomial in nilpotent symbols over Scalar coefficients.

    Term keys are (exponent tuple, z power, tau power).  z powers may be
    half-integral; tau powers are integers.  Total symbol degree is capped
    at `cutoff`; z and tau are exact units and do not count toward it.
    """

    __slots__ = ("symbols", "cutoff", "terms")

    def __init__(
        self,
        symbols: Sequence[str],
        cutoff: int,
        terms: Mapping[TermKey, Scalar] | None = None,
    ):
        self.symbols = tuple(symbols)
        self.cutoff = int(cutoff)
        clean: dict[TermKey, Scalar] = {}
        if terms:
            for (exps, zp, tp), coeff in terms.items():
                if sum(exps) > self.cutoff or coeff.is_zero():
                    continue
                zp = frac(zp)
                if zp.denominator not in (1, 2):
                    raise ValueError("z powers must be integers or half-integers")
                key = (tuple(int(e) for e in exps), zp, int(tp))
                if key in clean:
                    s = clean[key] + coeff
                    if s.is_zero():
                        del clean[key]
                    else:
                        clean[key] = s
                else:
                    clean[key] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(symbols: Sequence[str], cutoff: int) -> "Poly":
        return Poly(symbols, cutoff)

    @staticmethod
    def const(value, symbols: Sequence[str], cutoff: int) -> "Poly":
        z = tuple(0 for _ in symbols)
        return Poly(symbols, cutoff, {(z, Fraction(0), 0): Scalar.const(value, cutoff)})

    @staticmethod
    def one(symbols: Sequence[str], cutoff: int) -> "Poly":
        return Poly.const(1, symbols, cutoff)

    @staticmethod
    def symbol(name: str, symbols: Sequence[str], cutoff: int) -> "Poly":
        exps = tuple(int(s == name) for s in symbols)
        if sum(exps) != 1:
            raise KeyError(f"unknown symbol {name!r}")
        return Poly(symbols, cutoff, {(exps, Fraction(0), 0): Scalar.const(1, cutoff)})

    @staticmethod
    def from_combo(combo: LinearCombo, symbols: Sequence[str], cutoff: int) -> "Poly":
        """Linear combination of symbols, e.g. {"H": 4} or {"xi": 1, "h": -1}."""
        out = Poly.zero(symbols, cutoff)
        for name, coeff in combo.items():
            out = out + Poly.symbol(name, symbols, cutoff) * frac(coeff)
        return out

    @staticmethod
    def unit(symbols: Sequence[str], cutoff: int, z_pow=0, tau_pow: int = 0) -> "Poly":
        exps = tuple(0 for _ in symbols)
        return Poly(
            symbols, cutoff, {(exps, frac(z_pow), int(tau_pow)): Scalar.const(1, cutoff)}
        )

    # -- ring ops ----------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.symbols != other.symbols or self.cutoff != other.cutoff:
            raise ValueError("symbol universes or cutoffs differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.symbols, self.cutoff)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return Poly(self.symbols, self.cutoff, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.symbols, self.cutoff, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.symbols, self.cutoff)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            sc = frac(other)
            return Poly(
                self.symbols, self.cutoff, {k: c * sc for k, c in self.terms.items()}
            )
        if isinstance(other, Scalar):
            return Poly(
                self.symbols, self.cutoff, {k: c * other for k, c in self.terms.items()}
            )
        self._check(other)
        out: dict[TermKey, Scalar] = {}
        for (e1, z1, t1), c1 in self.terms.items():
            for (e2, z2, t2), c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if sum(exps) > self.cutoff:
                    continue
                key = (exps, z1 + z2, t1 + t2)
                prod = c1 * c2
                if key in out:
                    s = out[key] + prod
                    if s.is_zero():
                        del out[key]
                    else:
                        out[key] = s
                elif not prod.is_zero():
                    out[key] = prod
        return Poly(self.symbols, self.cutoff, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Poly.one(self.symbols, self.cutoff)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.symbols, self.cutoff)
        if not isinstance(other, Poly):
            return NotImplemented
        return (
            self.symbols == other.symbols
            and self.cutoff == other.cutoff
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.symbols, self.cutoff, tuple(sorted(self.terms.items(), key=repr))))

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure ---------------------------------------------------------

    def shift_units(self, z_pow=0, tau_pow: int = 0) -> "Poly":
        """Multiply by z^z_pow * tau^tau_pow."""
        zp = frac(z_pow)
        tp = int(tau_pow)
        return Poly(
            self.symbols,
            self.cutoff,
            {(e, z + zp, t + tp): c for (e, z, t), c in self.terms.items()},
        )

    def map_terms(self, fn) -> "Poly":
        """fn(exps, zpow, taupow, coeff) -> (exps, zpow, taupow, coeff) or None."""
        out: dict[TermKey, Scalar] = {}
        for (e, z, t), c in self.terms.items():
            res = fn(e, z, t, c)
            if res is None:
                continue
            e2, z2, t2, c2 = res
            key = (tuple(e2), frac(z2), int(t2))
            if key in out:
                s = out[key] + c2
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            elif not c2.is_zero():
                out[key] = c2
        return Poly(self.symbols, self.cutoff, out)

    def degree_parts(self) -> dict[int, "Poly"]:
        parts: dict[int, dict[TermKey, Scalar]] = {}
        for key, c in self.terms.items():
            parts.setdefault(sum(key[0]), {})[key] = c
        return {d: Poly(self.symbols, self.cutoff, t) for d, t in sorted(parts.items())}

    def extract(self, exps: Sequence[int], z_pow=0, tau_pow: int = 0) -> Scalar:
        key = (tuple(int(e) for e in exps), frac(z_pow), int(tau_pow))
        return self.terms.get(key, Scalar.const(0, self.cutoff))

    def substitute(self, mapping: Mapping[str, "Poly | LinearCombo"], target_symbols=None) -> "Poly":
        """Ring homomorphism sending each symbol to a linear combination.

        Symbols absent from `mapping` are sent to themselves (they must then
        exist in the target universe).
        """
        tgt = tuple(target_symbols) if target_symbols is not None else self.symbols
        images: dict[str, Poly] = {}
        for s in self.symbols:
            img = mapping.get(s)
            if img is None:
                images[s] = Poly.symbol(s, tgt, self.cutoff)
            elif isinstance(img, Poly):
                if img.symbols != tgt or img.cutoff != self.cutoff:
                    raise ValueError("substitution image has wrong universe")
                images[s] = img
            else:
                images[s] = Poly.from_combo(img, tgt, self.cutoff)
        out = Poly.zero(tgt, self.cutoff)
        for (exps, zp, tp), coeff in self.terms.items():
            term = Poly.unit(tgt, self.cutoff, zp, tp) * coeff
            for s, e in zip(self.symbols, exps):
                for _ in range(e):
                    term = term * images[s]
            out = out + term
        return out

    def inverse(self) -> "Poly":
        """Invert a poly whose degree-zero part is a single invertible term."""
        deg0 = {k: c for k, c in self.terms.items() if sum(k[0]) == 0}
        if len(deg0) != 1:
            raise NonInvertibleError(
                "inversion requires a single degree-zero leading term"
            )
        (key, lead) = next(iter(deg0.items()))
        _, zp, tp = key
        lead_inv = lead.inverse()
        lead_inv_poly = Poly.unit(self.symbols, self.cutoff, -zp, -tp) * lead_inv
        rest = Poly(
            self.symbols,
            self.cutoff,
            {k: c for k, c in self.terms.items() if sum(k[0]) > 0},
        )
        u = rest * lead_inv_poly  # nilpotent: positive symbol degree
        out = Poly.one(self.symbols, self.cutoff)
        power = Poly.one(self.symbols, self.cutoff)
        sign = -1
        for _ in range(self.cutoff):
            power = power * u
            if power.is_zero():
                break
            out = out + power * sign
            sign = -sign
        return out * lead_inv_poly

    def exp(self) -> "Poly":
        """exp of a poly with no degree-zero part (nilpotent argument)."""
        if any(sum(k[0]) == 0 for k in self.terms):
            raise ValueError("exp requires a nilpotent argument")
        out = Poly.one(self.symbols, self.cutoff)
        power = Poly.one(self.symbols, self.cutoff)
        fact = 1
        for n in range(1, self.cutoff + 1):
            power = power * self
            if power.is_zero():
                break
            fact *= n
            out = out + power * Fraction(1, fact)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (exps, zp, tp), c in sorted(self.terms.items(), key=repr):
            factors = []
            for s, e in zip(self.symbols, exps):
                if e == 1:
                    factors.append(s)
                elif e > 1:
                    factors.append(f"{s}^{e}")
            if zp:
                factors.append(f"z^{format_frac(zp)}")
            if tp:
                factors.append(f"tau^{tp}")
            mono = "*".join(factors) if factors else "1"
            bits.append(f"[{c!r}]*{mono}")
        return " + ".join(bits)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list[dict]:
        out = []
        for (exps, zp, tp), coeff in sorted(self.terms.items(), key=repr):
            centry = []
            for (g, zs), q in sorted(coeff.terms.items()):
                centry.append(
                    {"gamma": g, "zetas": {str(k): e for k, e in zs}, "q": format_frac(q)}
                )
            out.append(
                {
                    "exps": list(exps),
                    "z": format_frac(zp),
                    "tau": tp,
                    "coeff": centry,
                }
            )
        return out


# ---------------------------------------------------------------------------
# Gamma expansions


@dataclass(frozen=True)
class GammaFactor:
    """Expansion of a shifted Gamma factor as x^(-pole_order) * unit."""

    pole_order: int
    unit: Poly

    @property
    def poly(self) -> Poly:
        if self.pole_order:
            raise NonInvertibleError("expansion carries a bare symbol pole")
        return self.unit


def _nilpotent_arg(x, symbols, cutoff) -> Poly:
    if isinstance(x, Poly):
        arg = x
    else:
        arg = Poly.symbol(str(x), symbols or (str(x),), cutoff)
    if any(sum(k[0]) == 0 for k in arg.terms):
        raise ValueError("gamma expansions need a nilpotent argument")
    return arg


def gamma_one_plus(x, order: int, symbols: Sequence[str] | None = None) -> Poly:
    """Truncated Gamma(1 + x) = exp(-g x + sum_{k>=2} (-1)^k zeta_k x^k / k)."""
    arg = _nilpotent_arg(x, symbols, order)
    log_terms = Poly.zero(arg.symbols, arg.cutoff)
    power = Poly.one(arg.symbols, arg.cutoff)
    for k in range(1, arg.cutoff + 1):
        power = power * arg
        if power.is_zero():
            break
        if k == 1:
            coeff = -Scalar.euler(arg.cutoff)
        else:
            coeff = Scalar.zeta(k, arg.cutoff) * Fraction((-1) ** k, k)
        log_terms = log_terms + power * coeff
    return log_terms.exp()


def gamma_shift(x, n: int, order: int, symbols: Sequence[str] | None = None) -> GammaFactor:
    """Truncated Gamma(1 + x + n) for integer n.

    n >= 0: Gamma(1+x) * prod_{j=1..n} (x + j), an ordinary unit series.
    n < 0:  Gamma(1+x) / prod_{j=n+1..0} (x + j); the bare-x factor is
    reported through pole_order = 1 rather than inverted.
    """
    arg = _nilpotent_arg(x, symbols, order)
    base = gamma_one_plus(arg, order)
    one = Poly.one(arg.symbols, arg.cutoff)
    if n >= 0:
        prod = one
        for j in range(1, n + 1):
            prod = prod * (arg + j)
        return GammaFactor(0, base * prod)
    denom = one
    for j in range(n + 1, 0):
        denom = denom * (arg + j)
    return GammaFactor(1, base * denom.inverse())


def gamma_shift_recip(x, n: int, order: int, symbols: Sequence[str] | None = None) -> Poly:
    """Truncated 1 / Gamma(1 + x + n) for integer n.

    For n <= -1 the result carries an overall bare-x factor, reflecting the
    zero of 1/Gamma at nonpositive integers; it is an ordinary Poly.
    """
    arg = _nilpotent_arg(x, symbols, order)
    base_inv = gamma_one_plus(arg, order).inverse()
    one = Poly.one(arg.symbols, arg.cutoff)
    if n >= 0:
        prod = one
        for j in range(1, n + 1):
            prod = prod * (arg + j)
        return base_inv * prod.inverse()
    prod = one
    for j in range(n + 1, 1):  # includes j = 0, the bare-x factor
        prod = prod * (arg + j)
    return base_inv * prod
