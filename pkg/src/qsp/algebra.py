"""Graded operator algebra: generators, canonical monomials, rewrite engine.

Words are normal-ordered into the fixed generator order

    dx < dth < x < th < d < px < pth < ix < ith

(differential forms, then coordinates, then operators).  Every out-of-order
adjacent pair of generators has a rewrite rule whose right-hand side is
already normal-ordered; rules against x^-1 are derived from the x-rules by
solving g = (g*x)*x^-1.  The engine multiplies by folding one generator at a
time into a canonical monomial, with the single-step products memoized.

The exterior-derivative generator d is accepted in input words but is not a
basis letter: the stated commutation relations make d - (dx*px + dth*pth)
a zero divisor killed by 1 - 1/Q, so for a generic deformation d coincides
with dx*px + dth*pth and keeping it independent would break confluence.
The engine therefore multiplies d as that realization, and normal forms are
d-free; rule-table entries for pairs involving d hold the realized products.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _itproduct
from typing import Iterable, Mapping, Union

from .coeffs import (
    PARAMS_I,
    PARAMS_II,
    PARAMS_III,
    ParamSet,
    QspError,
    Rat,
    RationalFunction,
)


class UnsupportedGenerator(QspError):
    pass


class InconsistentType(QspError):
    pass


class NonInvertibleRule(QspError):
    pass


class NotAFunctionArgument(QspError):
    pass


# ----------------------------------------------------------------------------
# Generators and monomials
# ----------------------------------------------------------------------------

GENS = ("dx", "dth", "x", "th", "d", "px", "pth", "ix", "ith")
NGENS = len(GENS)
GEN_INDEX = {g: i for i, g in enumerate(GENS)}
DX, DTH, X, TH, D, PX, PTH, IX, ITH = range(NGENS)

# Z2-parity of each generator (1 = odd).
GEN_PARITY = (1, 0, 0, 1, 1, 0, 1, 1, 0)

# Exponent domains: x ranges over all integers, nilpotent generators over
# {0, 1}, the rest over the naturals.
NILPOTENT = frozenset({DX, TH, D, PTH, IX})
NATURAL = frozenset({DTH, PX, ITH})
OPERATOR_SECTOR = frozenset({D, PX, PTH, IX, ITH})

Monomial = tuple  # length NGENS, integer exponents
ONE_MONO: Monomial = (0,) * NGENS


def mono_parity(m: Monomial) -> int:
    return (m[DX] + m[TH] + m[D] + m[PTH] + m[IX]) & 1


def mono_degree(m: Monomial) -> int:
    return sum(abs(e) for e in m)


def mono_sort_key(m: Monomial):
    # graded order; ties print earlier generators (higher powers) first
    return (mono_degree(m), tuple(-e for e in m))


def mono_letters(m: Monomial):
    """Yield the monomial as atomic letters (gen index, +1/-1), left to right."""
    for g, e in enumerate(m):
        if not e:
            continue
        s = 1 if e > 0 else -1
        for _ in range(abs(e)):
            yield (g, s)


def mono_is_function(m: Monomial) -> bool:
    """True when the monomial is a pure coordinate word (x-powers and theta)."""
    return not any(m[g] for g in (DX, DTH, D, PX, PTH, IX, ITH))


def mono_is_form(m: Monomial) -> bool:
    """True when the monomial lives in the forms-times-coordinates sector."""
    return not any(m[g] for g in OPERATOR_SECTOR)


def mono(**exps: int) -> Monomial:
    e = [0] * NGENS
    for name, k in exps.items():
        if name not in GEN_INDEX:
            raise UnsupportedGenerator(f"unknown generator {name!r}")
        e[GEN_INDEX[name]] = k
    return tuple(e)


WordItem = Union[str, tuple]


def word_letters(word: Iterable[WordItem]):
    """Flatten a word given as generator names or (name, exponent) pairs."""
    for item in word:
        if isinstance(item, str):
            name, e = item, 1
        else:
            name, e = item
        if name not in GEN_INDEX:
            raise UnsupportedGenerator(f"unknown generator {name!r}")
        g = GEN_INDEX[name]
        if e == 0:
            continue
        if e < 0 and g != X:
            raise UnsupportedGenerator(f"negative power of {name!r} is not invertible")
        s = 1 if e > 0 else -1
        for _ in range(abs(e)):
            yield (g, s)


# ----------------------------------------------------------------------------
# Elements: finite coefficient maps over canonical monomials
# ----------------------------------------------------------------------------

class Element:
    """Finite linear combination of canonical monomials over the coefficient field."""

    __slots__ = ("params", "terms")

    def __init__(self, params: ParamSet, terms: dict | None = None):
        self.params = params
        self.terms: dict = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    self.terms[m] = c

    @classmethod
    def zero(cls, params: ParamSet) -> "Element":
        return cls(params)

    @classmethod
    def one(cls, params: ParamSet) -> "Element":
        return cls(params, {ONE_MONO: params.one()})

    @classmethod
    def monomial(cls, params: ParamSet, m: Monomial, coeff: "Rat | RationalFunction" = 1) -> "Element":
        return cls(params, {m: params.rf(coeff)})

    @classmethod
    def scalar(cls, params: ParamSet, coeff) -> "Element":
        return cls(params, {ONE_MONO: params.rf(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out[m] + c if m in out else c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        e = Element(self.params)
        e.terms = out
        return e

    def __neg__(self) -> "Element":
        e = Element(self.params)
        e.terms = {m: -c for m, c in self.terms.items()}
        return e

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, coeff) -> "Element":
        c = self.params.rf(coeff)
        if c.is_zero():
            return Element(self.params)
        e = Element(self.params)
        e.terms = {m: v * c for m, v in self.terms.items()}
        return e

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.keys())))

    def coefficient(self, m: Monomial) -> RationalFunction:
        return self.terms.get(m, self.params.zero())

    def parity(self):
        """0, 1, or None when the element mixes parities (or is zero)."""
        ps = {mono_parity(m) for m in self.terms}
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_function_sector(self) -> bool:
        return all(mono_is_function(m) for m in self.terms)

    def is_form_sector(self) -> bool:
        return all(mono_is_form(m) for m in self.terms)

    def is_scalar(self) -> bool:
        return all(m == ONE_MONO for m in self.terms)

    def scalar_value(self) -> RationalFunction:
        if not self.is_scalar():
            raise ValueError("element is not a scalar")
        return self.terms.get(ONE_MONO, self.params.zero())

    def vacuum(self) -> "Element":
        """Drop every term whose operator-sector exponents are not all zero."""
        e = Element(self.params)
        e.terms = {m: c for m, c in self.terms.items() if mono_is_form(m)}
        return e

    def substitute(self, assignment: Mapping[str, Rat]) -> "Element":
        e = Element(self.params)
        for m, c in self.terms.items():
            cc = c.substitute(assignment)
            if not cc.is_zero():
                e.terms[m] = cc
        return e

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: mono_sort_key(kv[0]))

    def __repr__(self):
        if not self.terms:
            return "<0>"
        bits = []
        for m, c in self.sorted_terms():
            w = "*".join(
                (GENS[g] if e == 1 else f"{GENS[g]}^{e}")
                for g, e in enumerate(m)
                if e
            ) or "1"
            bits.append(f"({c})*{w}")
        return "<" + " + ".join(bits) + ">"


def parity_of(e: Element) -> str:
    """Common parity of an element: 'even', 'odd', or 'mixed'."""
    p = e.parity()
    if p == 0:
        return "even"
    if p == 1:
        return "odd"
    return "mixed"


def substitute_params(e: Element, assignment: Mapping[str, Rat]) -> Element:
    """Coefficient-wise numeric specialization; zero terms are pruned."""
    return e.substitute(assignment)


# ----------------------------------------------------------------------------
# Calculus types (the three covariant parameter families)
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CalculusType:
    """One covariant solution family: the six structure coefficients.

    qval carries the value of the base deformation parameter, so numeric
    specializations of q stay consistent between the structure coefficients
    and the coordinate relation x*th = q*th*x; it defaults to the symbol q.
    """

    params: ParamSet
    Q: RationalFunction
    Q11: RationalFunction
    Q12: RationalFunction
    Q21: RationalFunction
    Q22: RationalFunction
    Qprime: RationalFunction
    qval: "RationalFunction | None" = None

    @property
    def q(self) -> RationalFunction:
        return self.qval if self.qval is not None else self.params.var("q")

    @classmethod
    def type_i(cls) -> "CalculusType":
        P = PARAMS_I
        q = P.var("q")
        return cls(P, P.one(), q, P.zero(), -(P.one() / q), P.zero(), q)

    @classmethod
    def type_ii(cls) -> "CalculusType":
        P = PARAMS_II
        q, r = P.var("q"), P.var("r")
        return cls(P, r, q, r - P.one(), -(r / q), P.zero(), q / r)

    @classmethod
    def type_iii(cls) -> "CalculusType":
        P = PARAMS_III
        q, p = P.var("q"), P.var("p")
        return cls(P, p, p * q, P.zero(), -(P.one() / q), P.one() - p, p * q)

    @classmethod
    def by_name(cls, name: str) -> "CalculusType":
        table = {"I": cls.type_i, "II": cls.type_ii, "III": cls.type_iii}
        if name not in table:
            raise InconsistentType(f"unknown calculus type {name!r}")
        return table[name]()

    def specialize(self, assignment: Mapping[str, Rat]) -> "CalculusType":
        return CalculusType(
            self.params,
            self.Q.substitute(assignment),
            self.Q11.substitute(assignment),
            self.Q12.substitute(assignment),
            self.Q21.substitute(assignment),
            self.Q22.substitute(assignment),
            self.Qprime.substitute(assignment),
            self.q.substitute(assignment),
        )

    def covariance_residuals(self) -> list[RationalFunction]:
        """The four linear covariance constraints, evaluated at this type."""
        q = self.q
        one = self.params.one()
        return [
            self.Q11 + q * self.Q12 - q * self.Q,
            self.Q11 + q * self.Q22 - q * one,
            self.Q12 + q * self.Q21 + one,
            q * self.Q21 + self.Q22 + self.Q,
        ]

    def structure_residuals(self) -> list[RationalFunction]:
        """The five coefficient identities used by the vector-field relations."""
        one = self.params.one()
        return [
            self.Q22 - self.Q11 * self.Q21 - self.Q11 / self.Qprime,
            self.Q12 + self.Q21 * (self.Q11 - self.Qprime),
            self.Q * (self.Q11 - self.Qprime) - self.Q11 * self.Q12,
            self.Q12 * (one + self.Qprime * self.Q21),
            self.Q22 * (self.Q11 - self.Qprime),
        ]

    def validate(self) -> None:
        for i, res in enumerate(self.covariance_residuals()):
            if not res.is_zero():
                raise InconsistentType(f"covariance constraint {i + 1} violated: {res}")
        for i, res in enumerate(self.structure_residuals()):
            if not res.is_zero():
                raise InconsistentType(f"structure identity {i + 1} violated: {res}")
        if not (self.Q12 - self.Q22 - (self.Q - self.params.one())).is_zero():
            raise InconsistentType("Q12 - Q22 = Q - 1 violated")

    def coefficient(self, name: str) -> RationalFunction:
        table = {
            "Q": self.Q, "Q11": self.Q11, "Q12": self.Q12,
            "Q21": self.Q21, "Q22": self.Q22, "Qp": self.Qprime,
        }
        return table[name]


# Rule coefficients of the extension sector, as functions of the type.

def inner_coordinate_coeffs(ct: CalculusType) -> dict[str, RationalFunction]:
    """Coefficients of the inner-derivation/coordinate commutation rules."""
    zero, one = ct.params.zero(), ct.params.one()
    return {
        "A1": ct.Q, "A2": ct.Q12, "A3": ct.Q21, "A4": zero,
        "A5": ct.Q11, "A6": zero, "A7": one, "A8": ct.Q22,
    }


def inner_differential_coeffs(ct: CalculusType) -> dict[str, RationalFunction]:
    """Coefficients of the inner-derivation/differential rules (engine values).

    The a8 entry is Q22/Q, forced by consistency with the two-form relations;
    the source table prints Q22/(Q*Q') instead, which fails that consistency
    whenever Q22 != 0 and Q' != 1 (see the eq83-a8-as-printed certificate).
    """
    zero, one = ct.params.zero(), ct.params.one()
    return {
        "a1": -one, "a2": -(ct.Q12 / ct.Q), "a3": -(ct.Q21 / ct.Q), "a4": zero,
        "a5": ct.Q11 / ct.Q, "a6": zero, "a7": one / ct.Q, "a8": ct.Q22 / ct.Q,
    }


def inner_partial_coeffs(ct: CalculusType) -> dict[str, RationalFunction]:
    """Coefficients of the inner-derivation/partial-derivative rules."""
    zero, one = ct.params.zero(), ct.params.one()
    return {
        "B1": one / ct.Q, "B2": zero,
        "B3": one / ct.Q21, "B4": -(ct.Q12 / (ct.Q11 * ct.Q21)),
        "B5": one / ct.Q11, "B6": -(ct.Q22 / (ct.Q11 * ct.Q21)),
        "B7": one, "B8": zero,
    }


def cartan_factors(ct: CalculusType) -> dict[str, RationalFunction]:
    """F and F' in i_x d - F d i_x = px and i_th d - F' d i_th = pth."""
    one = ct.params.one()
    return {"F": -(one / ct.Q), "Fprime": one / ct.Q}


# ----------------------------------------------------------------------------
# Rule table and rewrite engine
# ----------------------------------------------------------------------------

RuleKey = tuple  # (left gen, right gen, sign: -1 | 0 | +1)


class RuleTable:
    """Rewrite rules plus the memoized normal-ordering engine built on them."""

    def __init__(self, ct: CalculusType, rules: dict):
        self.ct = ct
        self.params = ct.params
        self.rules = rules
        self._memo: dict = {}
        self._derived_cache: dict = {}
        # realization of the exterior derivative; None while the core table
        # is being assembled (no d-words are touched during that phase)
        self._d_real: Element | None = None

    # -- construction ----------------------------------------------------------

    @classmethod
    def build(cls, ct: CalculusType, validate: bool = True) -> "RuleTable":
        if validate:
            ct.validate()
        P = ct.params
        one = P.one()
        q = ct.q
        Q, Q11, Q12, Q21, Q22, QP = ct.Q, ct.Q11, ct.Q12, ct.Q21, ct.Q22, ct.Qprime

        def inv(v: RationalFunction, what: str) -> RationalFunction:
            if v.is_zero():
                raise NonInvertibleRule(f"{what} is zero at this type")
            return one / v

        qi = inv(q, "q")
        Qi = inv(Q, "Q")
        Q11i = inv(Q11, "Q11")
        Q21i = inv(Q21, "Q21")
        QPi = inv(QP, "Q'")

        def el(*terms) -> Element:
            e = Element.zero(P)
            for coeff, m in terms:
                e = e + Element.monomial(P, m, coeff)
            return e

        rules: dict = {}

        def rule(left: int, right: int, sign: int, *terms) -> None:
            rules[(left, right, sign)] = el(*terms)

        # coordinates among themselves
        rule(TH, X, 1, (qi, mono(x=1, th=1)))
        rule(TH, TH, 0)
        # coordinates past differentials
        rule(X, DX, 1, (Q, mono(dx=1, x=1)))
        rule(X, DTH, 1, (Q11, mono(dth=1, x=1)), (Q12, mono(dx=1, th=1)))
        rule(TH, DX, 0, (Q21, mono(dx=1, th=1)), (Q22, mono(dth=1, x=1)))
        rule(TH, DTH, 0, (one, mono(dth=1, th=1)))
        # differentials among themselves
        rule(DTH, DX, 0, (QPi, mono(dx=1, dth=1)))
        rule(DX, DX, 0)
        # partial derivatives past coordinates and differentials
        rule(PX, DX, 0, (Qi, mono(dx=1, px=1)),
             (-(one + QPi * Q21i), mono(dth=1, pth=1)))
        rule(PX, DTH, 0, (Q11i, mono(dth=1, px=1)))
        rule(PX, X, 1, (one, ONE_MONO), (Q, mono(x=1, px=1)), (Q12, mono(th=1, pth=1)))
        rule(PX, TH, 0, (-Q21, mono(th=1, px=1)))
        rule(PTH, DX, 0, (Q21i, mono(dx=1, pth=1)))
        rule(PTH, DTH, 0, (one, mono(dth=1, pth=1)), (one - QP * Q11i, mono(dx=1, px=1)))
        rule(PTH, X, 1, (Q11, mono(x=1, pth=1)))
        rule(PTH, TH, 0, (one, ONE_MONO), (-one, mono(th=1, pth=1)), (-Q22, mono(x=1, px=1)))
        rule(PTH, PX, 0, (QPi, mono(px=1, pth=1)))
        rule(PTH, PTH, 0)
        # inner derivations
        A = inner_coordinate_coeffs(ct)
        a = inner_differential_coeffs(ct)
        B = inner_partial_coeffs(ct)
        F = cartan_factors(ct)
        rule(IX, DX, 0, (one, ONE_MONO), (a["a1"], mono(dx=1, ix=1)), (a["a2"], mono(dth=1, ith=1)))
        rule(IX, DTH, 0, (a["a3"], mono(dth=1, ix=1)))
        rule(IX, X, 1, (A["A1"], mono(x=1, ix=1)), (A["A2"], mono(th=1, ith=1)))
        rule(IX, TH, 0, (A["A3"], mono(th=1, ix=1)))
        rule(IX, PX, 0, (B["B1"], mono(px=1, ix=1)))
        rule(IX, PTH, 0, (B["B3"], mono(pth=1, ix=1)), (B["B4"], mono(px=1, ith=1)))
        rule(IX, IX, 0)
        rule(ITH, DX, 0, (a["a5"], mono(dx=1, ith=1)))
        rule(ITH, DTH, 0, (one, ONE_MONO), (a["a7"], mono(dth=1, ith=1)), (a["a8"], mono(dx=1, ix=1)))
        rule(ITH, X, 1, (A["A5"], mono(x=1, ith=1)))
        rule(ITH, TH, 0, (A["A7"], mono(th=1, ith=1)), (A["A8"], mono(x=1, ix=1)))
        rule(ITH, PX, 0, (B["B5"], mono(px=1, ith=1)), (B["B6"], mono(pth=1, ix=1)))
        rule(ITH, PTH, 0, (B["B7"], mono(pth=1, ith=1)))
        rule(ITH, IX, 0, (-((ct.Q12 - ct.Q) / ct.Q11), mono(ix=1, ith=1)))

        rt = cls(ct, rules)
        rt._derive_x_inverse_rules()
        rt._d_real = (Element.monomial(P, mono(dx=1, px=1))
                      + Element.monomial(P, mono(dth=1, pth=1)))
        rt._add_d_entries()
        rt._round_trip_check()
        return rt

    def d_element(self) -> Element:
        """The exterior derivative as a normal-ordered element."""
        if self._d_real is None:
            raise UnsupportedGenerator("this table has no exterior derivative")
        return self._d_real

    def _add_d_entries(self) -> None:
        """Realized products for every out-of-order pair involving d.

        The right-hand sides are completed products in the d-free basis, so
        the table stays closed even though d never survives normalization.
        """
        P = self.params
        dd = self._d_real
        unit = {g: Element.monomial(P, mono(**{GENS[g]: 1}))
                for g in (DX, DTH, TH, PX, PTH, IX, ITH)}
        xp = Element.monomial(P, mono(x=1))
        xm = Element.monomial(P, mono(x=-1))
        self.rules[(D, DX, 0)] = self.mul(dd, unit[DX])
        self.rules[(D, DTH, 0)] = self.mul(dd, unit[DTH])
        self.rules[(D, X, 1)] = self.mul(dd, xp)
        self.rules[(D, X, -1)] = self.mul(dd, xm)
        self.rules[(D, TH, 0)] = self.mul(dd, unit[TH])
        self.rules[(D, D, 0)] = self.mul(dd, dd)
        for g in (PX, PTH, IX, ITH):
            self.rules[(g, D, 0)] = self.mul(unit[g], dd)

    @classmethod
    def from_rules(cls, ct: CalculusType, rules: dict) -> "RuleTable":
        """Assemble a table from explicit rules (used by the constraint passes)."""
        return cls(ct, rules)

    def _derive_x_inverse_rules(self) -> None:
        P = self.params
        one = P.one()

        # monomial-type rules g*x = c*(x*g) invert directly
        for g in (TH, PTH, ITH):
            rhs = self.rules[(g, X, 1)]
            (m, c), = rhs.terms.items()
            mm = list(m)
            mm[X] -= 1
            mm[g] -= 1
            if any(mm) or c.is_zero():
                raise NonInvertibleRule(f"rule ({GENS[g]}, x) is not monomial-invertible")
            inv_m = list(ONE_MONO)
            inv_m[X] = -1
            inv_m[g] = 1
            self.rules[(g, X, -1)] = Element.monomial(P, tuple(inv_m), one / c)

        # x^-1 past dx: monomial inversion of x*dx = Q*dx*x
        rhs = self.rules[(X, DX, 1)]
        (m, c), = rhs.terms.items()
        self.rules[(X, DX, -1)] = Element.monomial(P, mono(dx=1, x=-1), one / c)

        # x^-1 past dth: solve dth = Q11*(x^-1 dth)*x + Q12*(x^-1 dx)*theta
        rhs = self.rules[(X, DTH, 1)]
        diag = mono(dth=1, x=1)
        c = rhs.coefficient(diag)
        if c.is_zero():
            raise NonInvertibleRule("rule (x, dth) has no invertible diagonal term")
        rest = rhs - Element.monomial(P, diag, c)
        known = Element.zero(P)
        for m, cc in rest.terms.items():
            known = known + self.mul_mono_mono(mono(x=-1), m).scale(cc)
        target = Element.monomial(P, mono(dth=1)) - known
        acc = Element.zero(P)
        for m, cc in target.terms.items():
            acc = acc + self.mul_mono_mono(m, mono(x=-1)).scale(cc)
        self.rules[(X, DTH, -1)] = acc.scale(one / c)

        # affine rules g*x = c*(x*g) + rest: solve g = (g*x)*x^-1 for g*x^-1
        for g in (PX, IX):
            rhs = self.rules[(g, X, 1)]
            diag = mono(x=1, **{GENS[g]: 1})
            c = rhs.coefficient(diag)
            if c.is_zero():
                raise NonInvertibleRule(f"rule ({GENS[g]}, x) has no invertible diagonal term")
            rest = rhs - Element.monomial(P, diag, c)
            known = Element.zero(P)
            for m, cc in rest.terms.items():
                known = known + self.mul_mono_mono(m, mono(x=-1)).scale(cc)
            target = Element.monomial(P, mono(**{GENS[g]: 1})) - known
            acc = Element.zero(P)
            for m, cc in target.terms.items():
                acc = acc + self.mul_mono_mono(mono(x=-1), m).scale(cc)
            self.rules[(g, X, -1)] = acc.scale(one / c)

    def _round_trip_check(self) -> None:
        for g in (TH, D, PX, PTH, IX, ITH):
            unit = self.normalize_word([GENS[g]])
            via = self.normalize_word([GENS[g], ("x", 1), ("x", -1)])
            if via != unit:
                raise NonInvertibleRule(f"round trip {GENS[g]}*x*x^-1 failed")
            via = self.normalize_word([GENS[g], ("x", -1), ("x", 1)])
            if via != unit:
                raise NonInvertibleRule(f"round trip {GENS[g]}*x^-1*x failed")
        for g, sign in ((DX, 1), (DTH, 1)):
            # x^-1*(x*g) and x*(x^-1*g) must both return the bare differential
            unit = Element.monomial(self.params, mono(**{GENS[g]: 1}))
            for s in (1, -1):
                rhs = self.rules[(X, g, s)]
                back = Element.zero(self.params)
                for m, cc in rhs.terms.items():
                    back = back + self.mul_mono_mono(mono(x=-s), m).scale(cc)
                if back != unit:
                    raise NonInvertibleRule(f"round trip x^{s}*{GENS[g]} failed")

    # -- multiplication ---------------------------------------------------------

    def mul_mono_letter(self, m: Monomial, letter: tuple) -> Element:
        key = (m, letter)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        g, s = letter
        if g == D:
            if self._d_real is None:
                raise UnsupportedGenerator("this table has no exterior derivative")
            out = Element.zero(self.params)
            for dm, dc in self._d_real.terms.items():
                out = out + self.mul_mono_mono(m, dm).scale(dc)
            self._memo[key] = out
            return out
        j = -1
        for i in range(NGENS - 1, -1, -1):
            if m[i]:
                j = i
                break
        if g > j:
            mm = list(m)
            mm[g] = s
            out = Element.monomial(self.params, tuple(mm))
        elif g == j:
            if g == X:
                mm = list(m)
                mm[X] += s
                out = Element.monomial(self.params, tuple(mm))
            elif g in NILPOTENT:
                out = Element.zero(self.params)
            else:
                mm = list(m)
                mm[g] += 1
                out = Element.monomial(self.params, tuple(mm))
        else:
            k = m[j]
            u = 1 if j != X else (1 if k > 0 else -1)
            if j == X:
                rkey = (j, g, u)
            elif g == X:
                rkey = (j, g, s)
            else:
                rkey = (j, g, 0)
            rule = self.rules.get(rkey)
            if rule is None:
                raise UnsupportedGenerator(
                    f"no rewrite rule for {GENS[j]}^{u if j == X else 1}*"
                    f"{GENS[g]}^{s if g == X else 1}")
            prefix = list(m)
            prefix[j] = k - u
            prefix_t = tuple(prefix)
            out = Element.zero(self.params)
            for rm, rc in rule.terms.items():
                out = out + self.mul_mono_mono(prefix_t, rm).scale(rc)
        self._memo[key] = out
        return out

    def mul_mono_mono(self, m1: Monomial, m2: Monomial) -> Element:
        if m1[D]:
            e = self._realize_mono(m1)
        else:
            e = Element.monomial(self.params, m1)
        for letter in mono_letters(m2):
            acc = Element.zero(self.params)
            for m, c in e.terms.items():
                acc = acc + self.mul_mono_letter(m, letter).scale(c)
            e = acc
        return e

    def _realize_mono(self, m: Monomial) -> Element:
        """Expand the d-slot of a user-built monomial into the d-free basis."""
        head = list(m)
        tail = [0] * NGENS
        for g in range(D, NGENS):
            head[g] = 0
        for g in range(D + 1, NGENS):
            tail[g] = m[g]
        e = self.mul_mono_letter(tuple(head), (D, 1))
        return self.mul(e, Element.monomial(self.params, tuple(tail)))

    def mul(self, a: Element, b: Element) -> Element:
        out = Element.zero(self.params)
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                out = out + self.mul_mono_mono(m1, m2).scale(c1 * c2)
        return out

    def mul_all(self, *factors: Element) -> Element:
        out = Element.one(self.params)
        for f in factors:
            out = self.mul(out, f)
        return out

    def normalize_word(self, word: Iterable[WordItem]) -> Element:
        e = Element.one(self.params)
        for letter in word_letters(word):
            acc = Element.zero(self.params)
            for m, c in e.terms.items():
                acc = acc + self.mul_mono_letter(m, letter).scale(c)
            e = acc
        return e

    def normalize(self, w) -> Element:
        """Normal-order a raw word or re-normalize an element."""
        if isinstance(w, Element):
            out = Element.zero(self.params)
            for m, c in w.terms.items():
                out = out + self.mul_mono_mono(ONE_MONO, m).scale(c)
            return out
        return self.normalize_word(w)

    def word(self, *items: WordItem) -> Element:
        return self.normalize_word(items)


def build_rule_table(ct: CalculusType, validate: bool = True) -> RuleTable:
    return RuleTable.build(ct, validate=validate)


def normalize(rt: RuleTable, w) -> Element:
    return rt.normalize(w)


def multiply(rt: RuleTable, a: Element, b: Element) -> Element:
    return rt.mul(a, b)


# ----------------------------------------------------------------------------
# Local confluence audit
# ----------------------------------------------------------------------------

@dataclass
class ConfluenceViolation:
    word: tuple
    first_steps: tuple
    residual: Element


@dataclass
class ConfluenceReport:
    max_len: int
    words_checked: int
    branch_pairs: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def _reducible(rt: RuleTable, a: tuple, b: tuple) -> RuleKey | None:
    """Rule key applicable to the adjacent letter pair a, b (or None)."""
    ga, sa = a
    gb, sb = b
    if ga == gb == X:
        return None
    if ga == gb and ga in NILPOTENT:
        return (ga, gb, 0)
    if ga > gb:
        if ga == X:
            return (ga, gb, sa)
        if gb == X:
            return (ga, gb, sb)
        return (ga, gb, 0)
    return None


def local_confluence_check(rt: RuleTable, max_len: int) -> ConfluenceReport:
    """Rewrite every short word via each applicable first step and compare.

    Words run over all nine generators with x occurring as x or x^-1; a
    violation records the word, the two diverging first steps, and the
    residual difference of the fully normalized branches.
    """
    if max_len < 3:
        raise ValueError("max_len must be at least 3")
    alphabet = [(g, 1) for g in range(NGENS)] + [(X, -1)]
    words_checked = 0
    branch_pairs = 0
    violations: list[ConfluenceViolation] = []
    for length in range(3, max_len + 1):
        for word in _itproduct(alphabet, repeat=length):
            steps = []
            for i in range(length - 1):
                if _reducible(rt, word[i], word[i + 1]) is not None:
                    steps.append(i)
            if len(steps) < 2:
                continue
            words_checked += 1
            branches = {}
            for i in steps:
                key = _reducible(rt, word[i], word[i + 1])
                rhs = rt.rules[key]
                prefix = Element.one(rt.params)
                for letter in word[:i]:
                    prefix = rt.mul(prefix, Element.monomial(rt.params, _letter_mono(letter)))
                out = rt.mul(prefix, rhs)
                for letter in word[i + 2:]:
                    out = rt.mul(out, Element.monomial(rt.params, _letter_mono(letter)))
                branches[i] = out
            base_i = steps[0]
            for i in steps[1:]:
                branch_pairs += 1
                residual = branches[base_i] - branches[i]
                if not residual.is_zero():
                    violations.append(ConfluenceViolation(word, (base_i, i), residual))
    return ConfluenceReport(max_len, words_checked, branch_pairs, violations)


def _letter_mono(letter: tuple) -> Monomial:
    g, s = letter
    mm = [0] * NGENS
    mm[g] = s
    return tuple(mm)
