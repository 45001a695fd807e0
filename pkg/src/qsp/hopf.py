"""Graded tensor products, Hopf costructures, dual pairing and actions.

Tensor slots hold normal-ordered elements; multiplication uses the sign rule
(A (x) B)(C (x) D) = (-1)^(deg B * deg C) (AC (x) BD), extended slotwise to
higher arity.  The coordinate Hopf algebra has group-like x and primitive-ish
theta; the one-form algebra W has primitive generators; the dual sector is
generated by the group-like scale operators T and K together with the odd
nilpotent Nb, where K acts diagonally with eigenvalue Q11^(degree).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .coeffs import ParamSet, QspError, RationalFunction
from .algebra import (
    X, TH,
    Element,
    GENS,
    Monomial,
    NotAFunctionArgument,
    ONE_MONO,
    RuleTable,
    mono,
    mono_is_function,
    mono_parity,
)


# ----------------------------------------------------------------------------
# Tensor elements with Koszul-signed multiplication
# ----------------------------------------------------------------------------

class TensorElement:
    """Finite coefficient map over tuples of canonical monomials."""

    __slots__ = ("params", "arity", "terms")

    def __init__(self, params: ParamSet, arity: int, terms: dict | None = None):
        self.params = params
        self.arity = arity
        self.terms: dict = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    @classmethod
    def zero(cls, params: ParamSet, arity: int) -> "TensorElement":
        return cls(params, arity)

    @classmethod
    def unit(cls, params: ParamSet, arity: int) -> "TensorElement":
        return cls(params, arity, {(ONE_MONO,) * arity: params.one()})

    @classmethod
    def of(cls, *slots: Element) -> "TensorElement":
        """Tensor product of elements, distributing over their terms."""
        params = slots[0].params
        out = cls(params, len(slots), {(ONE_MONO,) * len(slots): params.one()})
        for i, e in enumerate(slots):
            nxt = cls(params, len(slots))
            for key, c in out.terms.items():
                for m, cm in e.terms.items():
                    k = list(key)
                    k[i] = m
                    nxt._bump(tuple(k), c * cm)
            out = nxt
        return out

    def _bump(self, key: tuple, c: RationalFunction) -> None:
        cur = self.terms.get(key)
        s = c if cur is None else cur + c
        if s.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = s

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = TensorElement(self.params, self.arity, dict(self.terms))
        for k, c in other.terms.items():
            out._bump(k, c)
        return out

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.params, self.arity,
                             {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        cc = self.params.rf(c)
        return TensorElement(self.params, self.arity,
                             {k: v * cc for k, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.params == other.params and self.arity == other.arity
                and self.terms == other.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "<0 (x) 0>"
        bits = []
        for k, c in sorted(self.terms.items()):
            slot = " (x) ".join(_mono_repr(m) for m in k)
            bits.append(f"({c})*[{slot}]")
        return " + ".join(bits)


def _mono_repr(m: Monomial) -> str:
    s = "*".join((GENS[g] if e == 1 else f"{GENS[g]}^{e}") for g, e in enumerate(m) if e)
    return s or "1"


def _koszul_sign(ka: tuple, kb: tuple) -> int:
    """Sign for slotwise multiplication: factors of A cross earlier factors of B."""
    n = len(ka)
    exp = 0
    for i in range(1, n):
        pa = mono_parity(ka[i])
        if pa:
            for j in range(i):
                exp += pa * mono_parity(kb[j])
    return -1 if exp & 1 else 1


def tensor_multiply(rt: RuleTable, a: TensorElement, b: TensorElement) -> TensorElement:
    if a.arity != b.arity:
        raise ValueError("tensor arity mismatch")
    out = TensorElement(a.params, a.arity)
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign = _koszul_sign(ka, kb)
            coeff = ca * cb if sign > 0 else -(ca * cb)
            slots = [rt.mul_mono_mono(ma, mb) for ma, mb in zip(ka, kb)]
            _distribute(out, slots, coeff)
    return out


def _distribute(out: TensorElement, slots: Sequence[Element], coeff) -> None:
    acc = [((), coeff)]
    for e in slots:
        nxt = []
        for key, c in acc:
            for m, cm in e.terms.items():
                nxt.append((key + (m,), c * cm))
        acc = nxt
    for key, c in acc:
        out._bump(key, c)


def tensor_apply_slot(te: TensorElement, slot: int,
                      fn: Callable[[Element], Element],
                      fn_parity: int = 0) -> TensorElement:
    """Apply an Element->Element map to one slot, with the Koszul sign an odd
    map picks up crossing the parities of the slots to its left."""
    out = TensorElement(te.params, te.arity)
    for key, c in te.terms.items():
        sign = 1
        if fn_parity & 1:
            crossed = sum(mono_parity(key[j]) for j in range(slot))
            if crossed & 1:
                sign = -1
        image = fn(Element.monomial(te.params, key[slot], te.params.one()))
        for m, cm in image.terms.items():
            k = list(key)
            k[slot] = m
            out._bump(tuple(k), (c * cm) if sign > 0 else -(c * cm))
    return out


def tensor_expand_slot(te: TensorElement, slot: int,
                       fn: Callable[[Monomial], TensorElement]) -> TensorElement:
    """Replace one slot by a rank-2 image (used for coassociativity checks)."""
    out = TensorElement(te.params, te.arity + 1)
    for key, c in te.terms.items():
        image = fn(key[slot])
        for k2, c2 in image.terms.items():
            k = key[:slot] + k2 + key[slot + 1:]
            out._bump(k, c * c2)
    return out


# ----------------------------------------------------------------------------
# Hopf costructures on the coordinate algebra
# ----------------------------------------------------------------------------

def _require_function(e: Element) -> None:
    if not e.is_function_sector():
        raise NotAFunctionArgument("expected a coordinate-sector element")


def coproduct_mono(rt: RuleTable, m: Monomial) -> TensorElement:
    """Coproduct of a coordinate monomial x^k th^eps."""
    P = rt.params
    if not mono_is_function(m):
        raise NotAFunctionArgument("expected a coordinate monomial")
    k, eps = m[X], m[TH]
    xk = mono(x=k)
    out = TensorElement(P, 2, {(xk, xk): P.one()})
    if eps:
        dth = TensorElement(P, 2, {
            (mono(th=1), mono(x=1)): P.one(),
            (mono(x=1), mono(th=1)): P.one(),
        })
        out = tensor_multiply(rt, out, dth)
    return out


def coproduct_A(rt: RuleTable, e: Element) -> TensorElement:
    _require_function(e)
    out = TensorElement(rt.params, 2)
    for m, c in e.terms.items():
        out = out + coproduct_mono(rt, m).scale(c)
    return out


def counit_A(rt: RuleTable, e: Element) -> RationalFunction:
    _require_function(e)
    total = rt.params.zero()
    for m, c in e.terms.items():
        if not m[TH]:
            total = total + c
    return total


def antipode_A(rt: RuleTable, e: Element) -> Element:
    """Graded antihomomorphism with S(x) = x^-1 and S(th) = -x^-1 th x^-1."""
    _require_function(e)
    P = rt.params
    s_th = rt.normalize_word([("x", -1), "th", ("x", -1)]).scale(-1)
    out = Element.zero(P)
    for m, c in e.terms.items():
        k, eps = m[X], m[TH]
        img = Element.monomial(P, mono(x=-k))
        if eps:
            # S(x^k th) = S(th) S(x^k); both coordinate factors, x^k is even
            img = rt.mul(s_th, img)
        out = out + img.scale(c)
    return out


def hopf_axiom_check(rt: RuleTable, e: Element) -> list:
    """Residuals of coassociativity, both counit laws and both antipode laws."""
    P = rt.params
    delta = coproduct_A(rt, e)
    coassoc = (tensor_expand_slot(delta, 0, lambda m: coproduct_mono(rt, m))
               - tensor_expand_slot(delta, 1, lambda m: coproduct_mono(rt, m)))

    def collapse(te: TensorElement, fn_left, fn_right) -> Element:
        out = Element.zero(P)
        for (m1, m2), c in te.terms.items():
            l = fn_left(Element.monomial(P, m1))
            r = fn_right(Element.monomial(P, m2))
            out = out + rt.mul(l, r).scale(c)
        return out

    ident = rt.normalize(e)
    counit_l = collapse(delta, lambda a: Element.scalar(P, counit_A(rt, a)),
                        lambda a: a) - ident
    counit_r = collapse(delta, lambda a: a,
                        lambda a: Element.scalar(P, counit_A(rt, a))) - ident
    eps_unit = Element.scalar(P, counit_A(rt, e))
    antipode_l = collapse(delta, lambda a: antipode_A(rt, a), lambda a: a) - eps_unit
    antipode_r = collapse(delta, lambda a: a, lambda a: antipode_A(rt, a)) - eps_unit
    return [coassoc, counit_l, counit_r, antipode_l, antipode_r]


# ----------------------------------------------------------------------------
# The one-form Hopf algebra W
# ----------------------------------------------------------------------------

W_GENS = ("wx", "wth")
W_PARITY = {"wx": 1, "wth": 0}


def maurer_forms(rt: RuleTable) -> dict[str, Element]:
    wx = rt.normalize_word(["dx", ("x", -1)])
    wth = (rt.normalize_word(["dth", ("x", -1)])
           - rt.normalize_word(["dx", ("x", -1), "th", ("x", -1)]))
    return {"wx": wx, "wth": wth}


def _w_expand(rt: RuleTable, word: Sequence[str]) -> Element:
    forms = maurer_forms(rt)
    out = Element.one(rt.params)
    for g in word:
        out = rt.mul(out, forms[g])
    return out


def _w_word_parity(word: Sequence[str]) -> int:
    return sum(W_PARITY[g] for g in word) & 1


def costructures_W(rt: RuleTable, kind: str, word: Sequence[str]):
    """Coproduct, counit or antipode of a word in the one-forms wx, wth.

    The coproduct multiplies the primitive generator coproducts with Koszul
    signs at the level of form words and only then expands the slots, so the
    result is a TensorElement over the main algebra.
    """
    P = rt.params
    for g in word:
        if g not in W_GENS:
            raise QspError(f"not a one-form generator: {g!r}")
    if kind == "counit":
        return P.one() if not word else P.zero()
    if kind == "antipode":
        # graded antihomomorphism with S(w) = -w on generators
        sign = (-1) ** len(word)
        koszul = 0
        for i in range(len(word)):
            for j in range(i + 1, len(word)):
                koszul += W_PARITY[word[i]] * W_PARITY[word[j]]
        if koszul & 1:
            sign = -sign
        return _w_expand(rt, tuple(reversed(word))).scale(sign)
    if kind != "coproduct":
        raise ValueError(f"unknown costructure {kind!r}")
    # coproduct: product of (w (x) 1 + 1 (x) w) over the word, in W-land
    terms: dict[tuple, Fraction] = {((), ()): Fraction(1)}
    for g in word:
        nxt: dict[tuple, Fraction] = {}
        for (a, b), c in terms.items():
            # (a (x) b)(g (x) 1): sign from b crossing g
            s = -1 if (_w_word_parity(b) * W_PARITY[g]) & 1 else 1
            key = (a + (g,), b)
            nxt[key] = nxt.get(key, Fraction(0)) + c * s
            key = (a, b + (g,))
            nxt[key] = nxt.get(key, Fraction(0)) + c
        terms = nxt
    out = TensorElement(P, 2)
    for (a, b), c in terms.items():
        te = TensorElement.of(_w_expand(rt, a), _w_expand(rt, b)).scale(P.const(c))
        out = out + te
    return out


def w_relation_residuals(rt: RuleTable) -> list[TensorElement]:
    """Coproduct residuals of the one-form relations (well-definedness)."""
    comm = (costructures_W(rt, "coproduct", ("wx", "wth"))
            - costructures_W(rt, "coproduct", ("wth", "wx")))
    square = costructures_W(rt, "coproduct", ("wx", "wx"))
    return [comm, square]


def w_antipode_residuals(rt: RuleTable) -> list[Element]:
    """Antipode residuals of the one-form relations."""
    comm = (costructures_W(rt, "antipode", ("wx", "wth"))
            - costructures_W(rt, "antipode", ("wth", "wx")))
    square = costructures_W(rt, "antipode", ("wx", "wx"))
    return [comm, square]


# ----------------------------------------------------------------------------
# The dual sector: T (group-like), K (diagonal scale), Nb (odd, nilpotent)
# ----------------------------------------------------------------------------

UKey = tuple  # (T power, K power, Nb power in {0, 1})


class UElement:
    """Linear combination of T^a K^b Nb^c; the three generators commute."""

    __slots__ = ("params", "terms")

    def __init__(self, params: ParamSet, terms: dict | None = None):
        self.params = params
        self.terms: dict = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    @classmethod
    def unit(cls, params: ParamSet) -> "UElement":
        return cls(params, {(0, 0, 0): params.one()})

    @classmethod
    def gen_T(cls, params: ParamSet, power: int = 1) -> "UElement":
        return cls(params, {(power, 0, 0): params.one()})

    @classmethod
    def gen_K(cls, params: ParamSet, power: int = 1) -> "UElement":
        return cls(params, {(0, power, 0): params.one()})

    @classmethod
    def gen_nabla(cls, params: ParamSet) -> "UElement":
        return cls(params, {(0, 0, 1): params.one()})

    def _bump(self, k: UKey, c: RationalFunction) -> None:
        cur = self.terms.get(k)
        s = c if cur is None else cur + c
        if s.is_zero():
            self.terms.pop(k, None)
        else:
            self.terms[k] = s

    def __add__(self, other: "UElement") -> "UElement":
        out = UElement(self.params, dict(self.terms))
        for k, c in other.terms.items():
            out._bump(k, c)
        return out

    def __neg__(self) -> "UElement":
        return UElement(self.params, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "UElement") -> "UElement":
        return self + (-other)

    def scale(self, c) -> "UElement":
        cc = self.params.rf(c)
        return UElement(self.params, {k: v * cc for k, v in self.terms.items()})

    def mul(self, other: "UElement") -> "UElement":
        out = UElement(self.params)
        for (a1, b1, n1), c1 in self.terms.items():
            for (a2, b2, n2), c2 in other.terms.items():
                if n1 and n2:
                    continue  # Nb^2 = 0
                out._bump((a1 + a2, b1 + b2, n1 + n2), c1 * c2)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UElement):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "U<0>"
        bits = []
        for (a, b, n), c in sorted(self.terms.items()):
            w = "*".join(filter(None, [
                f"T^{a}" if a else "",
                f"K^{b}" if b else "",
                "Nb" if n else "",
            ])) or "1"
            bits.append(f"({c})*{w}")
        return "U<" + " + ".join(bits) + ">"


def u_key_parity(k: UKey) -> int:
    return k[2] & 1


def u_coproduct_key(k: UKey):
    """Coproduct terms of a monomial key as (left, right, coefficient sign)."""
    a, b, n = k
    if not n:
        return [((a, b, 0), (a, b, 0), 1)]
    # (T^a K^b (x) T^a K^b) * (Nb (x) 1 + K (x) Nb); all crossings are even
    return [((a, b, 1), (a, b, 0), 1), ((a, b + 1, 0), (a, b, 1), 1)]


def u_counit(u: UElement) -> RationalFunction:
    total = u.params.zero()
    for (a, b, n), c in u.terms.items():
        if not n:
            total = total + c
    return total


def u_antipode(u: UElement, variant: str = "corrected") -> UElement:
    """Antipode: S(T)=T^-1, S(K)=K^-1, S(Nb) = -K^s Nb.

    variant 'corrected' uses s = -1 (passes the antipode axioms); variant
    'as-printed' uses s = +1 (the certified failing form).
    """
    s = -1 if variant == "corrected" else 1
    out = UElement(u.params)
    for (a, b, n), c in u.terms.items():
        key = (-a, -b + (s * n), n)
        out._bump(key, -c if n else c)
    return out


def u_act(rt: RuleTable, u: UElement, e: Element) -> Element:
    """Left action as operators: Nb acts as x*pth, T and K act diagonally."""
    _require_function(e)
    P = rt.params
    nb_op = Element.monomial(P, mono(x=1, pth=1))
    out = Element.zero(P)
    for (a, b, n), c in u.terms.items():
        for m, cm in e.terms.items():
            img = Element.monomial(P, m, cm)
            if n:
                img = rt.mul(nb_op, img).vacuum()
            scaled = Element.zero(P)
            for mm, cc in img.terms.items():
                deg = mm[X] + mm[TH]
                factor = (rt.ct.Q ** (a * deg)) * (rt.ct.Q11 ** (b * deg))
                scaled = scaled + Element.monomial(P, mm, cc * factor)
            out = out + scaled.scale(c)
    return out


def k_eigenvalue(rt: RuleTable, m: Monomial) -> RationalFunction:
    """Diagonal K-eigenvalue Q11^(degree) of a coordinate monomial."""
    return rt.ct.Q11 ** (m[X] + m[TH])


def _pair_letter(rt: RuleTable, k: UKey, letter: tuple) -> RationalFunction:
    g, s = letter
    a, b, n = k
    P = rt.params
    if g == X:
        if n:
            return P.zero()
        return (rt.ct.Q ** (a * s)) * (rt.ct.Q11 ** (b * s))
    if g == TH:
        if not n:
            return P.zero()
        return (rt.ct.Q ** a) * (rt.ct.Q11 ** b)
    raise NotAFunctionArgument(f"cannot pair against generator {GENS[g]}")


def _pair_word(rt: RuleTable, k: UKey, letters: tuple) -> RationalFunction:
    if not letters:
        return rt.params.one() if not k[2] else rt.params.zero()
    if len(letters) == 1:
        return _pair_letter(rt, k, letters[0])
    first, rest = letters[0], letters[1:]
    total = rt.params.zero()
    lp = 1 if first[0] == TH else 0
    for k1, k2, sgn in u_coproduct_key(k):
        c = _pair_letter(rt, k1, first)
        if c.is_zero():
            continue
        if sgn < 0 or (u_key_parity(k2) * lp) & 1:
            c = -c
        total = total + c * _pair_word(rt, k2, rest)
    return total


def pair(rt: RuleTable, u: UElement, a: Element) -> RationalFunction:
    """Dual evaluation <u, a> via iterated coproducts from the base pairings."""
    _require_function(a)
    total = rt.params.zero()
    for k, cu in u.terms.items():
        for m, cm in a.terms.items():
            letters = tuple((g, s) for g, s in _mono_as_letters(m))
            total = total + cu * cm * _pair_word(rt, k, letters)
    return total


def _mono_as_letters(m: Monomial):
    for g, e in ((X, m[X]), (TH, m[TH])):
        if not e:
            continue
        s = 1 if e > 0 else -1
        for _ in range(abs(e)):
            yield (g, s)


def left_act(rt: RuleTable, u: UElement, a: Element) -> Element:
    """U[a] = a_(1) <u, a_(2)>, computed through the coordinate coproduct."""
    _require_function(a)
    P = rt.params
    out = Element.zero(P)
    for m, cm in a.terms.items():
        delta = coproduct_mono(rt, m)
        for (m1, m2), c in delta.terms.items():
            val = pair(rt, u, Element.monomial(P, m2))
            if not val.is_zero():
                out = out + Element.monomial(P, m1, cm * c * val)
    return out


def u_coproduct_square_nabla(params: ParamSet) -> list:
    """Koszul expansion of (Nb (x) 1 + K (x) Nb)^2 as (key, key, coeff) terms."""
    terms: dict = {}
    parts = [((0, 0, 1), (0, 0, 0)), ((0, 1, 0), (0, 0, 1))]
    for (l1, r1) in parts:
        for (l2, r2) in parts:
            if (l1[2] and l2[2]) or (r1[2] and r2[2]):
                continue  # Nb^2 = 0 inside one slot
            sign = -1 if (u_key_parity(r1) * u_key_parity(l2)) & 1 else 1
            key = ((l1[0] + l2[0], l1[1] + l2[1], l1[2] + l2[2]),
                   (r1[0] + r2[0], r1[1] + r2[1], r1[2] + r2[2]))
            terms[key] = terms.get(key, 0) + sign
    return [(k, v) for k, v in terms.items() if v]


def coproduct_U_residuals(rt: RuleTable, f: Monomial, g: Monomial) -> list[Element]:
    """Action residuals of the twisted Leibniz rules on a pair of monomials.

    The H rule is H(fg) = Hf*g + Tf*Hg at every type.  The Nb rule carries,
    besides the K-twist, a correction term V(f)*Hg with V supported on odd
    monomials (V(x^k th) = Q11^k Q22 x^(k+1)); the correction vanishes at the
    types with Q22 = 0, where the rule takes its familiar two-term form.
    """
    P = rt.params
    H = Element.monomial(P, mono(x=1, px=1)) + Element.monomial(P, mono(th=1, pth=1))
    nb = Element.monomial(P, mono(x=1, pth=1))

    def act(op: Element, w: Element) -> Element:
        return rt.mul(op, w).vacuum()

    fe = Element.monomial(P, f)
    ge = Element.monomial(P, g)
    fg = rt.mul(fe, ge)
    t_of_f = fe + act(H, fe).scale(rt.ct.Q - P.one())
    res_h = act(H, fg) - rt.mul(act(H, fe), ge) - rt.mul(t_of_f, act(H, ge))

    sign = -1 if mono_parity(f) else 1
    k_of_f = fe.scale(k_eigenvalue(rt, f))
    res_n = act(nb, fg) - rt.mul(act(nb, fe), ge)
    twisted = rt.mul(k_of_f, act(nb, ge))
    if f[TH]:
        v_of_f = Element.monomial(P, mono(x=f[X] + 1),
                                  (rt.ct.Q11 ** f[X]) * rt.ct.Q22)
        twisted = twisted + rt.mul(v_of_f, act(H, ge))
    res_n = res_n - twisted.scale(sign)
    return [res_h, res_n]


def antipode_axiom_operator(rt: RuleTable, u: UElement, variant: str,
                            side: str = "left") -> UElement:
    """m(S (x) id)Delta(u) - eps(u) (side 'left') or the mirrored law."""
    P = rt.params
    acc = UElement(P)
    for k, cu in u.terms.items():
        for k1, k2, sgn in u_coproduct_key(k):
            coeff = cu if sgn > 0 else -cu
            u1 = UElement(P, {k1: P.one()})
            u2 = UElement(P, {k2: P.one()})
            if side == "left":
                term = u_antipode(u1, variant).mul(u2)
            else:
                term = u1.mul(u_antipode(u2, variant))
            acc = acc + term.scale(coeff)
        eps = P.zero() if k[2] else P.one()
        acc = acc - UElement(P, {(0, 0, 0): cu * eps})
    return acc


def antipode_U_residuals(rt: RuleTable, bound: int) -> dict[str, Element]:
    """First nonzero action residual of both antipode laws on the coordinate
    basis with |x-degree| <= bound, for u in {K, Nb} and both Nb variants."""
    P = rt.params

    def residual(u: UElement, variant: str) -> Element:
        for side in ("left", "right"):
            z = antipode_axiom_operator(rt, u, variant, side)
            if not z.terms:
                continue
            for m in _coordinate_basis(bound):
                val = u_act(rt, z, Element.monomial(P, m))
                if not val.is_zero():
                    return val
        return Element.zero(P)

    return {
        "K": residual(UElement.gen_K(P), "corrected"),
        "nabla-corrected": residual(UElement.gen_nabla(P), "corrected"),
        "nabla-as-printed": residual(UElement.gen_nabla(P), "as-printed"),
    }


def _coordinate_basis(bound: int):
    for k in range(-bound, bound + 1):
        for eps in (0, 1):
            yield mono(x=k, th=eps)


def coordinate_basis(bound: int) -> list[Monomial]:
    return list(_coordinate_basis(bound))
