"""Derived operators, actions, closed forms, and the identity catalog.

Identity ids carry stable display anchors ("eq42-H-x" is the H-versus-x
commutation rule of display (42)).  The suffix "-as-printed" marks a
certificate entry that re-checks a relation exactly as originally displayed
where the engine derives a different coefficient; such entries are expected
to FAIL at the parameter families where the difference is visible, and they
never affect the process exit code.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fnmatch import fnmatchcase
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .coeffs import QspError, RationalFunction, qnumber
from .algebra import (
    TH, X,
    CalculusType,
    Element,
    NotAFunctionArgument,
    RuleTable,
    inner_coordinate_coeffs,
    inner_differential_coeffs,
    mono,
)
from . import covariance as cov
from . import hopf
from .exprio import parse_element


class UnknownIdentity(QspError):
    pass


# ----------------------------------------------------------------------------
# Derived symbols
# ----------------------------------------------------------------------------

DERIVED_NAMES = ("H", "Nb", "T", "wx", "wth", "Lx", "Lth")


def expand_derived(rt: RuleTable, name: str) -> Element:
    """Normal-ordered expansion of a derived operator symbol."""
    cache = rt._derived_cache
    hit = cache.get(name)
    if hit is not None:
        return hit
    P = rt.params
    if name == "H":
        e = (Element.monomial(P, mono(x=1, px=1))
             + Element.monomial(P, mono(th=1, pth=1)))
    elif name == "Nb":
        e = Element.monomial(P, mono(x=1, pth=1))
    elif name == "T":
        e = Element.one(P) + expand_derived(rt, "H").scale(rt.ct.Q - P.one())
    elif name == "wx":
        e = hopf.maurer_forms(rt)["wx"]
    elif name == "wth":
        e = hopf.maurer_forms(rt)["wth"]
    elif name == "Lx":
        e = rt.normalize_word(["ix", "d"]) + rt.normalize_word(["d", "ix"])
    elif name == "Lth":
        e = rt.normalize_word(["ith", "d"]) - rt.normalize_word(["d", "ith"])
    else:
        return None
    cache[name] = e
    return e


def E(rt: RuleTable, text: str) -> Element:
    """Parse an expression in the full symbol table of this engine."""
    return parse_element(rt, text, expand_derived)


# ----------------------------------------------------------------------------
# Actions and closed forms
# ----------------------------------------------------------------------------

def act_on_function(rt: RuleTable, op: Element, f: Element) -> Element:
    """Apply an operator to a form-valued function: normalize, then drop every
    term that still carries derivative or inner-derivation factors."""
    if not f.is_form_sector():
        raise NotAFunctionArgument("the argument must be free of operator factors")
    return rt.mul(op, f).vacuum()


def exterior_derivative(rt: RuleTable, w: Element) -> Element:
    return act_on_function(rt, rt.d_element(), w)


def closed_form_H(ct: CalculusType, m: int, eps: int) -> RationalFunction:
    """Scalar eigenvalue of the degree operator on x^m th^eps."""
    return qnumber(m + eps, ct.Q)


def number_op(m: int, eps: int) -> int:
    """Eigenvalue of the number operator on x^m th^eps."""
    return m + eps


# ----------------------------------------------------------------------------
# Verification results
# ----------------------------------------------------------------------------

@dataclass
class VerifyResult:
    identityId: str
    paperAnchor: str
    status: str
    residual: Element
    elapsedMillis: int

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


@dataclass(frozen=True)
class Identity:
    identityId: str
    paperAnchor: str
    kind: str  # "word-level" | "action-level"
    run: Callable[[RuleTable, int], Element]


KNOWN_DISCREPANCY_IDS = frozenset({
    "eq46-nabla-omegath-as-printed",
    "eq51-first-as-printed",
    "eq56-nabla-monomials-as-printed",
    "eq58-monomial-omegax-as-printed",
    "eq64-antipode-as-printed",
    "eq75-fifth-as-printed",
    "eq83-a8-as-printed",
    "eq85-ith-dth-as-printed",
    "eq94-Lth-th-as-printed",
    "eq95-Lth-dth-as-printed",
    "eq98-Lth-ith-as-printed",
})


def _first_nonzero(residuals: Iterable[Element]) -> Element:
    first = None
    for r in residuals:
        if first is None:
            first = r
        if not r.is_zero():
            return r
    assert first is not None
    return first


def _scalar_residuals(rt: RuleTable, values: Iterable[RationalFunction]) -> Element:
    residuals = [Element.scalar(rt.params, v) for v in values]
    return _first_nonzero(residuals)


def _tensor_to_element_marker(rt: RuleTable, residuals) -> Element:
    """Flatten tensor residuals to an element certificate (slot products)."""
    P = rt.params
    for te in residuals:
        if not te.is_zero():
            out = Element.zero(P)
            for key, c in te.terms.items():
                prod = Element.one(P)
                for m in key:
                    prod = rt.mul(prod, Element.monomial(P, m))
                out = out + prod.scale(c)
            if not out.is_zero():
                return out
            # slots multiply to zero; certify with the coefficient alone
            return Element.scalar(P, next(iter(te.terms.values())))
    return Element.zero(P)


# -- catalog construction ------------------------------------------------------

_CATALOG: list[Identity] = []


def _add(identity: Identity) -> None:
    _CATALOG.append(identity)


def _word(id_: str, anchor: str, template: str) -> None:
    lhs, rhs = template.split("==")

    def run(rt: RuleTable, bound: int) -> Element:
        return E(rt, lhs) - E(rt, rhs)

    _add(Identity(id_, anchor, "word-level", run))


def _word_ranged(id_: str, anchor: str, template_fn: Callable[[int], str],
                 ms: Iterable[int]) -> None:
    ms = tuple(ms)

    def run(rt: RuleTable, bound: int) -> Element:
        residuals = []
        for m in ms:
            lhs, rhs = template_fn(m).split("==")
            residuals.append(E(rt, lhs) - E(rt, rhs))
        return _first_nonzero(residuals)

    _add(Identity(id_, anchor, "word-level", run))


def _scalar(id_: str, anchor: str,
            fn: Callable[[RuleTable], Iterable[RationalFunction]]) -> None:
    def run(rt: RuleTable, bound: int) -> Element:
        return _scalar_residuals(rt, fn(rt))

    _add(Identity(id_, anchor, "word-level", run))


def _action(id_: str, anchor: str,
            fn: Callable[[RuleTable, int], Element]) -> None:
    _add(Identity(id_, anchor, "action-level", fn))


# coordinate and differential module relations --------------------------------

_word("eq5-coordinates", "(5)", "x*th == q*th*x")
_word("eq5-theta-square", "(5)", "th*th == 0")
_word("eq11-x-dx", "(11)", "x*dx == Q*dx*x")
_word("eq11-x-dth", "(11)", "x*dth == Q11*dth*x + Q12*dx*th")
_word("eq11-th-dx", "(11)", "th*dx == Q21*dx*th + Q22*dth*x")
_word("eq11-th-dth", "(11)", "th*dth == dth*th")
_word("eq12-two-form", "(12)", "dx*dth == Qp*dth*dx")
_word("eq12-dx-square", "(12)", "dx*dx == 0")

_scalar("eq18-covariance-constraints", "(18)",
        lambda rt: rt.ct.covariance_residuals())


def _families_residuals(rt: RuleTable):
    out = []
    for mode, conditions, params in (
        ("I", {"Q12": 0, "Q22": 0}, None),
        ("II", {"Q22": 0, "Q": "r"}, None),
        ("III", {"Q12": 0, "Q": "p"}, None),
    ):
        want = CalculusType.by_name(mode)
        got = cov.solve_family(conditions, want.params)
        for name in ("Q", "Q11", "Q12", "Q21", "Q22", "Qp"):
            diff = got.coefficient(name) - want.coefficient(name)
            # report in the engine's coefficient field: nonzero iff mismatch
            out.append(rt.params.zero() if diff.is_zero() else rt.params.one())
    return out


_scalar("eq23-25-families", "(23)-(25)", _families_residuals)


def _eq26_run(rt: RuleTable, bound: int) -> Element:
    words = [["x"], ["th"], [("x", -1)], ["x", "th"], ["th", "x"],
             ["x", "x"], [("x", -1), "th"]]
    residuals = []
    for w in words:
        residuals.extend(cov.bicovariance_residuals(rt, w))
    return _tensor_to_element_marker(rt, residuals)


_action("eq26-bicovariance", "(26)", _eq26_run)


def _coaction_axioms_run(side):
    def run(rt: RuleTable, bound: int) -> Element:
        words = [["x"], ["th"], ["dx"], ["dth"], [("x", -1)],
                 ["x", "th"], ["x", "dth"], ["th", "dx"], ["dx", "th"],
                 ["dx", "dth"], [("x", -1), "dx"]]
        tensors = []
        elements = []
        for w in words:
            t, e = cov.coaction_axiom_residuals(rt, w, side)
            tensors.append(t)
            elements.append(e)
        marker = _tensor_to_element_marker(rt, tensors)
        if not marker.is_zero():
            return marker
        return _first_nonzero(elements)

    return run


_action("eq14-right-coaction-axioms", "(14)", _coaction_axioms_run("right"))
_action("eq20-left-coaction-axioms", "(20)", _coaction_axioms_run("left"))


def _eq17_note_run(rt: RuleTable, bound: int) -> Element:
    cc = cov.generate_covariance_constraints()
    ok = (cov.spans_match(cc.right, cov.expected_covariance_constraints())
          and not cc.left)
    return Element.zero(rt.params) if ok else Element.one(rt.params)


_add(Identity("eq17-constraint-extraction", "(17)-(18)", "action-level", _eq17_note_run))


def _eq9_run(rt: RuleTable, bound: int) -> Element:
    P = rt.params
    letters = [("x", 1), ("x", -1), ("th", 1)]
    words = [[]]
    for _ in range(3):
        words += [w + [l] for w in words for l in letters]
    seen = set()
    for w in words:
        e = rt.normalize_word(w)
        if e.is_zero():
            continue
        key = tuple(sorted(e.terms))
        if key in seen:
            continue
        seen.add(key)
        for res in hopf.hopf_axiom_check(rt, e):
            if isinstance(res, hopf.TensorElement):
                marker = _tensor_to_element_marker(rt, [res])
                if not marker.is_zero():
                    return marker
            elif not res.is_zero():
                return res
    return Element.zero(P)


_action("eq9-hopf-axioms", "(9)", _eq9_run)


def _eq6_run(rt: RuleTable, bound: int) -> Element:
    relation = E(rt, "x*th - q*th*x")
    res1 = hopf.coproduct_A(rt, relation)
    sq = hopf.tensor_multiply(
        rt, hopf.coproduct_A(rt, E(rt, "th")), hopf.coproduct_A(rt, E(rt, "th")))
    return _tensor_to_element_marker(rt, [res1, sq])


_action("eq6-coproduct-kills-relations", "(6)", _eq6_run)


def _eq12_coaction_run(rt: RuleTable, bound: int) -> Element:
    te = cov.delta_R(rt, ["dx", "dth"]) - cov.delta_R(rt, ["dth", "dx"]).scale(rt.ct.Qprime)
    return _tensor_to_element_marker(rt, [te])


_action("eq12-coaction-compatible", "(12)", _eq12_coaction_run)

# Cartan-Maurer forms ----------------------------------------------------------

_word("eq28-x-omegax", "(28)", "x*wx == Q*wx*x")
_word("eq28-x-omegath", "(28)", "x*wth == Q11*wth*x")
_word("eq28-th-omegax", "(28)", "th*wx == -Q*wx*th + Q22*wth*x")
_word("eq28-th-omegath", "(28)", "th*wth == Q11*wth*th")
_word("eq29-omega-commute", "(29)", "wx*wth == wth*wx")
_word("eq29-omegax-square", "(29)", "wx*wx == 0")


def _eq30_run(rt: RuleTable, bound: int) -> Element:
    return _tensor_to_element_marker(rt, hopf.w_relation_residuals(rt))


_action("eq30-w-coproduct-relations", "(30)", _eq30_run)


def _eq32_run(rt: RuleTable, bound: int) -> Element:
    return _first_nonzero(hopf.w_antipode_residuals(rt))


_action("eq32-w-antipode-relations", "(32)", _eq32_run)

# partial derivatives ----------------------------------------------------------

_word("eq33-exterior-via-partials", "(33)", "d == dx*px + dth*pth")
_word("eq34-px-x", "(34)", "px*x == 1 + Q*x*px + Q12*th*pth")
_word("eq34-px-th", "(34)", "px*th == -Q21*th*px")
_word("eq34-pth-x", "(34)", "pth*x == Q11*x*pth")
_word("eq34-pth-th", "(34)", "pth*th == 1 - th*pth - Q22*x*px")
_word("eq35-deriv-commute", "(35)", "px*pth == Qp*pth*px")
_word("eq35-pth-square", "(35)", "pth*pth == 0")
_word("eq36-px-dx", "(36)", "px*dx == Q^-1*dx*px - (1 + Qp^-1*Q21^-1)*dth*pth")
_word("eq36-px-dth", "(36)", "px*dth == Q11^-1*dth*px")
_word("eq36-pth-dx", "(36)", "pth*dx == Q21^-1*dx*pth")
_word("eq36-pth-dth", "(36)", "pth*dth == dth*pth + (1 - Qp*Q11^-1)*dx*px")
_word("eq37-px-d", "(37)", "px*d == Q^-1*d*px")
_word("eq37-pth-d", "(37)", "pth*d == -Q^-1*d*pth")

# quantum Lie superalgebra -----------------------------------------------------

_word("eq38-maurer-dx", "(38)", "wx*x == dx")
_word("eq38-maurer-dth", "(38)", "wx*th + wth*x == dth")
_word("eq39-d-decomposition", "(39)", "wx*H + wth*Nb == d")


def _eq40_run(rt: RuleTable, bound: int) -> Element:
    return _first_nonzero([
        exterior_derivative(rt, expand_derived(rt, "wx")),
        exterior_derivative(rt, expand_derived(rt, "wth")),
    ])


_action("eq40-maurer-closed", "(40)", _eq40_run)

_word("eq41-Hnabla", "(41)", "H*Nb == Nb*H")
_word("eq41-nabla-square", "(41)", "Nb*Nb == 0")
_word("eq42-H-x", "(42)", "H*x == x + Q*x*H")
_word("eq42-H-th", "(42)", "H*th == th + Q*th*H")
_word("eq42-nabla-x", "(42)", "Nb*x == Q11*x*Nb")
_word("eq42-nabla-th", "(42)", "Nb*th == x - Q11*th*Nb - Q22*x*H")
_word("eq44-H-dx", "(44)", "H*dx == dx*H")
_word("eq44-H-dth", "(44)", "H*dth == dth*H")
_word("eq44-nabla-dx", "(44)", "Nb*dx == Q*Q21^-1*dx*Nb")
_word("eq44-nabla-dth", "(44)", "Nb*dth == Q11*dth*Nb + Q12*dx*H")

_scalar("eq45-structure-identities", "(45)",
        lambda rt: rt.ct.structure_residuals())

_word("eq46-H-omegax", "(46)", "H*wx == -Q^-1*wx + Q^-1*wx*H")
_word("eq46-H-omegath", "(46)", "H*wth == -Q^-1*wth + Q^-1*wth*H")
_word("eq46-nabla-omegax", "(46)", "Nb*wx == -wx*Nb")
_word("eq46-nabla-omegath", "(46)",
      "Nb*wth == Q^-1*wx + wth*Nb + (1-Q^-1)*wx*H")
_word("eq46-nabla-omegath-as-printed", "(46)",
      "Nb*wth == Q^-1*wx + wth*Nb + (Q-1)*wx*H")
_word("eq48-T-omegax", "(48)", "T*wx == Q^-1*wx*T")
_word("eq48-T-omegath", "(48)", "T*wth == Q^-1*wth*T")
_word("eq48-nabla-omegath", "(48)", "Nb*wth == wth*Nb + Q^-1*wx*T")

_scalar("eq49-coefficient-relation", "(49)",
        lambda rt: [rt.ct.Q12 - rt.ct.Q22 - (rt.ct.Q - rt.params.one())])

_word("eq50-px-H", "(50)", "px*H == px + Q*H*px")
_word("eq50-pth-H", "(50)", "pth*H == pth + Q*H*pth")
_word("eq50-px-nabla", "(50)", "px*Nb == pth + Q*Qp*Nb*px")
_word("eq50-pth-nabla", "(50)", "pth*Nb == -Nb*pth")

_scalar("eq51-first-as-printed", "(51)",
        lambda rt: [rt.ct.Q12 - rt.ct.Qprime * rt.ct.Q21 - rt.params.one()])
_scalar("eq51-first-corrected", "(51)",
        lambda rt: [rt.ct.Q12 - rt.ct.Qprime * rt.ct.Q21 - rt.ct.Q])
_scalar("eq51-second", "(51)",
        lambda rt: [rt.ct.Q11 - rt.ct.Qprime * (rt.ct.Q + rt.ct.Q22)])


def _eq52_word_run(rt: RuleTable, bound: int) -> Element:
    H = expand_derived(rt, "H")
    residuals = []
    for m in range(-3, 6):
        xm = rt.normalize_word([("x", m)])
        lhs = rt.mul(H, xm)
        rhs = (xm.scale(qnumber(m, rt.ct.Q))
               + rt.mul(xm, H).scale(rt.ct.Q ** m))
        residuals.append(lhs - rhs)
    return _first_nonzero(residuals)


_add(Identity("eq52-H-monomials", "(52)", "word-level", _eq52_word_run))


def _closed_form_run(eps):
    def run(rt: RuleTable, bound: int) -> Element:
        H = expand_derived(rt, "H")
        residuals = []
        for m in range(-bound, bound + 1):
            w = Element.monomial(rt.params, mono(x=m, th=eps))
            want = w.scale(closed_form_H(rt.ct, m, eps))
            residuals.append(act_on_function(rt, H, w) - want)
        return _first_nonzero(residuals)

    return run


_action("eq52-H-closed-form", "(52)", _closed_form_run(0))
_action("eq53-H-closed-form", "(53)", _closed_form_run(1))


def _eq54_run(rt: RuleTable, bound: int) -> Element:
    T = expand_derived(rt, "T")
    residuals = []
    for m in hopf.coordinate_basis(bound):
        w = Element.monomial(rt.params, m)
        want = w.scale(rt.ct.Q ** (m[X] + m[TH]))
        residuals.append(act_on_function(rt, T, w) - want)
    return _first_nonzero(residuals)


_action("eq54-scale-operator-diagonal", "(54)", _eq54_run)

_scalar("eq55-number-operator", "(55)",
        lambda rt: [closed_form_H(rt.ct, m, eps)
                    - qnumber(number_op(m, eps), rt.ct.Q)
                    for m in range(-4, 5) for eps in (0, 1)])


def _eq56_action_run(rt: RuleTable, bound: int) -> Element:
    nb = expand_derived(rt, "Nb")
    residuals = []
    for m in range(0, bound + 1):
        w = Element.monomial(rt.params, mono(x=m, th=1))
        want = Element.monomial(rt.params, mono(x=m + 1), rt.ct.Q11 ** m)
        residuals.append(act_on_function(rt, nb, w) - want)
    return _first_nonzero(residuals)


_action("eq56-nabla-action", "(56)", _eq56_action_run)


def _eq56_word_run(third_coeff):
    def run(rt: RuleTable, bound: int) -> Element:
        ct = rt.ct
        nb = expand_derived(rt, "Nb")
        H = expand_derived(rt, "H")
        residuals = []
        for m in range(0, 6):
            w = Element.monomial(rt.params, mono(x=m, th=1))
            xm1 = Element.monomial(rt.params, mono(x=m + 1))
            lhs = rt.mul(nb, w)
            rhs = (xm1.scale(ct.Q11 ** m)
                   - rt.mul(w, nb).scale(ct.Q11 ** (m + 1))
                   - rt.mul(xm1, H).scale(third_coeff(ct, m)))
            residuals.append(lhs - rhs)
        return _first_nonzero(residuals)

    return run


_add(Identity("eq56-nabla-monomials", "(56)", "word-level",
              _eq56_word_run(lambda ct, m: (ct.Q11 ** m) * ct.Q22)))
_add(Identity("eq56-nabla-monomials-as-printed", "(56)", "word-level",
              _eq56_word_run(lambda ct, m: ct.Q11 * ct.Q22)))


def _eq58_omegax_run(second_coeff):
    def run(rt: RuleTable, bound: int) -> Element:
        ct = rt.ct
        wx = expand_derived(rt, "wx")
        wth = expand_derived(rt, "wth")
        residuals = []
        for m in range(0, 6):
            w = Element.monomial(rt.params, mono(x=m, th=1))
            xm1 = Element.monomial(rt.params, mono(x=m + 1))
            lhs = rt.mul(w, wx)
            rhs = (rt.mul(wx, w).scale(-(ct.Q ** (m + 1)))
                   + rt.mul(wth, xm1).scale(second_coeff(ct, m)))
            residuals.append(lhs - rhs)
        return _first_nonzero(residuals)

    return run


_add(Identity("eq58-monomial-omegax", "(58)", "word-level",
              _eq58_omegax_run(lambda ct, m: (ct.Q11 ** m) * ct.Q22)))
_add(Identity("eq58-monomial-omegax-as-printed", "(58)", "word-level",
              _eq58_omegax_run(lambda ct, m: (ct.Q ** m) * ct.Q22)))


def _eq58_omegath_run(rt: RuleTable, bound: int) -> Element:
    ct = rt.ct
    wth = expand_derived(rt, "wth")
    residuals = []
    for m in range(0, 6):
        w = Element.monomial(rt.params, mono(x=m, th=1))
        lhs = rt.mul(w, wth)
        rhs = rt.mul(wth, w).scale(ct.Q11 ** (m + 1))
        residuals.append(lhs - rhs)
    return _first_nonzero(residuals)


_add(Identity("eq58-monomial-omegath", "(58)", "word-level", _eq58_omegath_run))


def _leibniz_run(index):
    def run(rt: RuleTable, bound: int) -> Element:
        b = min(bound, 4)
        residuals = []
        for f in hopf.coordinate_basis(b):
            for g in hopf.coordinate_basis(b):
                residuals.append(hopf.coproduct_U_residuals(rt, f, g)[index])
        return _first_nonzero(residuals)

    return run


_action("eq59-H-twisted-leibniz", "(59)", _leibniz_run(0))
_action("eq62-nabla-twisted-leibniz", "(62)", _leibniz_run(1))


def _eq62_square_run(rt: RuleTable, bound: int) -> Element:
    terms = hopf.u_coproduct_square_nabla(rt.params)
    if not terms:
        return Element.zero(rt.params)
    return Element.one(rt.params)


_action("eq62-coproduct-square", "(62)", _eq62_square_run)


def _eq64_run(key):
    def run(rt: RuleTable, bound: int) -> Element:
        return hopf.antipode_U_residuals(rt, min(bound, 6))[key]

    return run


_action("eq64-antipode-scale", "(64)", _eq64_run("K"))
_action("eq64-antipode-corrected", "(64)", _eq64_run("nabla-corrected"))
_action("eq64-antipode-as-printed", "(64)", _eq64_run("nabla-as-printed"))


def _eq67_run(rt: RuleTable, bound: int) -> Element:
    P = rt.params
    T = hopf.UElement.gen_T(P)
    nb = hopf.UElement.gen_nabla(P)
    x = Element.monomial(P, mono(x=1))
    th = Element.monomial(P, mono(th=1))
    xth = Element.monomial(P, mono(x=1, th=1))
    checks = [
        hopf.pair(rt, T, x) - rt.ct.Q,
        hopf.pair(rt, T, th),
        hopf.pair(rt, nb, x),
        hopf.pair(rt, nb, th) - P.one(),
        hopf.pair(rt, T, xth),
        hopf.pair(rt, nb, xth) - rt.ct.Q11,
    ]
    return _scalar_residuals(rt, checks)


_action("eq67-pairing-table", "(67)", _eq67_run)


def _operator_relation_run(maker):
    def run(rt: RuleTable, bound: int) -> Element:
        residuals = []
        for m in hopf.coordinate_basis(min(bound, 6)):
            f = Element.monomial(rt.params, m)
            residuals.append(maker(rt, f))
        return _first_nonzero(residuals)

    return run


def _eq70_T_x(rt, f):
    T = expand_derived(rt, "T")
    x = Element.monomial(rt.params, mono(x=1))
    lhs = act_on_function(rt, T, rt.mul(x, f))
    rhs = rt.mul(x, act_on_function(rt, T, f)).scale(rt.ct.Q)
    return lhs - rhs


def _eq71_T_th(rt, f):
    T = expand_derived(rt, "T")
    th = Element.monomial(rt.params, mono(th=1))
    lhs = act_on_function(rt, T, rt.mul(th, f))
    rhs = rt.mul(th, act_on_function(rt, T, f)).scale(rt.ct.Q)
    return lhs - rhs


def _eq71_nabla_x(rt, f):
    nb = expand_derived(rt, "Nb")
    x = Element.monomial(rt.params, mono(x=1))
    lhs = act_on_function(rt, nb, rt.mul(x, f))
    rhs = rt.mul(x, act_on_function(rt, nb, f)).scale(rt.ct.Q11)
    return lhs - rhs


def _eq71_nabla_th(rt, f):
    nb = expand_derived(rt, "Nb")
    H = expand_derived(rt, "H")
    x = Element.monomial(rt.params, mono(x=1))
    th = Element.monomial(rt.params, mono(th=1))
    lhs = act_on_function(rt, nb, rt.mul(th, f))
    rhs = (rt.mul(x, f)
           - rt.mul(th, act_on_function(rt, nb, f)).scale(rt.ct.Q11)
           - rt.mul(x, act_on_function(rt, H, f)).scale(rt.ct.Q22))
    return lhs - rhs


_action("eq70-T-x", "(70)", _operator_relation_run(_eq70_T_x))
_action("eq71-T-th", "(71)", _operator_relation_run(_eq71_T_th))
_action("eq71-nabla-x", "(71)", _operator_relation_run(_eq71_nabla_x))
_action("eq71-nabla-th", "(71)", _operator_relation_run(_eq71_nabla_th))


def _eq73_run(rt: RuleTable, bound: int) -> Element:
    P = rt.params
    ix = Element.monomial(P, mono(ix=1))
    ith = Element.monomial(P, mono(ith=1))
    px = Element.monomial(P, mono(px=1))
    pth = Element.monomial(P, mono(pth=1))
    residuals = []
    for m in hopf.coordinate_basis(min(bound, 6)):
        f = Element.monomial(P, m)
        df = exterior_derivative(rt, f)
        residuals.append(act_on_function(rt, ix, f))
        residuals.append(act_on_function(rt, ith, f))
        residuals.append(act_on_function(rt, ix, df) - act_on_function(rt, px, f))
        residuals.append(act_on_function(rt, ith, df) - act_on_function(rt, pth, f))
    return _first_nonzero(residuals)


_action("eq73-inner-on-exterior", "(73)", _eq73_run)


def _eq76_run(rt: RuleTable, bound: int) -> Element:
    P = rt.params
    ix = Element.monomial(P, mono(ix=1))
    ith = Element.monomial(P, mono(ith=1))
    dx = Element.monomial(P, mono(dx=1))
    dth = Element.monomial(P, mono(dth=1))
    one = Element.one(P)
    return _first_nonzero([
        act_on_function(rt, ix, dx) - one,
        act_on_function(rt, ix, dth),
        act_on_function(rt, ith, dx),
        act_on_function(rt, ith, dth) - one,
    ])


_action("eq76-inner-kronecker", "(76)", _eq76_run)


@lru_cache(maxsize=None)
def _ansatz_system(kind: str):
    return cov.generate_ansatz_constraints(kind)


def _eq75_run(rt: RuleTable, bound: int) -> Element:
    values = dict(inner_coordinate_coeffs(rt.ct))
    values["q"] = rt.ct.q
    res = cov.evaluate_system(_ansatz_system("inner-coordinate"),
                              cov.INNER_COORD_PARAMS, values, rt.params)
    return _scalar_residuals(rt, res)


_scalar("eq75-fifth-as-printed", "(75)",
        lambda rt: [rt.ct.Q22 * (rt.ct.q * rt.ct.Q + rt.params.one())])
_add(Identity("eq75-ansatz-system", "(75)", "word-level", _eq75_run))


def _eq78_run(rt: RuleTable, bound: int) -> Element:
    values = dict(inner_differential_coeffs(rt.ct))
    values["Qp"] = rt.ct.Qprime
    res = cov.evaluate_system(_ansatz_system("inner-differential"),
                              cov.INNER_DIFF_PARAMS, values, rt.params)
    return _scalar_residuals(rt, res)


_add(Identity("eq78-ansatz-system", "(78)", "word-level", _eq78_run))

_scalar("eq83-a8-as-printed", "(83)",
        lambda rt: [rt.ct.Q11 / rt.ct.Q
                    - rt.ct.Qprime * (rt.params.one()
                                      + rt.ct.Q22 / (rt.ct.Q * rt.ct.Qprime))])

_word("eq82-cartan-factor-x", "(82)", "ix*d + Q^-1*d*ix == px")
_word("eq82-cartan-factor-th", "(82)", "ith*d - Q^-1*d*ith == pth")

# inner derivations ------------------------------------------------------------

_word("eq84-ix-x", "(84)", "ix*x == Q*x*ix + Q12*th*ith")
_word("eq84-ix-th", "(84)", "ix*th == Q21*th*ix")
_word("eq84-ith-x", "(84)", "ith*x == Q11*x*ith")
_word("eq84-ith-th", "(84)", "ith*th == th*ith + Q22*x*ix")
_word("eq85-ix-dx", "(85)", "ix*dx == 1 - dx*ix - Q^-1*Q12*dth*ith")
_word("eq85-ix-dth", "(85)", "ix*dth == -Q^-1*Q21*dth*ix")
_word("eq85-ith-dx", "(85)", "ith*dx == Q^-1*Q11*dx*ith")
_word("eq85-ith-dth", "(85)",
      "ith*dth == 1 + Q^-1*dth*ith + Q^-1*Q22*dx*ix")
_word("eq85-ith-dth-as-printed", "(85)",
      "ith*dth == 1 + Q^-1*dth*ith + Q^-1*Qp^-1*Q22*dx*ix")
_word("eq86-ix-px", "(86)", "ix*px == Q^-1*px*ix")
_word("eq86-ix-pth", "(86)", "ix*pth == Q21^-1*pth*ix - Q11^-1*Q21^-1*Q12*px*ith")
_word("eq86-ith-px", "(86)", "ith*px == Q11^-1*px*ith - Q11^-1*Q21^-1*Q22*pth*ix")
_word("eq86-ith-pth", "(86)", "ith*pth == pth*ith")

# Lie derivatives ---------------------------------------------------------------

_word("eq93-Lx-x", "(93)",
      "Lx*x == 1 + Q*x*Lx + Q12*th*Lth + (Q-1)*(dx*ix + Q^-1*Q12*dth*ith)")
_word("eq94-Lx-th", "(94)", "Lx*th == -Q21*th*Lx + Q21*(1-Q^-1)*dth*ix")
_word("eq94-Lth-x", "(94)", "Lth*x == Q11*x*Lth + Q11*(Q^-1-1)*dx*ith")
_word("eq94-Lth-th", "(94)",
      "Lth*th == 1 - th*Lth - Q22*x*Lx + Q22*(Q^-1-1)*dx*ix + (Q^-1-1)*dth*ith")
_word("eq94-Lth-th-as-printed", "(94)",
      "Lth*th == 1 - th*Lth - Q22*x*Lx - Q22*(Q^-1*Qp^-1-1)*dx*ix + (Q^-1-1)*dth*ith")
_word("eq95-Lx-dx", "(95)", "Lx*dx == dx*Lx + Q^-1*Q12*dth*Lth")
_word("eq95-Lx-dth", "(95)", "Lx*dth == -Q^-1*Q21*dth*Lx")
_word("eq95-Lth-dx", "(95)", "Lth*dx == -Q^-1*Q11*dx*Lth")
_word("eq95-Lth-dth", "(95)", "Lth*dth == Q^-1*dth*Lth + Q^-1*Q22*dx*Lx")
_word("eq95-Lth-dth-as-printed", "(95)",
      "Lth*dth == Q^-1*dth*Lth + Q^-1*Qp^-1*Q22*dx*Lx")
_word("eq96-Lx-px", "(96)", "Lx*px == px*Lx")
_word("eq96-Lx-pth", "(96)",
      "Lx*pth == -Q*Q21^-1*pth*Lx + Q*Q11^-1*Q21^-1*Q12*px*Lth")
_word("eq96-Lth-px", "(96)",
      "Lth*px == Q*Q11^-1*px*Lth - Q*Q11^-1*Q21^-1*Q22*pth*Lx")
_word("eq96-Lth-pth", "(96)", "Lth*pth == -Q*pth*Lth")


def _eq97_run(rt: RuleTable, bound: int) -> Element:
    square = E(rt, "ix*ix")
    reorder = (E(rt, "ix*ith")
               - E(rt, "ith*ix").scale(-(rt.ct.Q11 / (rt.ct.Q12 - rt.ct.Q))))
    return _first_nonzero([square, reorder])


_add(Identity("eq97-innersquare", "(97)", "word-level", _eq97_run))

_word("eq98-Lx-ix", "(98)", "Lx*ix == ix*Lx")
_word("eq98-Lx-ith", "(98)",
      "Lx*ith == -Q*Q21^-1*ith*Lx + Q12*(Q-Q12)^-1*ix*Lth")
_word("eq98-Lth-ix", "(98)",
      "Lth*ix == -Q*Q11^-1*ix*Lth - Qp^-1*Q21^-1*Q*Q22*ith*Lx")
_word("eq98-Lth-ith", "(98)", "Lth*ith == Q*ith*Lth")
_word("eq98-Lth-ith-as-printed", "(98)", "Lth*ith == Q^-1*ith*Lth")
_word("eq99-lie-commute", "(99)", "Lx*Lth == Q21^-1*(Q12-Q)*Lth*Lx")
_word("eq99-Lth-square", "(99)", "Lth*Lth == 0")


def _eq100_run(rt: RuleTable, bound: int) -> Element:
    return _first_nonzero([
        E(rt, "Lx") - E(rt, "px + (1-Q^-1)*d*ix"),
        E(rt, "Lth") - E(rt, "pth - (1-Q^-1)*d*ith"),
    ])


_add(Identity("eq100-lie-as-partial", "(100)", "word-level", _eq100_run))


def _eq101_run(rt: RuleTable, bound: int) -> Element:
    return _first_nonzero([
        E(rt, "Lx") - E(rt, "x^-1*H - x^-1*th*x^-1*Nb + (1-Q^-1)*d*ix"),
        E(rt, "Lth") - E(rt, "x^-1*Nb - (1-Q^-1)*d*ith"),
    ])


_add(Identity("eq101-lie-via-fields", "(101)", "word-level", _eq101_run))


def _dd_zero_run(rt: RuleTable, bound: int) -> Element:
    residuals = []
    b = min(bound, 6)
    for m in range(-b, b + 1):
        for eps in (0, 1):
            for bdth in (0, 1, 2):
                for bdx in (0, 1):
                    w = Element.monomial(rt.params,
                                         mono(dx=bdx, dth=bdth, x=m, th=eps))
                    residuals.append(
                        exterior_derivative(rt, exterior_derivative(rt, w)))
    return _first_nonzero(residuals)


_action("eq3-d-squared-zero", "(3)", _dd_zero_run)


def _eq33_action_run(rt: RuleTable, bound: int) -> Element:
    dd = rt.d_element()
    residuals = []
    for m in range(-min(bound, 4), min(bound, 4) + 1):
        for eps in (0, 1):
            for bdth in (0, 1):
                w = Element.monomial(rt.params, mono(dth=bdth, x=m, th=eps))
                residuals.append(exterior_derivative(rt, w)
                                 - act_on_function(rt, dd, w))
    return _first_nonzero(residuals)


_action("eq33-exterior-action", "(33)", _eq33_action_run)


# ----------------------------------------------------------------------------
# Catalog API
# ----------------------------------------------------------------------------

def identity_catalog() -> list[tuple[str, str, str]]:
    """Stable list of (id, anchor, kind), in source-equation order."""
    return [(i.identityId, i.paperAnchor, i.kind) for i in _CATALOG]


def _lookup(identity_id: str) -> Identity:
    for entry in _CATALOG:
        if entry.identityId == identity_id:
            return entry
    raise UnknownIdentity(f"unknown identity {identity_id!r}")


def verify_identity(rt: RuleTable, identity_id: str, bound: int = 6) -> VerifyResult:
    entry = _lookup(identity_id)
    t0 = time.monotonic()
    residual = entry.run(rt, bound)
    elapsed = int((time.monotonic() - t0) * 1000)
    status = "PASS" if residual.is_zero() else "FAIL"
    return VerifyResult(entry.identityId, entry.paperAnchor, status, residual, elapsed)


def run_suite(rt: RuleTable, bound: int = 6,
              pattern: Optional[str] = None) -> list[VerifyResult]:
    out = []
    for entry in _CATALOG:
        if pattern and not fnmatchcase(entry.identityId, pattern):
            continue
        out.append(verify_identity(rt, entry.identityId, bound))
    if pattern and not out:
        raise UnknownIdentity(f"no identity matches {pattern!r}")
    return out
