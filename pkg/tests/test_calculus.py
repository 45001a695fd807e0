"""Derived operators, actions, closed forms, and catalog behaviour."""

import pytest

from qsp.algebra import CalculusType, Element, NotAFunctionArgument, build_rule_table, mono
from qsp.calculus import (
    E,
    KNOWN_DISCREPANCY_IDS,
    UnknownIdentity,
    act_on_function,
    closed_form_H,
    expand_derived,
    exterior_derivative,
    identity_catalog,
    number_op,
    run_suite,
    verify_identity,
)
from qsp.coeffs import qnumber


@pytest.fixture(scope="module")
def t2():
    return build_rule_table(CalculusType.type_ii())


@pytest.fixture(scope="module")
def t1():
    return build_rule_table(CalculusType.type_i())


def test_expand_H(t2):
    P = t2.params
    want = Element.monomial(P, mono(x=1, px=1)) + Element.monomial(P, mono(th=1, pth=1))
    assert expand_derived(t2, "H") == want


def test_expand_T_is_unit_at_type_i(t1):
    assert expand_derived(t1, "T") == Element.one(t1.params)


def test_expand_Lx_matches_cartan_combination(t2):
    # Lx == px + (1 - Q^-1) d ix as algebra elements
    assert expand_derived(t2, "Lx") == E(t2, "px + (1-Q^-1)*d*ix")
    assert expand_derived(t2, "Lth") == E(t2, "pth - (1-Q^-1)*d*ith")


def test_act_H_on_monomial(t2):
    P = t2.params
    r = P.var("r")
    f = Element.monomial(P, mono(x=2, th=1))
    got = act_on_function(t2, expand_derived(t2, "H"), f)
    assert got == f.scale(P.one() + r + r * r)


def test_act_nabla_vacuum_projection(t2):
    P = t2.params
    q = P.var("q")
    got = act_on_function(t2, expand_derived(t2, "Nb"), Element.monomial(P, mono(x=1, th=1)))
    assert got == Element.monomial(P, mono(x=2), q)


def test_act_inner_on_differential(t2):
    got = act_on_function(t2, E(t2, "ix"), E(t2, "dx"))
    assert got == Element.one(t2.params)


def test_act_rejects_operator_argument(t2):
    with pytest.raises(NotAFunctionArgument):
        act_on_function(t2, E(t2, "px"), E(t2, "px"))


def test_exterior_derivative(t2):
    assert exterior_derivative(t2, E(t2, "x")) == E(t2, "dx")
    assert exterior_derivative(t2, expand_derived(t2, "wx")).is_zero()
    # d(x th) = dx th + x dth, reordered to the canonical form basis
    got = exterior_derivative(t2, E(t2, "x*th"))
    want = E(t2, "dx*th + x*dth")
    assert got == want
    assert exterior_derivative(t2, exterior_derivative(t2, E(t2, "x*th"))).is_zero()


def test_closed_form_H_values(t2):
    ct = t2.ct
    Q = ct.Q
    one = t2.params.one()
    assert closed_form_H(ct, 3, 0) == one + Q + Q * Q
    assert closed_form_H(ct, 0, 0).is_zero()
    assert closed_form_H(ct, 2, 1) == one + Q + Q * Q
    assert closed_form_H(ct, -1, 0) == qnumber(-1, Q)


def test_number_op():
    assert number_op(5, 1) == 6
    assert number_op(0, 0) == 0
    assert number_op(1, 0) == 1


def test_catalog_contract():
    cat = identity_catalog()
    ids = [i for i, _, _ in cat]
    assert len(ids) == len(set(ids))
    assert len(cat) >= 30
    for required in ("eq29-omega-commute", "eq100-lie-as-partial", "eq41-Hnabla",
                     "eq51-first-as-printed", "eq51-first-corrected",
                     "eq97-innersquare", "eq64-antipode-as-printed"):
        assert required in ids, required
    kinds = {k for _, _, k in cat}
    assert kinds == {"word-level", "action-level"}


def test_verify_pass_and_fail(t2):
    ok = verify_identity(t2, "eq41-Hnabla")
    assert ok.status == "PASS" and ok.residual.is_zero()

    bad = verify_identity(t2, "eq51-first-as-printed")
    assert bad.status == "FAIL"
    r = t2.params.var("r")
    assert bad.residual == Element.scalar(t2.params, r - t2.params.one())
    good = verify_identity(t2, "eq51-first-corrected")
    assert good.status == "PASS"


def test_eq97_coefficient_evaluates_to_q():
    for name in ("II", "III"):
        ct = CalculusType.by_name(name)
        coeff = -(ct.Q11 / (ct.Q12 - ct.Q))
        q = ct.params.var("q")
        assert coeff == q, name
        rt = build_rule_table(ct)
        assert verify_identity(rt, "eq97-innersquare").status == "PASS"


def test_unknown_identity(t2):
    with pytest.raises(UnknownIdentity):
        verify_identity(t2, "eq0-missing")


def test_suite_filter(t2):
    results = run_suite(t2, bound=3, pattern="eq51-*")
    assert {r.identityId for r in results} == {
        "eq51-first-as-printed", "eq51-first-corrected", "eq51-second"}
    with pytest.raises(UnknownIdentity):
        run_suite(t2, pattern="zz-*")


def test_lie_derivative_leibniz_word_level(t2):
    # normalize(Lx * f * g) computed with either association agrees, and
    # moving Lx through f with the catalog relations reproduces it
    Lx = expand_derived(t2, "Lx")
    for f_text, g_text in (("x", "th"), ("th", "x"), ("x*x", "x*th"), ("th", "th")):
        f, g = E(t2, f_text), E(t2, g_text)
        direct = t2.mul(Lx, t2.mul(f, g))
        assoc = t2.mul(t2.mul(Lx, f), g)
        assert direct == assoc


def test_eq58_relations_word_level(t2):
    assert verify_identity(t2, "eq58-monomial-omegax").status == "PASS"
    assert verify_identity(t2, "eq58-monomial-omegath").status == "PASS"


def test_action_closed_forms_up_to_ten(t2):
    H = expand_derived(t2, "H")
    P = t2.params
    for m in range(-10, 11):
        for eps in (0, 1):
            w = Element.monomial(P, mono(x=m, th=eps))
            assert act_on_function(t2, H, w) == w.scale(closed_form_H(t2.ct, m, eps))


def test_lie_commutation_coefficient_is_q_prime():
    # the eq99 reordering coefficient Q21^-1 (Q12 - Q) equals Qp, mirroring
    # the derivative relation px*pth = Qp*pth*px
    for name in ("II", "III"):
        ct = CalculusType.by_name(name)
        assert (ct.Q12 - ct.Q) / ct.Q21 == ct.Qprime, name


def test_corrected_scalar_evaluates_per_family():
    # Q12 - Qp*Q21 equals the deformation scale Q at every family
    for name in ("I", "II", "III"):
        ct = CalculusType.by_name(name)
        assert ct.Q12 - ct.Qprime * ct.Q21 == ct.Q, name


def test_full_suite_at_numeric_specialization():
    # exact rational cross-check: every identity behaves identically after
    # substituting generic-position numeric parameters
    from fractions import Fraction
    cases = (
        ("II", {"q": Fraction(3, 2), "r": Fraction(5, 7)}),
        ("III", {"q": Fraction(2, 3), "p": Fraction(7, 4)}),
    )
    for name, point in cases:
        ct = CalculusType.by_name(name).specialize(point)
        rt = build_rule_table(ct)
        for r in run_suite(rt, bound=3):
            if r.identityId in KNOWN_DISCREPANCY_IDS:
                continue
            assert r.status == "PASS", (name, r.identityId)
