"""Coactions on first-order differentials and covariance constraint solving.

The right and left coactions extend the coordinate coproduct by

    dR(dx) = dx (x) x          dL(dx) = x (x) dx
    dR(dth) = dth (x) x + dx (x) th
    dL(dth) = x (x) dth - th (x) dx

multiplicatively with Koszul signs.  Applying dR to the differential-module
relations with unknown structure coefficients and collecting tensor-basis
coefficients yields a linear constraint system; the three concrete parameter
families are its solutions under the documented side conditions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeffs import (
    ParamSet,
    Poly,
    QspError,
    RationalFunction,
    _poly_substitute_rf,
    poly_str,
)
from .algebra import (
    DX, DTH, X, TH,
    CalculusType,
    Element,
    Monomial,
    NGENS,
    RuleTable,
    UnsupportedGenerator,
    mono,
)
from .hopf import (
    TensorElement,
    coproduct_mono,
    tensor_apply_slot,
    tensor_expand_slot,
    tensor_multiply,
)


class UnderdeterminedSystem(QspError):
    pass


class InconsistentSideConditions(QspError):
    pass


# ----------------------------------------------------------------------------
# Coactions on the first-order differential module
# ----------------------------------------------------------------------------

def _coaction_letter(rt: RuleTable, letter: tuple, side: str) -> TensorElement:
    P = rt.params
    g, s = letter
    one = Element.one(P)
    el = {
        "x": Element.monomial(P, mono(x=s)),
        "th": Element.monomial(P, mono(th=1)),
        "dx": Element.monomial(P, mono(dx=1)),
        "dth": Element.monomial(P, mono(dth=1)),
    }
    if g == X:
        return TensorElement.of(el["x"], el["x"])
    if g == TH:
        return (TensorElement.of(el["th"], el["x"])
                + TensorElement.of(el["x"], el["th"]))
    if side == "right":
        if g == DX:
            return TensorElement.of(el["dx"], el["x"])
        if g == DTH:
            return (TensorElement.of(el["dth"], el["x"])
                    + TensorElement.of(el["dx"], el["th"]))
    else:
        if g == DX:
            return TensorElement.of(el["x"], el["dx"])
        if g == DTH:
            return (TensorElement.of(el["x"], el["dth"])
                    - TensorElement.of(el["th"], el["dx"]))
    raise UnsupportedGenerator("coactions are defined on words in x, th, dx, dth")


def _coaction_word(rt: RuleTable, word, side: str) -> TensorElement:
    from .algebra import word_letters
    out = TensorElement.unit(rt.params, 2)
    for letter in word_letters(word):
        out = tensor_multiply(rt, out, _coaction_letter(rt, letter, side))
    return out


def delta_R(rt: RuleTable, word) -> TensorElement:
    """Right coaction of the coordinate Hopf algebra on a differential word."""
    return _coaction_word(rt, word, "right")


def delta_L(rt: RuleTable, word) -> TensorElement:
    """Left coaction on a differential word."""
    return _coaction_word(rt, word, "left")


def delta_R_element(rt: RuleTable, e: Element) -> TensorElement:
    out = TensorElement(rt.params, 2)
    for m, c in e.terms.items():
        out = out + _coaction_mono(rt, m, "right").scale(c)
    return out


def delta_L_element(rt: RuleTable, e: Element) -> TensorElement:
    out = TensorElement(rt.params, 2)
    for m, c in e.terms.items():
        out = out + _coaction_mono(rt, m, "left").scale(c)
    return out


def _coaction_mono(rt: RuleTable, m: Monomial, side: str) -> TensorElement:
    if not all(m[g] == 0 for g in range(NGENS) if g not in (DX, DTH, X, TH)):
        raise UnsupportedGenerator("coactions are defined on words in x, th, dx, dth")
    word = []
    for g, e in ((DX, m[DX]), (DTH, m[DTH]), (X, m[X]), (TH, m[TH])):
        if e:
            name = {DX: "dx", DTH: "dth", X: "x", TH: "th"}[g]
            word.append((name, e))
    return _coaction_word(rt, word, side)


def coaction_axiom_residuals(rt: RuleTable, word, side: str) -> list:
    """Comodule axioms: compatibility with the coproduct and the counit."""
    from .hopf import counit_A
    P = rt.params
    te = delta_R(rt, word) if side == "right" else delta_L(rt, word)
    if side == "right":
        # (dR (x) id) dR == (id (x) Delta) dR
        lhs = tensor_expand_slot(te, 0, lambda m: _coaction_mono(rt, m, "right"))
        rhs = tensor_expand_slot(te, 1, lambda m: coproduct_mono(rt, m))
        counit = tensor_apply_slot(te, 1, lambda a: Element.scalar(P, counit_A(rt, a)))
    else:
        # (Delta (x) id) dL == (id (x) dL) dL
        lhs = tensor_expand_slot(te, 0, lambda m: coproduct_mono(rt, m))
        rhs = tensor_expand_slot(te, 1, lambda m: _coaction_mono(rt, m, "left"))
        counit = tensor_apply_slot(te, 0, lambda a: Element.scalar(P, counit_A(rt, a)))
    ident = rt.normalize_word(word)
    collapsed = Element.zero(P)
    for (m1, m2), c in counit.terms.items():
        collapsed = collapsed + rt.mul_mono_mono(m1, m2).scale(c)
    return [lhs - rhs, collapsed - ident]


def bicovariance_residuals(rt: RuleTable, word) -> list:
    """The three compatibility identities between d, dR and dL on a word."""
    P = rt.params

    def d_map(a: Element) -> Element:
        return rt.mul(rt.d_element(), a).vacuum()

    e = rt.normalize_word(word)
    de = d_map(e)
    delta_a = TensorElement(P, 2)
    for m, c in e.terms.items():
        delta_a = delta_a + coproduct_mono(rt, m).scale(c)
    res1 = tensor_apply_slot(delta_a, 1, d_map, fn_parity=1) - delta_L_element(rt, de)
    res2 = tensor_apply_slot(delta_a, 0, d_map, fn_parity=1) - delta_R_element(rt, de)
    lhs = tensor_expand_slot(delta_R_element(rt, e), 0,
                             lambda m: _coaction_mono(rt, m, "left"))
    rhs = tensor_expand_slot(delta_L_element(rt, e), 1,
                             lambda m: _coaction_mono(rt, m, "right"))
    return [res1, res2, lhs - rhs]


# ----------------------------------------------------------------------------
# Constraint generation over a symbolic ansatz
# ----------------------------------------------------------------------------

ANSATZ_PARAMS = ParamSet("ansatz", ("q", "Q", "Q11", "Q12", "Q21", "Q22", "Qp"))


def ansatz_type() -> CalculusType:
    P = ANSATZ_PARAMS
    return CalculusType(P, P.var("Q"), P.var("Q11"), P.var("Q12"),
                        P.var("Q21"), P.var("Q22"), P.var("Qp"))


def ansatz_table() -> RuleTable:
    return RuleTable.build(ansatz_type(), validate=False)


def _primitive_poly(params: ParamSet, rf: RationalFunction,
                    units: tuple = ("q", "Qp")) -> Poly:
    """Numerator of a constraint with invertible-parameter content stripped.

    Only the deformation parameters (units of the coefficient ring) are
    stripped; common factors in the unknowns are meaningful and kept.
    """
    from .coeffs import _poly_monic
    num = rf.num
    if not num:
        return {}
    unit_idx = [i for i, v in enumerate(params.variables) if v in units]
    content = None
    for m in num:
        cur = tuple(m[i] for i in unit_idx)
        content = cur if content is None else tuple(min(a, b) for a, b in zip(content, cur))
    if content and any(content):
        shift = {i: c for i, c in zip(unit_idx, content)}
        num = {tuple(e - shift.get(i, 0) for i, e in enumerate(m)): c
               for m, c in num.items()}
    return _poly_monic(num)


def _collect_constraints(params: ParamSet, residual: TensorElement) -> list[Poly]:
    out = []
    seen = set()
    for key, c in residual.terms.items():
        p = _primitive_poly(params, c)
        sig = tuple(sorted(p.items()))
        if p and sig not in seen:
            seen.add(sig)
            out.append(p)
    return out


_MODULE_RELATIONS = (
    # (left word, [(coefficient name, right word), ...]) for x*dx = Q dx*x etc.
    ((("x", 1), ("dx", 1)), (("Q", (("dx", 1), ("x", 1))),)),
    ((("x", 1), ("dth", 1)), (("Q11", (("dth", 1), ("x", 1))), ("Q12", (("dx", 1), ("th", 1))))),
    ((("th", 1), ("dx", 1)), (("Q21", (("dx", 1), ("th", 1))), ("Q22", (("dth", 1), ("x", 1))))),
    ((("th", 1), ("dth", 1)), (("one", (("dth", 1), ("th", 1))),)),
)


class CovarianceConstraints:
    """Output of the constraint pass: generators per side plus notes."""

    def __init__(self, right: list[Poly], left: list[Poly], notes: list[str]):
        self.right = right
        self.left = left
        self.notes = notes

    def describe(self, params: ParamSet) -> list[str]:
        return [poly_str(p, params.variables) for p in self.right]


def generate_covariance_constraints() -> CovarianceConstraints:
    """Apply both coactions to the differential-module relations symbolically.

    Returns the polynomial constraints extracted from the right coaction, the
    (empty, when all goes well) list of new constraints from the left
    coaction, and human-readable notes.
    """
    rt = ansatz_table()
    P = rt.params
    notes = [
        "two mixed symbols in the displayed expansion are read as Q21 and Q22",
        "the left-coaction pass adds no constraints beyond the right-coaction set",
    ]

    def rel_residuals(side: str) -> list[Poly]:
        out: list[Poly] = []
        seen = set()
        for lhs_word, rhs in _MODULE_RELATIONS:
            te = _coaction_word(rt, lhs_word, side)
            for coeff_name, rhs_word in rhs:
                c = P.one() if coeff_name == "one" else P.var(coeff_name)
                te = te - _coaction_word(rt, rhs_word, side).scale(c)
            for p in _collect_constraints(P, te):
                sig = tuple(sorted(p.items()))
                if sig not in seen:
                    seen.add(sig)
                    out.append(p)
        return out

    right = rel_residuals("right")
    left_all = rel_residuals("left")
    left_new = [p for p in left_all if not _in_linear_span(right, [p])]
    return CovarianceConstraints(right, left_new, notes)


def expected_covariance_constraints() -> list[Poly]:
    """The published four-constraint system, as primitive polynomials."""
    P = ANSATZ_PARAMS
    q = P.var("q")
    exprs = [
        P.var("Q11") + q * P.var("Q12") - q * P.var("Q"),
        P.var("Q11") + q * P.var("Q22") - q,
        P.var("Q12") + q * P.var("Q21") + P.one(),
        q * P.var("Q21") + P.var("Q22") + P.var("Q"),
    ]
    return [_primitive_poly(P, e) for e in exprs]


# -- linear span comparison ---------------------------------------------------

def _poly_monomials(polys: Iterable[Poly]) -> list:
    basis = set()
    for p in polys:
        basis.update(p.keys())
    return sorted(basis)


def _q_only(params: ParamSet, m: tuple) -> bool:
    return all(e == 0 for v, e in zip(params.variables, m) if v != "q")


def _in_linear_span(gens: Sequence[Poly], queries: Sequence[Poly]) -> bool:
    """Membership of each query in the span of gens over rational functions
    of q, with the unknowns entering linearly (affine terms allowed)."""
    P = ANSATZ_PARAMS
    qvar = ParamSet("qline", ("q",))

    def split(m: tuple):
        qexp = (m[0],)
        rest = m[1:]
        return qexp, rest

    def vectorize(p: Poly) -> dict:
        vec: dict = {}
        for m, c in p.items():
            qexp, rest = split(m)
            coeff = {(qexp): c}
            cur = vec.setdefault(rest, {})
            cur[qexp] = cur.get(qexp, Fraction(0)) + c
        return {k: RationalFunction(qvar, {e: c for e, c in v.items() if c},
                                    {(0,): Fraction(1)})
                for k, v in vec.items()}

    rows = [vectorize(p) for p in gens]
    cols = sorted({c for row in rows for c in row} |
                  {c for p in queries for c in [split(m)[1] for m in p]})

    def to_row(vec: dict) -> list:
        return [vec.get(c, qvar.zero()) for c in cols]

    matrix = [to_row(r) for r in rows]
    reduced: list[list[RationalFunction]] = []
    for row in matrix:
        row = _reduce_row(row, reduced, qvar)
        if any(not c.is_zero() for c in row):
            reduced.append(row)
    for p in queries:
        row = to_row(vectorize(p))
        row = _reduce_row(row, reduced, qvar)
        if any(not c.is_zero() for c in row):
            return False
    return True


def _reduce_row(row, reduced, qvar):
    row = list(row)
    for pivot_row in reduced:
        lead = next(i for i, c in enumerate(pivot_row) if not c.is_zero())
        if not row[lead].is_zero():
            factor = row[lead] / pivot_row[lead]
            row = [a - factor * b for a, b in zip(row, pivot_row)]
    return row


def spans_match(a: Sequence[Poly], b: Sequence[Poly]) -> bool:
    return _in_linear_span(a, b) and _in_linear_span(b, a)


# ----------------------------------------------------------------------------
# Inner-derivation ansatz systems
# ----------------------------------------------------------------------------

INNER_COORD_PARAMS = ParamSet("inner-coordinate",
                              ("q",) + tuple(f"A{i}" for i in range(1, 9)))
INNER_DIFF_PARAMS = ParamSet("inner-differential",
                             ("Qp",) + tuple(f"a{i}" for i in range(1, 9)))


def _inner_coordinate_table() -> RuleTable:
    """Coordinate relations plus the undetermined inner-derivation ansatz."""
    from .algebra import IX, ITH
    P = INNER_COORD_PARAMS
    q = P.var("q")
    one = P.one()
    A = {i: P.var(f"A{i}") for i in range(1, 9)}
    ct = CalculusType(P, one, one, P.zero(), one, P.zero(), one)  # placeholder values
    rules = {
        (TH, X, 1): Element.monomial(P, mono(x=1, th=1), one / q),
        (TH, TH, 0): Element.zero(P),
        (IX, X, 1): (Element.monomial(P, mono(x=1, ix=1), A[1])
                     + Element.monomial(P, mono(th=1, ith=1), A[2])),
        (IX, TH, 0): (Element.monomial(P, mono(th=1, ix=1), A[3])
                      + Element.monomial(P, mono(x=1, ith=1), A[4])),
        (ITH, X, 1): (Element.monomial(P, mono(x=1, ith=1), A[5])
                      + Element.monomial(P, mono(th=1, ix=1), A[6])),
        (ITH, TH, 0): (Element.monomial(P, mono(th=1, ith=1), A[7])
                       + Element.monomial(P, mono(x=1, ix=1), A[8])),
        (IX, IX, 0): Element.zero(P),
    }
    return RuleTable.from_rules(ct, rules)


def _inner_differential_table() -> RuleTable:
    from .algebra import IX, ITH
    P = INNER_DIFF_PARAMS
    one = P.one()
    a = {i: P.var(f"a{i}") for i in range(1, 9)}
    ct = CalculusType(P, one, one, P.zero(), one, P.zero(), P.var("Qp"))
    rules = {
        (DTH, DX, 0): Element.monomial(P, mono(dx=1, dth=1), one / P.var("Qp")),
        (DX, DX, 0): Element.zero(P),
        (IX, DX, 0): (Element.one(P)
                      + Element.monomial(P, mono(dx=1, ix=1), a[1])
                      + Element.monomial(P, mono(dth=1, ith=1), a[2])),
        (IX, DTH, 0): (Element.monomial(P, mono(dth=1, ix=1), a[3])
                       + Element.monomial(P, mono(dx=1, ith=1), a[4])),
        (ITH, DX, 0): (Element.monomial(P, mono(dx=1, ith=1), a[5])
                       + Element.monomial(P, mono(dth=1, ix=1), a[6])),
        (ITH, DTH, 0): (Element.one(P)
                        + Element.monomial(P, mono(dth=1, ith=1), a[7])
                        + Element.monomial(P, mono(dx=1, ix=1), a[8])),
        (IX, IX, 0): Element.zero(P),
    }
    return RuleTable.from_rules(ct, rules)


def generate_ansatz_constraints(kind: str) -> list[Poly]:
    """Consistency constraints of the inner-derivation ansatz.

    kind 'inner-coordinate': reorder each inner derivation through both sides
    of the coordinate relations (x th = q th x, th^2 = 0).  kind
    'inner-differential': likewise through the two-form relations
    (dx dth = Qp dth dx, dx^2 = 0).
    """
    if kind == "inner-coordinate":
        rt = _inner_coordinate_table()
        P = INNER_COORD_PARAMS
        q = P.var("q")
        relations = [
            (("x", "th"), q, ("th", "x")),      # x th - q th x
            (("th", "th"), P.zero(), ("th", "th")),
        ]
        movers = ("ix", "ith")
    elif kind == "inner-differential":
        rt = _inner_differential_table()
        P = INNER_DIFF_PARAMS
        relations = [
            (("dx", "dth"), P.var("Qp"), ("dth", "dx")),
            (("dx", "dx"), P.zero(), ("dx", "dx")),
        ]
        movers = ("ix", "ith")
    else:
        raise ValueError(f"unknown ansatz kind {kind!r}")

    out: list[Poly] = []
    seen = set()
    for mover in movers:
        for lhs, coeff, rhs in relations:
            e = rt.normalize_word((mover,) + lhs)
            if not coeff.is_zero():
                e = e - rt.normalize_word((mover,) + rhs).scale(coeff)
            for m, c in e.terms.items():
                p = _primitive_poly(P, c)
                sig = tuple(sorted(p.items()))
                if p and sig not in seen:
                    seen.add(sig)
                    out.append(p)
    return out


def evaluate_system(system: Sequence[Poly], source: ParamSet,
                    assignment: Mapping[str, RationalFunction],
                    target: ParamSet) -> list[RationalFunction]:
    """Evaluate ansatz polynomials at rational-function values per variable."""
    values = {source.index(name): rf for name, rf in assignment.items()}
    return [_poly_substitute_rf(p, values, target) for p in system]


# ----------------------------------------------------------------------------
# Family solving
# ----------------------------------------------------------------------------

def solve_family(side_conditions: Mapping[str, "RationalFunction | int | str"],
                 params: ParamSet) -> CalculusType:
    """Solve the covariance constraints linearly under the side conditions.

    The four constraints are linear in (Q, Q11, Q12, Q21, Q22) over the field
    of rational functions in the mode parameters; the side conditions fix two
    of the unknowns and the rest follow by elimination.  Qp is set by the
    structure identity Q*(Q11 - Qp) = Q11*Q12.
    """
    q = params.var("q")
    one = params.one()
    unknowns = ["Q", "Q11", "Q12", "Q21", "Q22"]
    fixed = {name: params.rf(v) for name, v in side_conditions.items()}
    for name in fixed:
        if name not in unknowns:
            raise InconsistentSideConditions(f"unknown coefficient {name!r}")
    # rows: coefficients of the unknowns plus the constant term
    rows = [
        ({"Q11": one, "Q12": q, "Q": -q}, params.zero()),
        ({"Q11": one, "Q22": q}, -q),
        ({"Q12": one, "Q21": q}, -(-one)),
        ({"Q21": q, "Q22": one, "Q": one}, params.zero()),
    ]
    free = [u for u in unknowns if u not in fixed]
    matrix = []
    for coeffs, const in rows:
        row = [coeffs.get(u, params.zero()) for u in free]
        rhs = -const
        for name, value in fixed.items():
            if name in coeffs:
                rhs = rhs - coeffs[name] * value
        matrix.append((row, rhs))
    solution = _solve_linear(matrix, free, params)
    values = dict(fixed)
    values.update(solution)
    Q, Q11, Q12 = values["Q"], values["Q11"], values["Q12"]
    if Q.is_zero():
        raise InconsistentSideConditions("Q must be invertible")
    qprime = (Q * Q11 - Q11 * Q12) / Q
    ct = CalculusType(params, Q, Q11, Q12, values["Q21"], values["Q22"], qprime)
    ct.validate()
    return ct


def _solve_linear(matrix, names, params: ParamSet) -> dict:
    rows = [(list(row), rhs) for row, rhs in matrix]
    n = len(names)
    solution: dict = {}
    pivots = []
    for col in range(n):
        pivot = None
        for i, (row, rhs) in enumerate(rows):
            if i in [p[0] for p in pivots]:
                continue
            if not row[col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        pivots.append((pivot, col))
        prow, prhs = rows[pivot]
        for i, (row, rhs) in enumerate(rows):
            if i == pivot or row[col].is_zero():
                continue
            factor = row[col] / prow[col]
            rows[i] = ([a - factor * b for a, b in zip(row, prow)], rhs - factor * prhs)
    for i, (row, rhs) in enumerate(rows):
        if all(c.is_zero() for c in row) and not rhs.is_zero():
            raise InconsistentSideConditions("side conditions contradict the constraints")
    solved_cols = {col for _, col in pivots}
    if solved_cols != set(range(n)):
        missing = [names[c] for c in range(n) if c not in solved_cols]
        raise UnderdeterminedSystem(f"unconstrained coefficients: {missing}")
    for i, col in pivots:
        row, rhs = rows[i]
        value = rhs
        for c in range(n):
            if c != col and not row[c].is_zero():
                raise UnderdeterminedSystem("coupled system after elimination")
        solution[names[col]] = value / row[col]
    return solution
