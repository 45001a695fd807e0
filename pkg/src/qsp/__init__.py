"""Exact symbolic engine for the extended differential calculus on the
quantum superplane: normal-ordering rewrite system, Hopf costructures,
covariance constraint solving, and a verification suite with residual
certificates."""

from .coeffs import (
    PARAMS_I,
    PARAMS_II,
    PARAMS_III,
    ParamSet,
    QspError,
    RationalFunction,
    qnumber,
    rf_arith,
    rf_eval,
    rf_make,
)
from .algebra import (
    CalculusType,
    Element,
    RuleTable,
    build_rule_table,
    local_confluence_check,
    multiply,
    normalize,
    parity_of,
    substitute_params,
)
from .calculus import (
    KNOWN_DISCREPANCY_IDS,
    VerifyResult,
    act_on_function,
    closed_form_H,
    exterior_derivative,
    expand_derived,
    identity_catalog,
    number_op,
    run_suite,
    verify_identity,
)
from .hopf import (
    TensorElement,
    UElement,
    coproduct_A,
    counit_A,
    antipode_A,
    hopf_axiom_check,
    costructures_W,
    left_act,
    pair,
    tensor_multiply,
)
from .covariance import (
    delta_L,
    delta_R,
    generate_ansatz_constraints,
    generate_covariance_constraints,
    solve_family,
)
from .exprio import (
    emit_report,
    parse_element,
    parse_expr,
    print_canonical,
    print_tensor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
