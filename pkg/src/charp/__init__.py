"""Exact differential-form calculus in characteristic p."""

from .artin_schreier import ASReducedClass, as_reduce
from .errors import (
    CharpError,
    ConfigError,
    DomainError,
    FiltrationError,
    MathError,
    MembershipError,
    ParseError,
    PreconditionError,
    UnsupportedPresentationError,
)
from .fields import FieldConfig
from .forms import (
    CartierDecomposition,
    DifferentialForm,
    LogTermSum,
    MonomialTermDecomposition,
    artin_schreier_map,
    cartier_decompose,
    dlog,
    exterior_d,
    frobenius_phi,
    is_exact,
    log_to_form,
    monomial_decompose,
    wedge,
)
from .laurent import (
    CanonicalDecomposition,
    LaurentClass,
    LaurentField,
    ValuedExtension,
    canonicalize,
    extend_scalars,
    filtration_level,
    graded_image,
    pole_log_split,
    psi,
    residues,
)
from .poly import Polynomial
from .rational import (
    KpCoordinates,
    RationalFunction,
    frobenius_scalar,
    is_pth_power,
    kp_expand,
    partial_derivative,
    pth_root,
)
from .symbols import (
    GenericSymbolSpec,
    MilnorSymbol,
    ValuationSpec,
    complete_differential_basis,
    generic_residues,
    make_generic_symbol,
    omega_injectivity_check,
    p_independence_test,
    residue_chain_certificate,
    restriction_zero_check,
    tame_symbol,
)
from .textio import format_value, parse_expression, parse_form, parse_laurent, parse_rational

__version__ = "0.1.0"

__all__ = [
    "ASReducedClass",
    "CanonicalDecomposition",
    "CartierDecomposition",
    "CharpError",
    "ConfigError",
    "DifferentialForm",
    "DomainError",
    "FieldConfig",
    "FiltrationError",
    "GenericSymbolSpec",
    "KpCoordinates",
    "LaurentClass",
    "LaurentField",
    "LogTermSum",
    "MathError",
    "MembershipError",
    "MilnorSymbol",
    "MonomialTermDecomposition",
    "ParseError",
    "Polynomial",
    "PreconditionError",
    "RationalFunction",
    "UnsupportedPresentationError",
    "ValuationSpec",
    "ValuedExtension",
    "artin_schreier_map",
    "as_reduce",
    "canonicalize",
    "cartier_decompose",
    "complete_differential_basis",
    "dlog",
    "extend_scalars",
    "exterior_d",
    "filtration_level",
    "format_value",
    "frobenius_phi",
    "frobenius_scalar",
    "generic_residues",
    "graded_image",
    "is_exact",
    "is_pth_power",
    "kp_expand",
    "log_to_form",
    "make_generic_symbol",
    "monomial_decompose",
    "omega_injectivity_check",
    "p_independence_test",
    "parse_expression",
    "parse_form",
    "parse_laurent",
    "parse_rational",
    "partial_derivative",
    "pole_log_split",
    "psi",
    "pth_root",
    "residue_chain_certificate",
    "residues",
    "restriction_zero_check",
    "tame_symbol",
    "wedge",
]
