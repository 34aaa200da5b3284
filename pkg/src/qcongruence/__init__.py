"""qcongruence: exact q-series arithmetic and verification of partition
congruence families."""

from .genfun import (
    BudgetError,
    EtaQuotient,
    brute_force_count,
    catalog_names,
    eisenstein,
    euler_product,
    euler_product_direct,
    expand_eta_quotient,
    expand_named,
    partition_coefficients,
    partition_series,
)
from .hrr import (
    PrecisionPolicy,
    check_eta_transformation,
    dedekind_sum,
    eta_numeric,
    hrr_p,
)
from .series import (
    NotInvertibleError,
    QSeries,
    QSeriesRat,
    SeriesError,
    TruncationError,
    first_difference,
)
from .uops import (
    Ladder,
    ModularEquation,
    TPolynomial,
    decompose_in_t,
    hauptmodul_t,
    ladder_step_check,
    ladder_term,
    progression_offset,
    recover_modular_equation,
    u5_plain,
    u5_power_table,
    u5_weighted,
    valuation_pattern_check,
    vspace_stability_check,
    weight_series,
)
from .verify import (
    CongruenceFamily,
    FamilyReport,
    eigen_check,
    eigen_setup,
    family_catalog,
    get_family,
    verify_family,
    verify_identity,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CongruenceFamily",
    "EtaQuotient",
    "FamilyReport",
    "Ladder",
    "ModularEquation",
    "NotInvertibleError",
    "PrecisionPolicy",
    "QSeries",
    "QSeriesRat",
    "SeriesError",
    "TPolynomial",
    "TruncationError",
    "brute_force_count",
    "catalog_names",
    "check_eta_transformation",
    "decompose_in_t",
    "dedekind_sum",
    "eigen_check",
    "eigen_setup",
    "eisenstein",
    "eta_numeric",
    "euler_product",
    "euler_product_direct",
    "expand_eta_quotient",
    "expand_named",
    "family_catalog",
    "first_difference",
    "get_family",
    "hauptmodul_t",
    "hrr_p",
    "ladder_step_check",
    "ladder_term",
    "partition_coefficients",
    "partition_series",
    "progression_offset",
    "recover_modular_equation",
    "u5_plain",
    "u5_power_table",
    "u5_weighted",
    "valuation_pattern_check",
    "verify_family",
    "verify_identity",
    "vspace_stability_check",
    "weight_series",
    "__version__",
]
