"""Bounds on genuine four-photon indistinguishability and unmeasured overlaps."""
from .classical import (
    ClassicalBoundsReport,
    c1_bounds,
    chain_bounds,
    classical_bounds,
    classical_r_AD_bounds,
    three_term_r_AD_upper,
)
from .oracles import OracleReport, classical_oracle_check, product_oracle_check
from .polytope import (
    KNOWN_FORMS,
    LinearInequality,
    and_probability_range,
    and_probability_range_linprog,
    polytope_inequalities,
    truth_table_vertices,
)
from .product import (
    ProductBoundsReport,
    chain_through_interval,
    product_bounds,
    product_bounds_array,
    product_chain_bounds,
    product_lower,
    product_r_AD_bounds,
    product_r_AD_routes_array,
    product_upper,
)

__all__ = [
    "ClassicalBoundsReport",
    "KNOWN_FORMS",
    "LinearInequality",
    "OracleReport",
    "ProductBoundsReport",
    "and_probability_range",
    "and_probability_range_linprog",
    "c1_bounds",
    "chain_bounds",
    "chain_through_interval",
    "classical_bounds",
    "classical_oracle_check",
    "classical_r_AD_bounds",
    "polytope_inequalities",
    "product_bounds",
    "product_bounds_array",
    "product_chain_bounds",
    "product_lower",
    "product_oracle_check",
    "product_r_AD_bounds",
    "product_r_AD_routes_array",
    "product_upper",
    "three_term_r_AD_upper",
    "truth_table_vertices",
]
