"""
" function family tags (the "type" field of an instance's function descriptor)
"""
FUNCTION_TYPE_COVERAGE = "coverage"
FUNCTION_TYPE_MRS = "mrs"
FUNCTION_TYPE_ANY_NONEMPTY = "any_nonempty"
FUNCTION_TYPE_EDGE_WITNESS = "edge_witness"
FUNCTION_TYPE_PRODUCT_GAP = "product_gap"

FUNCTION_TYPES = (
    FUNCTION_TYPE_COVERAGE,
    FUNCTION_TYPE_MRS,
    FUNCTION_TYPE_ANY_NONEMPTY,
    FUNCTION_TYPE_EDGE_WITNESS,
    FUNCTION_TYPE_PRODUCT_GAP,
)

# tolerance used when spot-checking the oracle contract
ORACLE_CHECK_TOL = 1e-9
