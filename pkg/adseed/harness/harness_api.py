from ..locallyadaptive.locallyadaptive_api import ALGORITHM_LA_GREEDY, ALGORITHM_NA_TO_LA
from ..nonadaptive.nonadaptive_api import ALGORITHM_NA_GREEDY, ALGORITHM_NA_GREEDY_CRS, ALGORITHM_PC_GREEDY
from ..sosp.sosp_api import ALGORITHM_SOSP_FW, ALGORITHM_SOSP_BF

"""
" algorithm names
"""
ALGORITHM_BRUTEFORCE = "bruteforce"

ALGORITHMS = (
    ALGORITHM_NA_GREEDY,
    ALGORITHM_NA_GREEDY_CRS,
    ALGORITHM_PC_GREEDY,
    ALGORITHM_LA_GREEDY,
    ALGORITHM_NA_TO_LA,
    ALGORITHM_SOSP_FW,
    ALGORITHM_SOSP_BF,
    ALGORITHM_BRUTEFORCE,
)

"""
" generator kinds and gap families
"""
GEN_KIND_GAP_NA = "gap-na"
GEN_KIND_GAP_LA = "gap-la"
GEN_KIND_HARDNESS = "hardness"
GEN_KIND_RANDOM = "random"
GEN_KINDS = (GEN_KIND_GAP_NA, GEN_KIND_GAP_LA, GEN_KIND_HARDNESS, GEN_KIND_RANDOM)

GAP_FAMILY_NA = "na"
GAP_FAMILY_LA = "la"
GAP_FAMILIES = (GAP_FAMILY_NA, GAP_FAMILY_LA)

HARDNESS_MODE_CLIQUE = "clique"
HARDNESS_MODE_SPARSE = "sparse"
HARDNESS_MODES = (HARDNESS_MODE_CLIQUE, HARDNESS_MODE_SPARSE)

"""
" output
"""
FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMATS = (FORMAT_JSON, FORMAT_CSV)

COMPARE_COLUMNS = ["instance-id", "algorithm", "epsilon", "samples", "value", "std_error", "oracle_value",
                   "ratio", "wall-time-ms"]

DEFAULT_EPSILON = 0.5
DEFAULT_SEED = 0

"""
" compare runs these unless --algs says otherwise; pc-greedy and na-to-la
" are opt-in baselines
"""
COMPARE_ALGORITHMS = (
    ALGORITHM_NA_GREEDY,
    ALGORITHM_NA_GREEDY_CRS,
    ALGORITHM_LA_GREEDY,
    ALGORITHM_SOSP_FW,
    ALGORITHM_SOSP_BF,
    ALGORITHM_BRUTEFORCE,
)

# solvers `gap --run` puts next to the oracle, per family
GAP_RUN_ALGORITHMS = {
    GAP_FAMILY_NA: (ALGORITHM_LA_GREEDY, ALGORITHM_NA_GREEDY),
    GAP_FAMILY_LA: (ALGORITHM_LA_GREEDY, ALGORITHM_NA_TO_LA),
}
