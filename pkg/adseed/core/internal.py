# success
ADSEED_OK = 0

# input error
ADSEED_ERR_INPUT_FORMAT = 2101
ADSEED_ERR_INPUT_INSTANCE = 2102
ADSEED_ERR_INPUT_NEIGHBOR = 2103
ADSEED_ERR_INPUT_PARAMETER = 2104
ADSEED_ERR_INPUT_FUNCTION = 2105
ADSEED_ERR_INPUT_POLICY = 2106
ADSEED_ERR_INPUT_SMALL_BUDGET = 2107

# cap error
ADSEED_ERR_CAP_ENUMERATION = 3101
ADSEED_ERR_CAP_SUBSETS = 3102
ADSEED_ERR_CAP_BRUTEFORCE = 3103
ADSEED_ERR_CAP_CANDIDATES = 3104
ADSEED_ERR_CAP_INSTANCE_SIZE = 3105

# feasibility error
ADSEED_ERR_INFEASIBLE_POLICY = 4101
ADSEED_ERR_INFEASIBLE_EXECUTION = 4102

# exact-equality tolerance used by every budget comparison
ADSEED_BUDGET_TOL = 1e-9
