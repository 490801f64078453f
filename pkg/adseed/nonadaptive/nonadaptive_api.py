"""
" algorithm names
"""
ALGORITHM_NA_GREEDY = "na-greedy"
ALGORITHM_NA_GREEDY_CRS = "na-greedy+crs"
ALGORITHM_PC_GREEDY = "pc-greedy"

"""
" block search
"""
# density comparisons closer than this are ties
DENSITY_TIE_TOL = 1e-12
# the winning block is re-estimated with this many times the candidate samples
WINNER_SAMPLE_FACTOR = 4

"""
" guarantee preconditions
"""
# loop reserve of the greedy, in units of 1/epsilon
GREEDY_RESERVE = 3.0
# contention resolution keeps its guarantee for epsilon in (0, CRS_MAX_EPSILON)
CRS_MAX_EPSILON = 0.2
