"""
" algorithm names
"""
ALGORITHM_LA_GREEDY = "la-greedy"
ALGORITHM_NA_TO_LA = "na-to-la"

"""
" guarantee preconditions
"""
# loop reserve of the greedy, in units of 1/epsilon^2
LOOP_RESERVE = 3.0
