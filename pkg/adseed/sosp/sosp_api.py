"""
" algorithm names
"""
ALGORITHM_SOSP_FW = "sosp-fw"
ALGORITHM_SOSP_BF = "sosp-bf"

"""
" concave solver
"""
# a coordinate closer than this to 0 or p_i counts as integral
PIPAGE_TOL = 1e-12
# bounded line search tolerance on the step fraction
LINE_SEARCH_XATOL = 1e-10

"""
" block finder schedule: epsilon' = epsilon'' = delta = epsilon / SCHEDULE_DIVISOR
"""
SCHEDULE_DIVISOR = 8
# Frank-Wolfe iterations per grid point inside the block finder
BLOCK_FW_ITERS = 300
BLOCK_FW_TOL = 1e-5

"""
" what SospSolve does with the item left fractional by rounding
"""
# kept only if the budget allows, leftover budget filled greedily
RESIDUAL_FIT = "fit"
# always kept, the set may exceed k by one item
RESIDUAL_KEEP = "keep"
# reported as SospSolution.residual for the caller to resolve
RESIDUAL_DEFER = "defer"

RESIDUAL_MODES = (RESIDUAL_FIT, RESIDUAL_KEEP, RESIDUAL_DEFER)
