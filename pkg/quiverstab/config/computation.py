# computation defaults

# feasibility caps
DEFAULT_ENUMERATION_CAP = 10**7
DEFAULT_CENSUS_CAP = 10**7
DEFAULT_ORBIT_CAP = 10**5
DEFAULT_END_DIM_CAP = 8
DEFAULT_PARTITION_TUPLE_CAP = 2 * 10**6

# worker pool size for sweeps
DEFAULT_THREADS = 1

# Kac polynomial route: "log", "decomposition", "eval" or "auto"
DEFAULT_KAC_ROUTE = "auto"

# above this many Hua cells "auto" switches to the evaluation route
AUTO_EVAL_CELLS = 200

# near-maximal decomposition threshold factor
DEFAULT_EPSILON = 1.0

# number of top coefficients tracked in sweeps
DEFAULT_SWEEP_DEPTH = 3

# a coefficient counts as stabilized when constant over this many trailing rows (at least)
MIN_STABLE_ROWS = 3

# search radius for generic characters
GENERIC_CHARACTER_MAX_NORM = 50

# reflection descent stops after this many steps per unit of height
ROOT_DESCENT_FACTOR = 10
