NEAR_SINGULAR = "MIMO:NEAR_SINGULAR"  # a pivot or column norm fell below tolerance
NOT_POSITIVE_DEFINITE = "MIMO:NOT_POSITIVE_DEFINITE"
SINGULAR_TRIANGULAR = "MIMO:SINGULAR_TRIANGULAR"  # triangular solve hit a tiny diagonal
SINGULAR = "MIMO:SINGULAR"  # gauss-jordan oracle pivot underflow
NOT_HERMITIAN = "MIMO:NOT_HERMITIAN"
DIMENSION_MISMATCH = "MIMO:DIMENSION_MISMATCH"
NUMERICAL_OVERFLOW = "MIMO:NUMERICAL_OVERFLOW"  # non-finite value escaped a counted op
BREAKDOWN = "MIMO:BREAKDOWN"  # conjugate gradient curvature p^H G p <= 0
INVALID_PARAMETER = "MIMO:INVALID_PARAMETER"
GAP_UNDEFINED = "MIMO:GAP_UNDEFINED"  # curve never crosses the target ber
CONFIG_ERROR = "MIMO:CONFIG_ERROR"


# cli exit codes
EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


# relative thresholds, scaled by the largest input magnitude
PIVOT_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-12


DEFAULT_TRIALS = 2000
DEFAULT_STOP_AT_ERRORS = 200
DEFAULT_ITERATIONS = 3
DEFAULT_ADMIN_ITERATIONS = 5
DEFAULT_TARGET_BER = 1e-2

# trials are scheduled in fixed-size chunks so early stopping is independent of worker count
TRIAL_CHUNK = 50

COMPLEXITY_USERS = [4, 8, 16, 32, 64, 128]
