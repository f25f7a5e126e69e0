# Commands
SPECTRUM = 'spectrum'
CORRECT = 'correct'
DEGENERATE = 'degenerate'
SCAN = 'scan'
VALIDATE = 'validate'
COMMANDS = (SPECTRUM, CORRECT, DEGENERATE, SCAN, VALIDATE)

# Branches of the Landau tower
PLUS = '+'
MINUS = '-'
BOTH = 'both'
BRANCHES = (PLUS, MINUS)

# Spin projections (in units of hbar/2)
SPIN_UP = 1
SPIN_DOWN = -1

# Report formats
TEXT = 'text'
JSON = 'json'
CSV = 'csv'
XLSX = 'xlsx'
FORMATS = (TEXT, JSON, CSV, XLSX)

NATURAL_UNITS = 'natural'
SI_UNITS = 'si'
UNIT_SYSTEMS = (NATURAL_UNITS, SI_UNITS)

SHIFT_UNITS = 'a·c·m·ħ·ω̃'
ENERGY_UNITS = 'm·c²'

# Run defaults
DEFAULT_CUTOFF = 40
DEFAULT_LEVELS = 8
DEFAULT_CLUSTER_LEVEL = 2
DEFAULT_CLUSTER_SIZE = 4
LEVELS_HEADROOM = 4  # cutoff >= levels + headroom
INTERIOR_MARGIN = 2  # interior projection: n_a + n_b <= cutoff - margin

# Numerics
EIGH_TOL = 1e-10
EIGH_MAX_SWEEPS = 60
JACOBI_MAX_DIM = 64  # "auto" eigh switches to LAPACK above this size
JACOBI_NOISE_RTOL = 1e-12  # off-diagonal norm (relative) below which a stalled Jacobi sweep counts as converged
DEGENERACY_RTOL = 1e-12  # eigenvalues closer than this (relative) form one cluster
ORTHONORMALITY_TOL = 1e-10
TRACE_TOL = 1e-10
HERMITIAN_TOL = 1e-12

# Perturbation theory
CLUSTER_ENERGY_TOL = 1e-9  # units of m c^2
COUPLING_TOL = 1e-12  # relative to the cluster's perturbation scale
INTERIOR_WEIGHT_TOL = 1e-6
ORACLE_STEPS = (1e-5, 2e-5)  # in units of alpha_gup = a m c
NOISE_FLOOR = 1e-12  # units of m c^2

# Tolerances a run may override (name -> default)
TOLERANCES = {
    'spectrum_rtol': 1e-8,
    'oracle_rtol': 1e-6,
    'match_atol': 1e-10,
    'printed_atol': 5e-4,
    'degeneracy_window': 1e-9,
}

# Published numbers (energies in units of a c m hbar omega_tilde)
PUBLISHED_GROUND_SHIFT = -1.0
PUBLISHED_FIRST_SHIFT = -2.5
PUBLISHED_FIRST_P2_CONSTANT = -2.5  # <4 p_z p_zbar>_1 = -5/2 m w hbar - 2 m w <L_z>
PUBLISHED_BLOCK_PREFACTOR = -0.5
PUBLISHED_BLOCK = (
    (11, -5, -5, -5),
    (-5, 11, -5, -5),
    (-5, -5, 13, -5),
    (-5, -5, -5, 9),
)
PUBLISHED_BLOCK_EIGENVALUES = (-8.7308, -8.0, -7.3192, 2.05)
PUBLISHED_BLOCK_EIGENVECTORS = (
    (2.36839, 2.36839, -6.42909, 1.0),
    (-1.0, 1.0, 0.0, 0.0),
    (-0.468884, -0.468884, -0.189917, 1.0),
    (0.900498, 0.900498, 0.819005, 1.0),
)

# Replication statuses
MATCH = 'MATCH'
DISCREPANCY = 'DISCREPANCY'

# Replication rows whose DISCREPANCY is a known property of the published text
KNOWN_DISCREPANCIES = frozenset({
    'E1_shift',
    'E1_p2_expectation',
    'n2_block',
})

# Exit statuses
EXIT_OK = 0
EXIT_DISCREPANCY = 1
EXIT_USAGE = 2
EXIT_COMPUTATION = 3
