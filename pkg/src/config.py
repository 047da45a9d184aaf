#!/usr/bin/env python3

import os

# ========================================
# FLATLAB CONFIGURATION
# ========================================

# APPLICATION SETTINGS
APP_TITLE = "FlatLab"
APPLICATION_VERSION = "1.0"

# RANDOMNESS
# Every random choice (forms, points, prime order) is drawn from a seeded
# numpy Generator. The environment variable overrides the default at CLI start.
DEFAULT_SEED = 20240611
SEED_ENV_VAR = "FLATLAB_SEED"

# ========================================
# ARITHMETIC SETTINGS
# ========================================

# CONTRACTION PAIRING
# "differential": y^b acts on x^a as the partial derivative operator
# "coefficient":  y^b contracts x^a to x^(a-b) without factorials
PAIRINGS = ("differential", "coefficient")
DEFAULT_PAIRING = "differential"

# MODULAR RANK PATH
# Primes are taken downwards from 2^MODULAR_PRIME_BITS, so the pool is public
# and identical on every machine.
MODULAR_PRIME_BITS = 62
MODULAR_PRIME_POOL_SIZE = 24
MODULAR_PRIME_BUDGET = 4

# ========================================
# FLATTENING SETTINGS
# ========================================

# Largest matrix (rows * cols) the default grid will hand out
GRID_SIZE_CAP = 1_000_000

# Witness minors are attached to certificate entries up to this rank
WITNESS_RANK_LIMIT = 50

# Random points used to cross-check the divisor e of every spec
POINT_RANK_CHECK_TRIALS = 5
POINT_COORD_BOUND = 9

# Random forms get integer coefficients in [-DEFAULT_COEFF_BOUND, DEFAULT_COEFF_BOUND]
DEFAULT_COEFF_BOUND = 10

# ========================================
# INPUT SETTINGS
# ========================================

# Highest degree (and power exponent) accepted while reading polynomial text
MAX_PARSE_DEGREE = 60

# Coefficients produced by a power may not grow past this many bits
MAX_PARSE_COEFFICIENT_BITS = 100_000

# Largest number of term-by-term products one multiplication may expand
MAX_PARSE_TERM_PRODUCTS = 10_000_000

# ========================================
# APOLARITY SETTINGS
# ========================================

# Hilbert function search stops here if no plateau was found
DEFAULT_T_MAX = 30

# Number of equal consecutive Hilbert values that count as stabilized
HILBERT_PLATEAU = 3

# ========================================
# OUTPUT AND LOGGING SETTINGS
# ========================================

# Matrices are printed under --verbose only up to this many rows and columns
MATRIX_PRINT_LIMIT = 30

# JSONL run logs (run_info / computations / tech_log), see docs/LOGGING_GUIDE.md
RUN_LOGGING_ENABLED = False
LOG_DIR = os.path.join("logs")

# Process exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3
