"""
   The MIT License (MIT)

   Copyright (C) 2026 The dyncal developers

   Permission is hereby granted, free of charge, to any person obtaining a copy
   of this software and associated documentation files (the "Software"), to deal
   in the Software without restriction, including without limitation the rights
   to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
   copies of the Software, and to permit persons to whom the Software is
   furnished to do so, subject to the following conditions:

   The above copyright notice and this permission notice shall be included in
   all copies or substantial portions of the Software.

   THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
   IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
   FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
   AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
   LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
   OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
   THE SOFTWARE.
"""
import os

# The version to display.
VERSION = 'v1.0.0-dev'

# Version of the model artifact format written by "dyncal train" and "dyncal update".
ARTIFACT_FORMAT_VERSION = 1

# Hyperparameter search defaults: (initial guess, lower bound, upper bound).
DELTA_RANGE = (1.0, 1e-5, 1e4)
SIGMA_RANGE = (1.0, 1e-5, 1e4)
SIGMA_U_TILDE_RANGE = (1e-3, 1e-5, 1e-1)

# Restart counts.  The desk-scale value keeps a full pipeline run within minutes.
DESK_N_TRIALS = 20
FULL_N_TRIALS = 100

# Worker threads for hyperparameter restarts and cross-validation folds.
DEFAULT_THREADS = min(4, os.cpu_count() or 1)

# Gradient ascent stopping rule.
MAX_GRADIENT_ITERATIONS = 200
GRADIENT_TOLERANCE = 1e-6
# A trial also stops once one accepted step gains less than this fraction of |log-likelihood|.
LIKELIHOOD_TOLERANCE = 1e-8

# Diagonal jitter ladder used when a covariance factorization fails (normalized units).
JITTER_START = 1e-10
JITTER_FACTOR = 10.0
JITTER_MAX = 1e-4

# Negative posterior variances down to this value are clamped to zero.
VARIANCE_TOLERANCE = 1e-8

# Reference values are divided by this before training (a BGL ceiling in mg/dL).
DEFAULT_TARGET_SCALE = 400.0

# Training sets larger than this are subsampled before the hyperparameter search.
DESK_MAX_TRAINING_SAMPLES = 2000

# Online update parameters selected for the synthetic CGM scenario: (eps_u, c, eps_gamma).
DEFAULT_UPDATE_PARAMS = (0.0684, 0.7346, 6.3445)

# Latin hypercube tuning ranges for (eps_u, c, eps_gamma), and the number of candidates.
UPDATE_TUNING_RANGES = ((0.0, 0.1), (0.2, 1.0), (2.0, 7.0))
UPDATE_TUNING_CANDIDATES = 6

# The first 9 hours of a tuning series feed the updates; the rest is scored.
UPDATE_TUNING_SPLIT_S = 9 * 3600.0

# Synthetic CGM protocol: 19 hours sampled every 3 minutes.
DEFAULT_DURATION_S = 19 * 3600.0
DEFAULT_SAMPLE_INTERVAL_S = 180.0

# ISO 15197:2013 accuracy criterion.
ISO_PAE_LIMIT = 15.0
ISO_ABS_LIMIT = 15.0
ISO_THRESHOLD = 100.0
ISO_PASS_FRACTION = 0.95
