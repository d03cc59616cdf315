"""Frozen constants from the pre-build calibration sweeps.

Regenerate with ``python3 tools/calibrate.py``; update values here only from
that script's output.
"""

# Linear-inversion relative error per unit r*n at r = omega/2 over
# rn in [1e-3, 1e-1] (measured max ratio 3.4982 at the small-rn end).
LINEAR_REL_ERR_PER_RN = 3.5

# Linear-inversion relative error at the last report row with r*n <= 0.1
# (measured 0.3310).
LINEAR_REL_ERR_AT_RN_0_1 = 0.34

# Narrow-clock configuration used by the concentration and oracle checks:
# omega = 1, r = 0.1, n_reset = 1.5, amplitude 1, probe reading at n = 0.5.
NARROW_OMEGA = 1.0
NARROW_DAMPING = 0.1
NARROW_N_RESET = 1.5
NARROW_AMPLITUDE = 1.0
NARROW_PROBE_TIME = 0.5

# Clock-scale ladder m*omega for the ideal-clock limit; the posterior mass in
# a half-width 0.05 window crosses 0.99 at the last scale (measured 0.99972).
IDEAL_LIMIT_SCALES = (10.0, 100.0, 1000.0, 10000.0)
IDEAL_LIMIT_WINDOW = 0.05
IDEAL_LIMIT_CROSSING_SCALE = 10000.0

# Worst-row fidelity of the default comparison table (omega = 1, r = 0.5,
# n_reset = 2, demo qubit; measured 0.02081).
WORST_ROW_FIDELITY_FLOOR = 0.018

# Fidelity-loss prefactor for 1 - F <= C * (rn)^2 * |H|^2 * n^2 at fixed
# clock omega = 1, r = 0.5 (measured asymptote 12.24).
FIDELITY_LOSS_PREFACTOR = 12.5
