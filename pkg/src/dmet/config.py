"""Tunable constants, collected in one place.

None of these values is forced by the classification model itself; each is
a product decision that operators may retune. Keeping them here (and
echoing the relevant ones into every audit record) is what makes the
defaults inspectable rather than buried.
"""

from __future__ import annotations

# Saturation constant k in confidence = 1 - exp(-n_items / k).
CONFIDENCE_K = 10.0

# Exponential recency decay: weight = exp(-ln2 * age_days / half_life_days).
DEFAULT_HALF_LIFE_DAYS = 30.0

# Default evidence cut-offs (theta1, theta2, theta3) for level eligibility.
# Placeholder values for the uncalibrated starter model; real deployments
# replace them via ROC calibration.
DEFAULT_THRESHOLDS = (1.0, 3.0, 6.0)

# Minimum normalized type-evidence share for an ideology type to be listed
# as a membership.
MEMBERSHIP_THRESHOLD = 0.2

# Jensen-Shannon divergence above which a child actor is flagged as a
# potential splinter of its parent.
SPLINTER_THRESHOLD = 0.1

# Trend detection: least-squares slope of expected level over the last
# TREND_WINDOWS windows; |slope| must exceed the threshold (per window)
# to report Rising/Falling instead of Stable.
TREND_SLOPE_THRESHOLD = 0.05
TREND_WINDOWS = 3

# Serial-dehumanization defaults: >= N distinct items on >= D distinct days
# inside the assessment window. Overridable per policy.
SERIAL_N = 3
SERIAL_D = 2
DEFAULT_SERIAL_WINDOW_DAYS = 30

# Alerts only fire between windows whose confidence exceeds this.
DEFAULT_MIN_CONFIDENCE = 0.1
