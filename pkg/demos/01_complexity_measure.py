"""
How the complexity score reads a window
========================================

A window of samples gets two scores in [0, 1]: fluctuation, which grows
with strong and frequent direction changes, and distribution, which
grows when the values spread evenly over the measurement scale.  Their
product is the dynamic complexity of the window.
"""

import numpy as np

from tslex import DynCompConfig, dynamic_complexity_series, fluctuation, distribution, points_of_return
from tslex.ingest import Channel

domain = (0.0, 4.0)

# Direction changes are read off the turning points of the window.  The
# first and last sample always count; an interior sample counts when the
# step entering it and the step leaving it differ in sign.
w = np.array([0.0, 4.0, 2.0, 2.0, 3.0])
print("window        ", w)
print("turning points", points_of_return(w))

# A constant window never turns, so its fluctuation is exactly 0.  The
# hardest possible zig-zag, jumping between the domain ends at every
# step, scores exactly 1.  Everything else lands in between.
print("\nfluctuation of a constant:", fluctuation(np.full(8, 2.0), domain))
print("fluctuation of a hard zig-zag:", fluctuation(np.tile([0.0, 4.0], 4), domain))
print("fluctuation of [0, 4, 2]:", fluctuation([0.0, 4.0, 2.0], domain))

# Distribution compares the sorted window against an evenly spaced
# ladder across the domain and penalises every gap that falls short of
# the ideal, over all sub-ranges.  The ladder itself scores 1; a window
# stuck on one value scores 0.
print("\ndistribution of the even ladder:", distribution(np.linspace(0, 4, 9), domain))
print("distribution of [0, 0, 4]:", distribution([0.0, 0.0, 4.0], domain))
print("distribution of a constant:", distribution(np.full(8, 2.0), domain))

# On a real signal the two components are computed over a rolling
# window.  Complexity peaks where the signal is both lively and spread
# out, not where it is merely large.
rng = np.random.default_rng(7)
calm = 0.1 * rng.normal(size=120) + 2.0
lively = 2.0 * np.sin(np.arange(120) * 1.1) + 0.4 * rng.normal(size=120) + 2.0
signal = np.concatenate([calm, lively])

series = dynamic_complexity_series(
    Channel("demo", 10.0, signal),
    DynCompConfig(window=30, step=1, domain=(0.0, 4.0)),
    recording_id="walkthrough",
)
split = np.searchsorted(series.start_times, 12.0)
print("\nmean complexity while calm:  %.3f" % series.complexity[:split].mean())
print("mean complexity while lively: %.3f" % series.complexity[split:].mean())
