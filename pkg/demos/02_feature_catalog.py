"""
The window feature catalog
==========================

Per-slice features summarise each channel window: moments, strikes,
peaks, entropies, spectral summaries and trend lines.  Features carry
their parameters in a rendered name, so every matrix column is
self-describing.
"""

import numpy as np

from tslex import extract_feature_matrix
from tslex.features import (
    CATALOG,
    default_selection,
    lempel_ziv_complexity,
    longest_strike_below_mean,
    parse_feature_spec,
    sample_entropy,
)
from tslex.ingest import Channel, RecordingGroup, slice_recording

# The catalog maps every base feature to its parameters and defaults.
print("catalog size:", len(CATALOG), "base features")
print("default parameter combinations:", len(default_selection()))

# A few individual features on a toy window.
w = np.array([1.0, 1.0, 0.0, 0.0, 0.0, 2.0])
print("\nlongest strike below the mean of", w, "->", longest_strike_below_mean(w))
print("production complexity of an alternating window:",
      lempel_ziv_complexity(np.tile([0.0, 1.0], 4), bins=2))
print("sample entropy of a nearly constant window:",
      sample_entropy(np.array([1.0, 1.0, 1.0, 1.0, 1.0, 2.0])))

# Selection strings are either a bare catalog name, which expands to all
# default parameter combinations, or a rendered name pinning them.
print("\n'quantile' expands to %d combinations" % len(parse_feature_spec("quantile")))
print("a pinned one:", parse_feature_spec("quantile__q_0.8"))

# Extraction walks (recording, slice) pairs and evaluates each feature
# per channel of the chosen role, then combines across channels: the
# mean and the spread between channels each become a column.
rng = np.random.default_rng(3)
group = RecordingGroup(
    "session-a",
    [
        Channel("left", 5.0, rng.normal(size=600)),
        Channel("right", 5.0, rng.normal(size=600) * 2.0),
        Channel("voice", 10.0, rng.normal(size=1200)),
    ],
    {"left": "movement", "right": "movement", "voice": "speech"},
)
slices = slice_recording(group, 30.0)
matrix = extract_feature_matrix([group], slices,
                                selection=["variance", "quantile__q_0.5"],
                                role="movement")
print("\nmatrix rows:", matrix.rows)
print("matrix columns:")
for name in matrix.column_names:
    print("   ", name)
print("first row:", np.round(matrix.values[0], 4))
