"""Dynamic complexity of a signal over rolling windows, and mining targets.

The measure scores each window of a series with the product of two
components.  Fluctuation captures how strongly and how often the signal
changes direction: it accumulates the absolute change between successive
turning points, scaled by the time between them, and normalises by the
steepest possible zig-zag across the measurement domain.  Distribution
captures how evenly the window's values spread across that domain: it
compares the gaps of the sorted window against a perfectly even ladder
and penalises every gap that falls short, over all sub-ranges.  Both
components live in [0, 1], as does their product.

The per-window complexity series then feeds slice-level targets: the mean
complexity of a slice (z-scored over the whole corpus), its within-slice
trend, or the change from the previous slice.  A lag shift pairs the
features of one slice with the target of a later slice.

Functions
---------
points_of_return
    Indices where the series changes direction, plus both ends.
fluctuation
    Turning-point based intensity of change, in [0, 1].
distribution
    Evenness of value spread over the domain, in [0, 1].
dynamic_complexity_series
    Rolling fluctuation * distribution over a channel.
slice_targets
    Aggregate a complexity series into per-slice target values.
apply_lag
    Align a nominal table with the target L slices later.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .discretize import NominalTable

TARGET_KINDS = ("mean_z", "slope", "delta")


@dataclass(frozen=True)
class DynCompConfig:
    """Rolling-window settings for the complexity series.

    ``window`` is the window length in samples (at least 4), ``step`` the
    hop between window starts. ``domain`` is either the pair (lo, hi) of
    the measurement scale or "auto", which uses the observed min and max
    of the whole channel.
    """

    window: int = 30
    step: int = 1
    domain: object = "auto"

    def __post_init__(self):
        if self.window < 4:
            raise ValueError("window must be at least 4 samples")
        if self.step < 1:
            raise ValueError("step must be at least 1")
        if self.domain != "auto":
            lo, hi = self.domain
            if not (float(lo) <= float(hi)):
                raise ValueError("domain low end exceeds high end")


def points_of_return(x):
    """Indices where the series changes direction, including both ends.

    The first and last index are always present.  An interior index j is
    included when the sign of the step leaving it differs from the sign
    of the step entering it, where a zero step counts as its own sign
    (so the edges of a plateau are turning points).

    Parameters
    ----------
    x: array_like
        Window of at least 2 samples.

    Returns
    -------
    ndarray of int
        Strictly increasing 0-based indices.
    """
    w = np.asarray(x, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("need a 1-d window of at least 2 samples")
    signs = np.sign(np.diff(w))
    interior = np.nonzero(signs[1:] != signs[:-1])[0] + 1
    return np.concatenate(([0], interior, [w.size - 1])).astype(np.intp)


def _clamped(x, domain):
    w = np.asarray(x, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("need a 1-d window of at least 2 samples")
    if not np.all(np.isfinite(w)):
        raise ValueError("window contains non-finite values")
    lo, hi = float(domain[0]), float(domain[1])
    if not lo <= hi:
        raise ValueError("domain low end exceeds high end")
    return np.clip(w, lo, hi), lo, hi


def fluctuation(x, domain):
    """Intensity of direction change of a window, in [0, 1].

    Between each pair of consecutive turning points the absolute value
    change is divided by the index distance and by the domain width; the
    mean over the window's maximal number of steps is the score.  A
    constant window scores 0; alternating between the domain ends at
    every step scores 1.  Values outside the domain are clamped first.

    Parameters
    ----------
    x: array_like
        Window of at least 2 samples.
    domain: (float, float)
        Measurement scale (lo, hi).  A zero-width domain yields 0.

    Returns
    -------
    float
    """
    w, lo, hi = _clamped(x, domain)
    d = hi - lo
    if d == 0.0:
        return 0.0
    p = points_of_return(w)
    vals = w[p]
    steps = np.diff(p).astype(np.float64)
    total = float(np.sum(np.abs(np.diff(vals)) / (steps * d)))
    return total / (w.size - 1)


def distribution(x, domain):
    """Evenness of the value spread across the domain, in [0, 1].

    The sorted window is compared with an ideal ladder of equally spaced
    values from domain lo to hi.  For every sub-range of positions and
    every pair inside it, the shortfall of the empirical gap against the
    ideal gap (when positive) is taken relative to the ideal gap; one
    minus the average shortfall is the score.  A window holding exactly
    the ideal ladder scores 1, a constant window 0.  Values outside the
    domain are clamped first.

    Parameters
    ----------
    x: array_like
        Window of at least 2 samples.
    domain: (float, float)
        Measurement scale (lo, hi).  A zero-width domain yields 0.

    Returns
    -------
    float
    """
    w, lo, hi = _clamped(x, domain)
    if hi - lo == 0.0:
        return 0.0
    m = w.size
    s = np.sort(w)
    y = np.linspace(lo, hi, m)

    idx = np.arange(1, m + 1, dtype=np.float64)
    ## pair (a, b), a < b, occurs in a * (m - b + 1) sub-ranges
    weights = np.outer(idx, (m - idx + 1.0))

    gap_ideal = y[None, :] - y[:, None]
    gap_seen = s[None, :] - s[:, None]
    shortfall = gap_ideal - gap_seen

    upper = np.triu(np.ones((m, m), dtype=bool), k=1)
    pos = upper & (shortfall > 0.0)
    total_terms = float(weights[upper].sum())
    penalty = float((weights[pos] * shortfall[pos] / gap_ideal[pos]).sum())
    score = 1.0 - penalty / total_terms
    if score < 0.0:
        return 0.0
    if score > 1.0:
        return 1.0
    return score


@dataclass(eq=False)
class DynamicComplexitySeries:
    """Rolling complexity of one channel.

    One entry per window position: the window start time in seconds, the
    fluctuation and distribution components and their product.
    ``degenerate_domain`` is set when the domain had zero width, in which
    case every value is 0.
    """

    recording_id: str
    channel_id: str
    start_times: np.ndarray
    fluctuation: np.ndarray
    distribution: np.ndarray
    complexity: np.ndarray
    window: int
    step: int
    domain: tuple
    degenerate_domain: bool = False


def dynamic_complexity_series(channel, config=None, recording_id=""):
    """Rolling fluctuation * distribution over a channel.

    Window k covers samples [k * step, k * step + window); its start time
    is the start sample index over the sample rate.  With an "auto"
    domain the observed min and max of the whole channel are used.

    Parameters
    ----------
    channel: Channel
    config: DynCompConfig or None
    recording_id: str
        Carried through for reporting.

    Returns
    -------
    DynamicComplexitySeries

    Raises
    ------
    ValueError
        When the channel is shorter than one window.
    """
    cfg = config or DynCompConfig()
    v = channel.values
    if v.size < cfg.window:
        raise ValueError(
            "channel %r has %d samples; complexity window needs %d"
            % (channel.channel_id, v.size, cfg.window)
        )
    if cfg.domain == "auto":
        lo, hi = float(v.min()), float(v.max())
    else:
        lo, hi = float(cfg.domain[0]), float(cfg.domain[1])

    n_windows = (v.size - cfg.window) // cfg.step + 1
    starts = np.arange(n_windows) * cfg.step
    start_times = starts / channel.sample_rate

    degenerate = hi == lo
    f = np.zeros(n_windows)
    d = np.zeros(n_windows)
    if not degenerate:
        for k, s0 in enumerate(starts):
            win = v[s0 : s0 + cfg.window]
            f[k] = fluctuation(win, (lo, hi))
            d[k] = distribution(win, (lo, hi))
    return DynamicComplexitySeries(
        recording_id=recording_id,
        channel_id=channel.channel_id,
        start_times=start_times,
        fluctuation=f,
        distribution=d,
        complexity=f * d,
        window=cfg.window,
        step=cfg.step,
        domain=(lo, hi),
        degenerate_domain=degenerate,
    )


@dataclass(eq=False)
class TargetVector:
    """Per-slice target values for subgroup search.

    ``rows`` holds (recording_id, slice_index) keys aligned with
    ``values``.  ``lag`` records how far the target was shifted against
    the feature rows (0 before alignment).  ``degenerate`` is set when
    z-scoring met zero variance and every value was forced to 0.
    """

    rows: list
    values: np.ndarray
    kind: str
    lag: int = 0
    degenerate: bool = False
    warnings: list = field(default_factory=list)


def slice_targets(series_by_recording, slice_counts, slice_seconds, kind="mean_z"):
    """Aggregate complexity series into one target value per slice.

    Every complexity value is assigned to the slice containing its window
    start time.  ``mean_z`` takes the per-slice mean and z-scores it over
    all slices of all recordings (population standard deviation); when
    the variance is zero all targets become 0 and ``degenerate`` is set.
    ``slope`` fits a least-squares line through (start time, complexity)
    within each slice.  ``delta`` is the difference between the slice
    mean and the previous slice's mean; the first slice of each recording
    has no value.

    Parameters
    ----------
    series_by_recording: dict
        recording_id -> DynamicComplexitySeries.
    slice_counts: dict
        recording_id -> number of slices of that recording.
    slice_seconds: float
        Slice duration used to map start times to slice indices.
    kind: {"mean_z", "slope", "delta"}

    Returns
    -------
    TargetVector

    Raises
    ------
    ValueError
        When a slice contains no complexity value (or fewer than two for
        ``slope``), or the kind is unknown.
    """
    if kind not in TARGET_KINDS:
        raise ValueError("unknown target kind %r" % kind)
    if not series_by_recording:
        raise ValueError("no complexity series given")

    rows = []
    values = []
    warnings = []

    for rid in sorted(series_by_recording):
        series = series_by_recording[rid]
        n_slices = slice_counts[rid]
        idx = np.floor(series.start_times / slice_seconds).astype(np.intp)
        keep = idx < n_slices
        idx = idx[keep]
        comp = series.complexity[keep]
        times = series.start_times[keep]

        per_slice = []
        for i in range(n_slices):
            mask = idx == i
            count = int(np.count_nonzero(mask))
            if count == 0:
                raise ValueError("recording %r slice %d overlaps no complexity window" % (rid, i))
            if kind == "slope":
                if count < 2:
                    raise ValueError(
                        "recording %r slice %d has %d complexity value(s); slope needs 2" % (rid, i, count)
                    )
                t = times[mask]
                c = comp[mask]
                t_c = t - t.mean()
                per_slice.append(float(np.dot(t_c, c - c.mean()) / np.dot(t_c, t_c)))
            else:
                per_slice.append(float(comp[mask].mean()))

        if kind == "delta":
            for i in range(1, n_slices):
                rows.append((rid, i))
                values.append(per_slice[i] - per_slice[i - 1])
        else:
            for i in range(n_slices):
                rows.append((rid, i))
                values.append(per_slice[i])

    out = np.asarray(values, dtype=np.float64)
    degenerate = False
    if kind == "mean_z":
        mu = out.mean()
        sigma = out.std()
        if sigma == 0.0:
            out = np.zeros_like(out)
            degenerate = True
            warnings.append("target z-scoring degenerate: zero variance, all targets set to 0")
        else:
            out = (out - mu) / sigma
    return TargetVector(rows=rows, values=out, kind=kind, lag=0,
                        degenerate=degenerate, warnings=warnings)


def apply_lag(table, target, lag):
    """Pair each feature row with the target ``lag`` slices later.

    An instance survives when the feature row (recording, i) exists in
    the table and the target holds a value for (recording, i + lag).  For
    a complete table and a full target this removes exactly ``lag`` rows
    per recording.

    Parameters
    ----------
    table: NominalTable
    target: TargetVector
        Unshifted targets (lag 0).
    lag: int
        Non-negative shift in slices.

    Returns
    -------
    (NominalTable, TargetVector)
        Row-aligned pair; the returned target carries ``lag``.

    Raises
    ------
    ValueError
        When the lag is negative, or at least as large as some
        recording's slice count.
    """
    if lag < 0:
        raise ValueError("lag must be non-negative")
    by_key = {key: i for i, key in enumerate(target.rows)}

    max_index = {}
    for rid, i in target.rows:
        max_index[rid] = max(max_index.get(rid, -1), i)
    for rid, top in max_index.items():
        if lag > top:
            raise ValueError("lag %d is not below the slice count of recording %r" % (lag, rid))

    rows = []
    keep = []
    picked = []
    for r, (rid, i) in enumerate(table.rows):
        j = by_key.get((rid, i + lag))
        if j is not None:
            rows.append((rid, i))
            keep.append(r)
            picked.append(j)
    if not rows:
        raise ValueError("lag %d leaves no aligned instances" % lag)

    aligned_table = NominalTable(rows=rows, columns=list(table.columns),
                                 labels=table.labels[keep])
    aligned_target = TargetVector(rows=rows, values=target.values[picked],
                                  kind=target.kind, lag=lag,
                                  degenerate=target.degenerate,
                                  warnings=list(target.warnings))
    return aligned_table, aligned_target


def complexity_series_to_csv(series_list, path):
    """Write complexity series as CSV rows of window start, F, D, product."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["recording_id", "window_start_s", "F", "D", "complexity"])
        for series in series_list:
            for t, f, d, c in zip(series.start_times, series.fluctuation,
                                  series.distribution, series.complexity):
                writer.writerow([series.recording_id, repr(float(t)), repr(float(f)),
                                 repr(float(d)), repr(float(c))])
