"""Per-window feature catalog and slice-level feature matrix extraction.

Every function in the catalog maps one sample window (a 1-d float array)
to a scalar.  ``extract_feature_matrix`` evaluates a selection of catalog
features on every channel of a chosen role, aggregates the per-channel
values across channels (mean and population standard deviation by
default), and assembles one row per (recording, slice).

Missing values.  A small number of features are undefined for particular
windows.  Those cells are NaN in the returned matrix and empty in the CSV
export; NaN never appears for any other reason.  The documented cases:

* ``sample_entropy``: no template pair matches at length m or m+1.
* ``autocorrelation``: zero-variance window.
* ``change_quantiles``: no successive pair falls inside the corridor.
* ``fourier_entropy``: zero spectral power after mean removal.
* ``periodogram_coeff``: requested bin beyond the spectrum of the window.
* any feature: window shorter than the feature's minimum length.
* ``std`` aggregation: fewer than two channel values present.

Feature naming.  A matrix column renders as
``<aggregator>__<base>[__<param>_<value>...]`` with parameters in the
declared order of the catalog entry, for example
``mean__longest_strike_below_mean`` or ``std__quantile__q_0.8``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FeatureId",
    "FeatureMatrix",
    "CATALOG",
    "mean",
    "variance",
    "std",
    "quantile",
    "root_mean_square",
    "mean_change",
    "mean_abs_change",
    "longest_strike_below_mean",
    "longest_strike_above_mean",
    "number_peaks",
    "ratio_beyond_r_sigma",
    "binned_entropy",
    "sample_entropy",
    "lempel_ziv_complexity",
    "cid_ce",
    "autocorrelation",
    "band_power",
    "periodogram_coeff",
    "fourier_entropy",
    "change_quantiles",
    "linear_trend",
    "aggregate_across_channels",
    "default_selection",
    "parse_feature_spec",
    "expand_selection",
    "extract_feature_matrix",
    "feature_matrix_to_csv",
]


# ---------------------------------------------------------------------------
# scalar features
# ---------------------------------------------------------------------------

def _window(x):
    w = np.asarray(x, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("window must be a non-empty 1-d array")
    return w


def mean(x):
    """Arithmetic mean of the window."""
    return float(_window(x).mean())


def variance(x):
    """Population variance (normalised by n)."""
    return float(_window(x).var())


def std(x):
    """Population standard deviation (normalised by n)."""
    return float(_window(x).std())


def quantile(x, q):
    """Empirical quantile with linear interpolation between order statistics.

    Parameters
    ----------
    x: array_like
    q: float
        Quantile level in [0, 1].
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    return float(np.quantile(_window(x), q))


def root_mean_square(x):
    """Square root of the mean of squared samples."""
    w = _window(x)
    return float(np.sqrt(np.mean(np.square(w))))


def mean_change(x):
    """Mean of successive differences, (x[-1] - x[0]) / (n - 1)."""
    w = _window(x)
    if w.size < 2:
        raise ValueError("mean_change needs at least two samples")
    return float(np.mean(np.diff(w)))


def mean_abs_change(x):
    """Mean of absolute successive differences."""
    w = _window(x)
    if w.size < 2:
        raise ValueError("mean_abs_change needs at least two samples")
    return float(np.mean(np.abs(np.diff(w))))


def _longest_run(mask):
    ## longest run of consecutive True entries
    best = cur = 0
    for hit in mask:
        cur = cur + 1 if hit else 0
        if cur > best:
            best = cur
    return best


def longest_strike_below_mean(x):
    """Length of the longest run of samples strictly below the window mean."""
    w = _window(x)
    return float(_longest_run(w < w.mean()))


def longest_strike_above_mean(x):
    """Length of the longest run of samples strictly above the window mean."""
    w = _window(x)
    return float(_longest_run(w > w.mean()))


def number_peaks(x, n):
    """Count samples that strictly exceed their n neighbours on both sides.

    A sample at position i is a peak when ``x[i] > x[i - j]`` and
    ``x[i] > x[i + j]`` for every ``j`` in 1..n.  Positions closer than n
    to either edge cannot be peaks.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    w = _window(x)
    if w.size < 2 * n + 1:
        raise ValueError("window too short for peak support %d" % n)
    core = w[n:-n]
    is_peak = np.ones(core.size, dtype=bool)
    for j in range(1, n + 1):
        is_peak &= core > w[n - j : n - j + core.size]
        is_peak &= core > w[n + j : n + j + core.size]
    return float(np.count_nonzero(is_peak))


def ratio_beyond_r_sigma(x, r):
    """Fraction of samples farther than r standard deviations from the mean.

    Uses the population standard deviation; a zero-variance window gives 0.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    w = _window(x)
    s = w.std()
    if s == 0.0:
        return 0.0
    return float(np.count_nonzero(np.abs(w - w.mean()) > r * s) / w.size)


def binned_entropy(x, max_bins):
    """Shannon entropy (natural log) of an equal-width histogram.

    The histogram spans [min, max] of the window with ``max_bins`` bins.
    A constant window has zero entropy.
    """
    if max_bins < 1:
        raise ValueError("max_bins must be at least 1")
    w = _window(x)
    lo, hi = w.min(), w.max()
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(w, bins=max_bins, range=(lo, hi))
    p = counts[counts > 0] / w.size
    return float(-np.sum(p * np.log(p)))


def sample_entropy(x, m=2, r_frac=0.2):
    """Sample entropy with embedding dimension m and tolerance r_frac * std.

    Counts pairs of length-m subsequences whose Chebyshev distance stays
    within the tolerance, repeats the count for length m + 1 and returns
    the negative log of the ratio.  Returns NaN when either count is zero,
    i.e. when no template pair matches.

    Parameters
    ----------
    x: array_like
    m: int
        Embedding dimension, default 2.
    r_frac: float
        Tolerance as a fraction of the window standard deviation,
        default 0.2.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if r_frac <= 0:
        raise ValueError("r_frac must be positive")
    w = _window(x)
    if w.size < m + 2:
        raise ValueError("window too short for embedding dimension %d" % m)
    r = r_frac * w.std()

    def pair_count(length):
        k = w.size - length + 1
        t = np.lib.stride_tricks.sliding_window_view(w, length)
        ## Chebyshev distances of all template pairs, i < j
        d = np.abs(t[:, None, :] - t[None, :, :]).max(axis=2)
        hits = d <= r
        return (np.count_nonzero(hits) - k) // 2

    b = pair_count(m)
    a = pair_count(m + 1)
    if a == 0 or b == 0:
        return float("nan")
    return float(-math.log(a / b))


def _lz76_phrases(symbols):
    """Number of phrases in the Lempel-Ziv 1976 production parse.

    Each phrase is the shortest extension of the remaining text that
    cannot be copied from anywhere in the string before the phrase's last
    character (overlapping copies allowed).  The trailing phrase counts
    even when it is reproducible.
    """
    s = "".join(chr(48 + int(v)) for v in symbols)
    n = len(s)
    i = 0
    phrases = 0
    while i < n:
        length = 1
        while i + length <= n and s[i : i + length] in s[: i + length - 1]:
            length += 1
        phrases += 1
        i += length
    return phrases


def lempel_ziv_complexity(x, bins):
    """LZ76 phrase count of the bin-quantised window, divided by its length.

    The window is quantised into ``bins`` equal-width bins spanning
    [min, max]; the top edge belongs to the last bin.  A constant window
    maps to a single repeated symbol.
    """
    if bins < 2:
        raise ValueError("bins must be at least 2")
    w = _window(x)
    lo, hi = w.min(), w.max()
    if lo == hi:
        symbols = np.zeros(w.size, dtype=np.int64)
    else:
        edges = np.linspace(lo, hi, bins + 1)
        symbols = np.clip(np.searchsorted(edges, w, side="right") - 1, 0, bins - 1)
    return float(_lz76_phrases(symbols) / w.size)


def cid_ce(x, normalize):
    """Complexity estimate: root of the summed squared successive differences.

    With ``normalize`` the window is z-normalised first (population std);
    a zero-variance window yields 0.
    """
    w = _window(x)
    if w.size < 2:
        raise ValueError("cid_ce needs at least two samples")
    if normalize:
        s = w.std()
        if s == 0.0:
            return 0.0
        w = (w - w.mean()) / s
    d = np.diff(w)
    return float(np.sqrt(np.dot(d, d)))


def autocorrelation(x, lag):
    """Autocorrelation at the given lag.

    Computed as ``sum((x_t - mu)(x_{t+lag} - mu)) / ((n - lag) * var)``
    with the population mean and variance of the whole window.  NaN for a
    zero-variance window.
    """
    if lag < 1:
        raise ValueError("lag must be at least 1")
    w = _window(x)
    if lag >= w.size:
        raise ValueError("lag %d is not below the window length %d" % (lag, w.size))
    v = w.var()
    if v == 0.0:
        return float("nan")
    c = w - w.mean()
    return float(np.dot(c[:-lag], c[lag:]) / ((w.size - lag) * v))


def _periodogram(x, sample_rate):
    w = _window(x)
    if w.size < 2:
        raise ValueError("spectral features need at least two samples")
    spectrum = np.fft.rfft(w - w.mean())
    power = np.square(np.abs(spectrum)) / w.size
    freqs = np.fft.rfftfreq(w.size, d=1.0 / sample_rate)
    return freqs, power


def band_power(x, sample_rate, f_lo, f_hi):
    """Total periodogram power of bins with frequency in [f_lo, f_hi).

    The periodogram is ``|X_k|^2 / n`` of the mean-removed window.  A band
    entirely outside the spectrum contributes 0.
    """
    if not (0 <= f_lo < f_hi):
        raise ValueError("need 0 <= f_lo < f_hi")
    freqs, power = _periodogram(x, sample_rate)
    mask = (freqs >= f_lo) & (freqs < f_hi)
    return float(power[mask].sum())


def periodogram_coeff(x, sample_rate, k):
    """Periodogram value of frequency bin k, NaN when the window has no bin k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    _, power = _periodogram(x, sample_rate)
    if k >= power.size:
        return float("nan")
    return float(power[k])


def fourier_entropy(x, sample_rate):
    """Shannon entropy (natural log) of the normalised periodogram.

    The periodogram of the mean-removed window is scaled to sum to one and
    treated as a probability distribution.  NaN for a window with zero
    spectral power (a constant window).
    """
    _, power = _periodogram(x, sample_rate)
    total = power.sum()
    if total <= 0.0:
        return float("nan")
    p = power[power > 0] / total
    return float(-np.sum(p * np.log(p)))


def change_quantiles(x, ql, qh, isabs, f_agg):
    """Aggregated successive changes inside a quantile corridor.

    The corridor is [quantile(ql), quantile(qh)] of the window, both ends
    inclusive.  Successive differences ``x[t+1] - x[t]`` qualify when both
    endpoints lie inside the corridor; with ``isabs`` their absolute
    values are used.  ``f_agg`` selects the aggregate, ``"mean"`` or
    ``"var"`` (population variance).  NaN when no difference qualifies.
    """
    if not (0.0 <= ql < qh <= 1.0):
        raise ValueError("need 0 <= ql < qh <= 1")
    if f_agg not in ("mean", "var"):
        raise ValueError("f_agg must be 'mean' or 'var'")
    w = _window(x)
    if w.size < 2:
        raise ValueError("change_quantiles needs at least two samples")
    lo = np.quantile(w, ql)
    hi = np.quantile(w, qh)
    inside = (w >= lo) & (w <= hi)
    take = inside[:-1] & inside[1:]
    if not np.any(take):
        return float("nan")
    d = np.diff(w)[take]
    if isabs:
        d = np.abs(d)
    return float(d.mean() if f_agg == "mean" else d.var())


def linear_trend(x):
    """Least-squares line through (0, x[0]), (1, x[1]), ...

    Returns
    -------
    dict with keys ``slope``, ``intercept`` and ``r_squared``.  A constant
    window yields slope 0 and r_squared 0.
    """
    w = _window(x)
    if w.size < 2:
        raise ValueError("linear_trend needs at least two samples")
    t = np.arange(w.size, dtype=np.float64)
    t_c = t - t.mean()
    w_c = w - w.mean()
    denom = np.dot(t_c, t_c)
    slope = float(np.dot(t_c, w_c) / denom)
    intercept = float(w.mean() - slope * t.mean())
    ss_tot = float(np.dot(w_c, w_c))
    if ss_tot == 0.0:
        return {"slope": 0.0, "intercept": float(w.mean()), "r_squared": 0.0}
    resid = w - (intercept + slope * t)
    r2 = 1.0 - float(np.dot(resid, resid)) / ss_tot
    return {"slope": slope, "intercept": intercept, "r_squared": r2}


def aggregate_across_channels(values, how):
    """Combine one feature's per-channel values into a single number.

    Parameters
    ----------
    values: array_like
        One value per channel; NaN marks a missing input and is excluded.
    how: {"mean", "std"}
        ``std`` is the population standard deviation and needs at least
        two present values.

    Returns
    -------
    float
        NaN when all inputs are missing, or for ``std`` with fewer than
        two present values.
    """
    if how not in ("mean", "std"):
        raise ValueError("how must be 'mean' or 'std'")
    v = np.asarray(values, dtype=np.float64)
    v = v[~np.isnan(v)]
    if how == "mean":
        if v.size == 0:
            return float("nan")
        return float(v.mean())
    if v.size < 2:
        return float("nan")
    return float(v.std())


# ---------------------------------------------------------------------------
# catalog registry and feature identifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _CatalogEntry:
    name: str
    param_names: tuple
    compute: object          # (window, sample_rate, params dict) -> float
    min_length: int = 1
    defaults: tuple = ()     # default parameter combinations, each a dict


def _entry(name, param_names, fn, min_length, defaults):
    return _CatalogEntry(
        name=name,
        param_names=tuple(param_names),
        compute=fn,
        min_length=min_length,
        defaults=tuple(defaults),
    )


def _peaks_min_len(p):
    return 2 * p["n"] + 1


CATALOG = {}

for _name, _fn, _minlen in [
    ("mean", lambda w, sr, p: mean(w), 1),
    ("variance", lambda w, sr, p: variance(w), 1),
    ("std", lambda w, sr, p: std(w), 1),
    ("root_mean_square", lambda w, sr, p: root_mean_square(w), 1),
    ("mean_change", lambda w, sr, p: mean_change(w), 2),
    ("mean_abs_change", lambda w, sr, p: mean_abs_change(w), 2),
    ("longest_strike_below_mean", lambda w, sr, p: longest_strike_below_mean(w), 1),
    ("longest_strike_above_mean", lambda w, sr, p: longest_strike_above_mean(w), 1),
]:
    CATALOG[_name] = _entry(_name, (), _fn, _minlen, ({},))

CATALOG["quantile"] = _entry(
    "quantile", ("q",), lambda w, sr, p: quantile(w, **p), 1,
    tuple({"q": round(0.1 * i, 1)} for i in range(1, 10)),
)
CATALOG["number_peaks"] = _entry(
    "number_peaks", ("n",), lambda w, sr, p: number_peaks(w, **p), 3,
    ({"n": 1}, {"n": 3}, {"n": 5}),
)
CATALOG["ratio_beyond_r_sigma"] = _entry(
    "ratio_beyond_r_sigma", ("r",), lambda w, sr, p: ratio_beyond_r_sigma(w, **p), 1,
    ({"r": 1.0}, {"r": 1.5}, {"r": 2.0}),
)
CATALOG["binned_entropy"] = _entry(
    "binned_entropy", ("max_bins",), lambda w, sr, p: binned_entropy(w, **p), 1,
    ({"max_bins": 10},),
)
CATALOG["sample_entropy"] = _entry(
    "sample_entropy", ("m", "r_frac"), lambda w, sr, p: sample_entropy(w, **p), 4,
    ({"m": 2, "r_frac": 0.2},),
)
CATALOG["lempel_ziv_complexity"] = _entry(
    "lempel_ziv_complexity", ("bins",), lambda w, sr, p: lempel_ziv_complexity(w, **p), 1,
    ({"bins": 2}, {"bins": 100}),
)
CATALOG["cid_ce"] = _entry(
    "cid_ce", ("normalize",), lambda w, sr, p: cid_ce(w, **p), 2,
    ({"normalize": False}, {"normalize": True}),
)
CATALOG["autocorrelation"] = _entry(
    "autocorrelation", ("lag",), lambda w, sr, p: autocorrelation(w, **p), 2,
    tuple({"lag": k} for k in (1, 2, 3, 5, 10)),
)
CATALOG["band_power"] = _entry(
    "band_power", ("f_lo", "f_hi"), lambda w, sr, p: band_power(w, sr, **p), 8,
    (
        {"f_lo": 0.0, "f_hi": 0.25},
        {"f_lo": 0.25, "f_hi": 0.5},
        {"f_lo": 0.5, "f_hi": 0.75},
        {"f_lo": 0.75, "f_hi": 1.0},
    ),
)
CATALOG["periodogram_coeff"] = _entry(
    "periodogram_coeff", ("k",), lambda w, sr, p: periodogram_coeff(w, sr, **p), 8,
    tuple({"k": k} for k in (1, 2, 3, 5)),
)
CATALOG["fourier_entropy"] = _entry(
    "fourier_entropy", (), lambda w, sr, p: fourier_entropy(w, sr), 8, ({},),
)
CATALOG["change_quantiles"] = _entry(
    "change_quantiles", ("f_agg", "isabs", "qh", "ql"),
    lambda w, sr, p: change_quantiles(w, p["ql"], p["qh"], p["isabs"], p["f_agg"]), 2,
    tuple(
        {"f_agg": agg, "isabs": isabs, "qh": qh, "ql": ql}
        for ql, qh in ((0.2, 0.6), (0.2, 0.8), (0.4, 0.6))
        for isabs in (False, True)
        for agg in ("mean", "var")
    ),
)
CATALOG["linear_trend"] = _entry(
    "linear_trend", ("attr",), lambda w, sr, p: linear_trend(w)[p["attr"]], 2,
    ({"attr": "slope"}, {"attr": "intercept"}, {"attr": "r_squared"}),
)

AUTOCORRELATION_LAG_MIN_EXTRA = 1  # lag must stay below the window length


def _render_value(v):
    if isinstance(v, bool):
        return "True" if v else "False"
    if isinstance(v, str):
        return '"%s"' % v
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass(frozen=True)
class FeatureId:
    """Identifier of one feature-matrix column.

    ``aggregator`` is the cross-channel combination ("mean", "std" or None
    for a raw single-channel value), ``base`` the catalog feature name and
    ``params`` its parameters as an ordered tuple of (name, value) pairs.
    """

    aggregator: str | None
    base: str
    params: tuple = ()

    def render(self):
        parts = [self.base]
        parts += ["%s_%s" % (name, _render_value(value)) for name, value in self.params]
        body = "__".join(parts)
        if self.aggregator:
            return "%s__%s" % (self.aggregator, body)
        return body

    def __str__(self):
        return self.render()


def default_selection():
    """The full default catalog as (base, params) pairs."""
    out = []
    for name in CATALOG:
        for combo in CATALOG[name].defaults:
            out.append((name, dict(combo)))
    return out


def _parse_scalar(text):
    if text == "True":
        return True
    if text == "False":
        return False
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_feature_spec(spec):
    """Parse a feature selection token into (base, params).

    A bare catalog name selects all default parameter combinations for
    that feature.  A rendered form such as ``quantile__q_0.8`` or
    ``change_quantiles__f_agg_"mean"__isabs_False__qh_0.6__ql_0.2`` pins
    the parameters.

    Returns
    -------
    list of (base, params dict) pairs.
    """
    spec = spec.strip()
    if spec in CATALOG:
        return [(spec, dict(combo)) for combo in CATALOG[spec].defaults]

    tokens = spec.split("__")
    base = None
    for take in range(len(tokens), 0, -1):
        candidate = "__".join(tokens[:take])
        if candidate in CATALOG:
            base = candidate
            rest = tokens[take:]
            break
    if base is None:
        raise ValueError("unknown feature %r" % spec)
    entry = CATALOG[base]
    params = {}
    names = sorted(entry.param_names, key=len, reverse=True)
    for token in rest:
        for name in names:
            if token.startswith(name + "_"):
                params[name] = _parse_scalar(token[len(name) + 1 :])
                break
        else:
            raise ValueError("feature %r: cannot parse parameter token %r" % (spec, token))
    missing = [n for n in entry.param_names if n not in params]
    if missing:
        raise ValueError("feature %r: missing parameter(s) %s" % (spec, ", ".join(missing)))
    return [(base, params)]


def expand_selection(selection):
    """Expand feature selection strings into unique (base, params) pairs."""
    if selection is None:
        pairs = default_selection()
    else:
        pairs = []
        for spec in selection:
            pairs.extend(parse_feature_spec(spec))
    seen = set()
    out = []
    for base, params in pairs:
        key = (base, tuple(sorted(params.items())))
        if key not in seen:
            seen.add(key)
            out.append((base, params))
    return out


# ---------------------------------------------------------------------------
# matrix extraction
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class FeatureMatrix:
    """Feature values per (recording, slice) row.

    ``rows`` lists (recording_id, slice_index) keys in order, ``columns``
    the FeatureId per matrix column, and ``values`` the float matrix with
    NaN marking missing cells.
    """

    rows: list
    columns: list
    values: np.ndarray

    @property
    def column_names(self):
        return [c.render() for c in self.columns]


def _ordered_params(base, params):
    entry = CATALOG[base]
    extra = set(params) - set(entry.param_names)
    if extra:
        raise ValueError("feature %r does not take parameter(s) %s" % (base, ", ".join(sorted(extra))))
    return tuple((name, params[name]) for name in entry.param_names)


def _evaluate(entry, window, sample_rate, params):
    if window.size < entry.min_length:
        return float("nan")
    if entry.name == "autocorrelation" and params["lag"] >= window.size:
        return float("nan")
    if entry.name == "number_peaks" and window.size < 2 * params["n"] + 1:
        return float("nan")
    if entry.name == "sample_entropy" and window.size < params["m"] + 2:
        return float("nan")
    return entry.compute(window, sample_rate, params)


def extract_feature_matrix(recordings, slices, selection=None, role="movement",
                           aggregators=("mean", "std")):
    """Build the slice-level feature matrix for one channel role.

    Parameters
    ----------
    recordings: list of RecordingGroup
        Needed for channel roles and sample rates.
    slices: list of Slice
        Slices of those recordings, any order; rows come out sorted by
        (recording_id, slice_index).
    selection: list of str or None
        Feature selection tokens (see ``parse_feature_spec``); None means
        the full default catalog.
    role: str
        Channel role whose windows are evaluated.
    aggregators: tuple of str
        Cross-channel aggregations; "mean" and "std", or "none" for the
        raw value of a single channel of the role.

    Returns
    -------
    FeatureMatrix
        Columns sorted lexicographically by rendered name.  Missing
        feature values are NaN.
    """
    for agg in aggregators:
        if agg not in ("mean", "std", "none"):
            raise ValueError("unknown aggregator %r" % agg)
    groups = {g.recording_id: g for g in recordings}
    pairs = expand_selection(selection)
    if not pairs:
        raise ValueError("empty feature selection")

    columns = []
    for base, params in pairs:
        ordered = _ordered_params(base, params)
        for agg in aggregators:
            columns.append(FeatureId(aggregator=None if agg == "none" else agg,
                                     base=base, params=ordered))
    columns.sort(key=lambda c: c.render())

    ordered_slices = sorted(slices, key=lambda s: (s.recording_id, s.slice_index))
    rows = []
    data = np.full((len(ordered_slices), len(columns)), np.nan)

    for r, sl in enumerate(ordered_slices):
        group = groups.get(sl.recording_id)
        if group is None:
            raise ValueError("slice references unknown recording %r" % sl.recording_id)
        chans = group.channels_with_role(role)
        if not chans:
            raise ValueError("recording %r has no channel with role %r" % (sl.recording_id, role))
        if "none" in aggregators and len(chans) > 1:
            raise ValueError(
                "aggregator 'none' needs a single %r channel, recording %r has %d"
                % (role, sl.recording_id, len(chans))
            )
        rows.append((sl.recording_id, sl.slice_index))

        per_channel = {}
        for base, params in pairs:
            entry = CATALOG[base]
            vals = np.array([
                _evaluate(entry, sl.windows[ch.channel_id], ch.sample_rate, params)
                for ch in chans
            ])
            per_channel[(base, _ordered_params(base, params))] = vals

        for c, col in enumerate(columns):
            vals = per_channel[(col.base, col.params)]
            if col.aggregator is None:
                data[r, c] = vals[0]
            else:
                data[r, c] = aggregate_across_channels(vals, col.aggregator)

    return FeatureMatrix(rows=rows, columns=columns, values=data)


def feature_matrix_to_csv(matrix, path):
    """Write a feature matrix as CSV; missing cells are left empty."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["recording_id", "slice_index"] + matrix.column_names)
        for (rid, idx), row in zip(matrix.rows, matrix.values):
            cells = [rid, str(idx)]
            cells += ["" if np.isnan(v) else repr(float(v)) for v in row]
            writer.writerow(cells)
