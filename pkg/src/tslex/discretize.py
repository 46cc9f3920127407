"""Tercile discretisation of feature columns into nominal attributes.

Subgroup search operates on nominal data, so every numeric feature column
is cut at its 1/3 and 2/3 quantiles into the labels ``low``, ``medium``
and ``high``.  Columns without any variation cannot be cut and are
dropped; rows that still contain missing cells after column clean-up are
removed from the mining table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LABELS = ("low", "medium", "high")


@dataclass(frozen=True)
class BinScheme:
    """Tercile edges for one feature column.

    ``e1`` and ``e2`` are the 1/3 and 2/3 quantiles (linear interpolation
    between order statistics).  ``dropped`` marks a degenerate column
    whose values were all identical; such a scheme must not be applied.
    """

    feature: str
    e1: float
    e2: float
    dropped: bool = False


@dataclass(eq=False)
class NominalTable:
    """Label matrix over (recording_id, slice_index) rows.

    ``labels`` stores small ints indexing into LABELS.
    """

    rows: list
    columns: list
    labels: np.ndarray

    def column_labels(self, name):
        """Rendered labels of one column, as a list of strings."""
        c = self.columns.index(name)
        return [LABELS[v] for v in self.labels[:, c]]


def fit_bins(feature, values):
    """Fit tercile edges on the non-missing values of one column.

    Parameters
    ----------
    feature: str
        Column name, kept in the scheme for reporting.
    values: array_like
        Column values; NaN entries are ignored.

    Returns
    -------
    BinScheme
        ``dropped`` is set when all values are identical.

    Raises
    ------
    ValueError
        With fewer than three non-missing values.
    """
    v = np.asarray(values, dtype=np.float64)
    v = v[~np.isnan(v)]
    if v.size < 3:
        raise ValueError("column %r has %d non-missing values; need at least 3" % (feature, v.size))
    e1 = float(np.quantile(v, 1.0 / 3.0))
    e2 = float(np.quantile(v, 2.0 / 3.0))
    distinct = np.unique(v).size
    return BinScheme(feature=feature, e1=e1, e2=e2, dropped=(e1 == e2 and distinct < 2))


def apply_bins(scheme, value):
    """Map one value to its tercile label.

    ``low`` for value <= e1, ``medium`` for e1 < value <= e2, ``high``
    above e2.

    Raises
    ------
    ValueError
        When the scheme is marked dropped.
    """
    if scheme.dropped:
        raise ValueError("column %r was dropped as degenerate" % scheme.feature)
    if value <= scheme.e1:
        return "low"
    if value <= scheme.e2:
        return "medium"
    return "high"


def discretize_matrix(matrix):
    """Turn a FeatureMatrix into a NominalTable.

    Columns that are missing in every row are dropped first, then rows
    with any remaining missing cell, then columns whose retained values
    are all identical.  Each event is reported as a warning string.

    Returns
    -------
    (NominalTable, dict of BinScheme by column name, list of str)
        The schemes include dropped columns with their flag set.
    """
    names = matrix.column_names
    values = matrix.values
    warnings = []

    keep = []
    for c, name in enumerate(names):
        if np.all(np.isnan(values[:, c])):
            warnings.append("column %s dropped: missing in every row" % name)
        else:
            keep.append(c)
    if not keep:
        raise ValueError("no feature column has any values")
    values = values[:, keep]
    names = [names[c] for c in keep]

    complete = ~np.isnan(values).any(axis=1)
    n_dropped = int(np.count_nonzero(~complete))
    if n_dropped:
        warnings.append("%d row(s) excluded: missing value in a selected column" % n_dropped)
    rows = [r for r, ok in zip(matrix.rows, complete) if ok]
    values = values[complete]
    if values.shape[0] < 3:
        raise ValueError("fewer than 3 complete rows; cannot fit terciles")

    schemes = {}
    cols = []
    labels = []
    for c, name in enumerate(names):
        scheme = fit_bins(name, values[:, c])
        schemes[name] = scheme
        if scheme.dropped:
            warnings.append("column %s dropped: all values identical" % name)
            continue
        col = np.where(values[:, c] <= scheme.e1, 0,
                       np.where(values[:, c] <= scheme.e2, 1, 2))
        cols.append(name)
        labels.append(col.astype(np.int8))
    if not cols:
        raise ValueError("every feature column is degenerate; nothing to mine")

    table = NominalTable(rows=rows, columns=cols, labels=np.column_stack(labels))
    return table, schemes, warnings


def nominal_table_to_csv(table, path):
    """Write the label table as CSV."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["recording_id", "slice_index"] + list(table.columns))
        for (rid, idx), row in zip(table.rows, table.labels):
            writer.writerow([rid, str(idx)] + [LABELS[v] for v in row])
