"""Top-k subgroup search over nominal tables with a numeric target.

A selector fixes one attribute to one label; a pattern is a conjunction
of selectors over distinct attributes.  The interestingness of a pattern
weights the deviation of the covered instances' target mean from the
population mean by the coverage size raised to a size exponent ``a``:

    n ** a * (subgroup mean - population mean)

``a`` trades off size against deviation; with a = 0.5 the score behaves
like a simplified binomial test statistic, with a = 1 it is the classic
weighted relative accuracy style measure.  Direction "low" mirrors the
difference.

The search enumerates patterns depth-first in canonical selector order,
keeping coverage as boolean masks and the k best patterns found so far.
A branch can be cut when even the most optimistic refinement cannot beat
the current k-th best score; disabling pruning never changes the result,
only the work.
"""

from __future__ import annotations

import threading
from bisect import insort
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discretize import LABELS

__all__ = [
    "Selector",
    "Pattern",
    "QualitySpec",
    "SearchConfig",
    "SubgroupResult",
    "coverage",
    "quality",
    "optimistic_estimate",
    "discover",
]


@dataclass(frozen=True)
class Selector:
    """One attribute = label condition."""

    attribute: str
    label: str

    def render(self):
        return "%s=%s" % (self.attribute, self.label)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class Pattern:
    """A conjunction of selectors over distinct attributes.

    Selectors are stored sorted by their rendered form, so two patterns
    built from the same conditions compare equal.  The empty pattern
    covers everything.
    """

    selectors: tuple

    def __init__(self, selectors=()):
        sels = tuple(sorted(selectors, key=lambda s: s.render()))
        attrs = [s.attribute for s in sels]
        if len(set(attrs)) != len(attrs):
            raise ValueError("pattern repeats an attribute")
        object.__setattr__(self, "selectors", sels)

    def __len__(self):
        return len(self.selectors)

    def render(self):
        return " AND ".join(s.render() for s in self.selectors)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class QualitySpec:
    """Size exponent and deviation direction of the interestingness score."""

    a: float = 0.5
    direction: str = "high"

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("size exponent a must lie in [0, 1]")
        if self.direction not in ("high", "low"):
            raise ValueError("direction must be 'high' or 'low'")


@dataclass(frozen=True)
class SearchConfig:
    """Search bounds: coverage floor, depth cap, result count, pruning."""

    min_size: int = 20
    max_depth: int = 3
    top_k: int = 20
    pruning: bool = True

    def __post_init__(self):
        if self.min_size < 1:
            raise ValueError("min_size must be at least 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.top_k < 1:
            raise ValueError("top_k must be at least 1")


@dataclass(eq=False)
class SubgroupResult:
    """One scored pattern: coverage size, means, score and row indices."""

    pattern: Pattern
    size: int
    subgroup_mean: float
    population_mean: float
    quality: float
    coverage: np.ndarray


def coverage(table, pattern):
    """Boolean mask of the rows a pattern covers.

    Raises
    ------
    KeyError
        When a selector names an attribute the table does not have.
    """
    mask = np.ones(len(table.rows), dtype=bool)
    for sel in pattern.selectors:
        c = table.columns.index(sel.attribute) if sel.attribute in table.columns else -1
        if c < 0:
            raise KeyError("attribute %r not in table" % sel.attribute)
        mask &= table.labels[:, c] == LABELS.index(sel.label)
    return mask


def quality(n, subgroup_mean, population_mean, spec=QualitySpec()):
    """Interestingness of a subgroup: n ** a times the mean shift."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0.0
    diff = subgroup_mean - population_mean
    if spec.direction == "low":
        diff = -diff
    return float(n ** spec.a * diff)


def optimistic_estimate(n, best_target, population_mean, spec=QualitySpec()):
    """Upper bound on the quality of every refinement of a pattern.

    ``best_target`` is the most favourable target value inside the
    pattern's coverage (maximum for direction "high", minimum for "low").
    No refinement can have a higher mean than that value, and none can
    cover more than n rows, so ``n ** a * (best - population mean)``
    bounds them all while the bound is non-negative.  When even the best
    covered value sits on the wrong side of the population mean, the
    factor ``n ** a`` would push the (negative) bound below reachable
    scores, so the bare difference is returned instead.
    """
    if n == 0:
        return 0.0
    diff = best_target - population_mean
    if spec.direction == "low":
        diff = -diff
    if diff <= 0.0:
        return float(diff)
    return float(n ** spec.a * diff)


class _TopK:
    """The k best (key, result) pairs; key orders by quality, size, pattern."""

    def __init__(self, k):
        self.k = k
        self.items = []
        self.lock = threading.Lock()

    def key(self, result):
        return (-result.quality, -result.size, result.pattern.render())

    def offer(self, result):
        key = self.key(result)
        with self.lock:
            if len(self.items) < self.k:
                insort(self.items, (key, result))
            elif key < self.items[-1][0]:
                insort(self.items, (key, result))
                self.items.pop()

    def floor(self):
        """Quality of the current k-th entry, or None while not full."""
        with self.lock:
            if len(self.items) < self.k:
                return None
            return -self.items[-1][0][0]

    def results(self):
        return [res for _, res in self.items]


def _selector_universe(table, min_size):
    """Selectors in canonical order with their masks, small ones removed."""
    universe = []
    for attr in table.columns:
        c = table.columns.index(attr)
        col = table.labels[:, c]
        for li, label in enumerate(LABELS):
            mask = col == li
            if int(mask.sum()) >= min_size:
                universe.append((Selector(attr, label), mask))
    universe.sort(key=lambda item: item[0].render())
    return universe


def discover(table, target, quality_spec=None, config=None, workers=1):
    """Find the top-k patterns by quality.

    Enumerates conjunctions up to ``config.max_depth`` selectors over
    distinct attributes, keeps those covering at least ``config.min_size``
    rows, and returns the ``config.top_k`` best.  Ties break by larger
    coverage, then lexicographically smaller pattern, so the result is a
    deterministic function of the inputs regardless of pruning or the
    number of worker threads.

    Parameters
    ----------
    table: NominalTable
    target: TargetVector
        Must hold the same rows in the same order as the table.
    quality_spec: QualitySpec or None
    config: SearchConfig or None
    workers: int
        Worker threads for exploring top-level branches.

    Returns
    -------
    list of SubgroupResult
        Sorted best first.
    """
    spec = quality_spec or QualitySpec()
    cfg = config or SearchConfig()
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if list(table.rows) != list(target.rows):
        raise ValueError("table and target rows differ")
    if not table.columns:
        raise ValueError("table has no attributes")
    n_rows = len(table.rows)
    if n_rows == 0:
        raise ValueError("table has no rows")

    values = np.asarray(target.values, dtype=np.float64)
    t0 = float(values.mean())
    universe = _selector_universe(table, cfg.min_size)
    top = _TopK(cfg.top_k)

    def score(mask, n, selectors):
        t_p = float(np.dot(mask, values) / n)
        q = quality(n, t_p, t0, spec)
        top.offer(SubgroupResult(
            pattern=Pattern(selectors),
            size=n,
            subgroup_mean=t_p,
            population_mean=t0,
            quality=q,
            coverage=np.nonzero(mask)[0],
        ))
        return t_p

    def best_covered(mask):
        covered = values[mask]
        return float(covered.max() if spec.direction == "high" else covered.min())

    def explore(start, selectors, mask):
        for i in range(start, len(universe)):
            sel, sel_mask = universe[i]
            if any(s.attribute == sel.attribute for s in selectors):
                continue
            new_mask = mask & sel_mask if mask is not None else sel_mask
            n = int(new_mask.sum())
            if n < cfg.min_size:
                continue
            new_selectors = selectors + (sel,)
            score(new_mask, n, new_selectors)
            if len(new_selectors) < cfg.max_depth:
                if cfg.pruning:
                    floor = top.floor()
                    if floor is not None:
                        est = optimistic_estimate(n, best_covered(new_mask), t0, spec)
                        if est < floor:
                            continue
                explore(i + 1, new_selectors, new_mask)

    if workers == 1 or len(universe) <= 1:
        explore(0, (), None)
    else:
        def branch(i):
            sel, sel_mask = universe[i]
            n = int(sel_mask.sum())
            score(sel_mask, n, (sel,))
            if cfg.max_depth > 1:
                if cfg.pruning:
                    floor = top.floor()
                    if floor is not None:
                        est = optimistic_estimate(n, best_covered(sel_mask), t0, spec)
                        if est < floor:
                            return
                explore(i + 1, (sel,), sel_mask)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(branch, range(len(universe))))

    return top.results()
