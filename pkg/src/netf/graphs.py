"""Time series to complex network mappings.

Three mappings share the :class:`Graph` data model:

* :func:`nvg` - weighted natural visibility graph. Nodes are time
  stamps; an edge joins two observations whose straight sight-line is
  unobstructed by every observation in between (strict inequality, so
  a collinear intermediate point blocks visibility).
* :func:`hvg` - weighted horizontal visibility graph. Visibility lines
  are horizontal only; always a subgraph of the NVG of the same series.
* :func:`quantile_graph` - directed transition graph between sample
  quantile bins, with self-loops; each occupied row is stochastic.

Visibility edge weights are ``1 / sqrt((tj - ti)^2 + (Yj - Yi)^2)``
with time measured in sample units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .tsio import TimeSeries

__all__ = [
    "Graph",
    "QuantileBinning",
    "nvg",
    "nvg_bruteforce",
    "hvg",
    "sample_quantiles",
    "quantile_graph",
    "write_edge_list",
]

DEFAULT_ETA = 50


@dataclass(frozen=True)
class Graph:
    """A weighted graph stored as parallel edge arrays.

    Undirected graphs store each edge once with ``source <= target``.
    Self-loops are only permitted when ``allows_self_loops`` is set.
    """

    node_count: int
    sources: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    directed: bool
    allows_self_loops: bool = False

    def __post_init__(self) -> None:
        src = np.asarray(self.sources, dtype=np.int64)
        dst = np.asarray(self.targets, dtype=np.int64)
        w = np.asarray(self.weights, dtype=np.float64)
        if not (src.shape == dst.shape == w.shape) or src.ndim != 1:
            raise ValueError("edge arrays must be one-dimensional and equal length")
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        if src.size:
            if src.min(initial=0) < 0 or dst.min(initial=0) < 0:
                raise ValueError("negative node index")
            if max(src.max(initial=-1), dst.max(initial=-1)) >= self.node_count:
                raise ValueError("edge endpoint out of range")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ValueError("edge weights must be finite and positive")
            if not self.allows_self_loops and np.any(src == dst):
                raise ValueError("self-loop in a graph that does not allow them")
            if not self.directed and np.any(src > dst):
                raise ValueError("undirected edges must be stored with source <= target")
        for name, arr in (("sources", src), ("targets", dst), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def edge_count(self) -> int:
        return int(self.sources.shape[0])

    def edge_list(self) -> list[tuple[int, int, float]]:
        return list(zip(self.sources.tolist(), self.targets.tolist(), self.weights.tolist()))

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.sources.tolist(), self.targets.tolist()))


def _series_values(series: TimeSeries | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series holds non-finite values")
    return arr


def _visibility_graph(n: int, edges: list[tuple[int, int, float]]) -> Graph:
    if edges:
        src, dst, w = map(np.asarray, zip(*edges))
    else:
        src = dst = np.empty(0, dtype=np.int64)
        w = np.empty(0, dtype=np.float64)
    return Graph(
        node_count=n,
        sources=src,
        targets=dst,
        weights=w,
        directed=False,
        allows_self_loops=False,
    )


def nvg(series: TimeSeries | Sequence[float] | np.ndarray) -> Graph:
    """Weighted natural visibility graph of a series.

    Divide-and-conquer construction: each interval is split at its
    maximum (ties to the smallest index). No sight-line can cross the
    interval maximum, so the edges incident to it are found with a
    single slope sweep to each side and the halves are processed
    independently. Typical cost is O(n log n).
    """
    y = _series_values(series)
    n = y.shape[0]
    if n < 2:
        raise ValueError("natural visibility graph needs at least 2 observations")

    edges: list[tuple[int, int, float]] = []
    stack = [(0, n)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        m = lo + int(np.argmax(y[lo:hi]))
        ym = y[m]
        # Left sweep: k is visible from m iff its slope towards m lies
        # strictly below the slopes of every point in between.
        run_min = math.inf
        for k in range(m - 1, lo - 1, -1):
            slope = (y[k] - ym) / (k - m)
            if slope < run_min:
                dt = m - k
                dy = ym - y[k]
                edges.append((k, m, 1.0 / math.sqrt(dt * dt + dy * dy)))
                run_min = slope
        # Right sweep: mirrored criterion with a running maximum.
        run_max = -math.inf
        for k in range(m + 1, hi):
            slope = (y[k] - ym) / (k - m)
            if slope > run_max:
                dt = k - m
                dy = y[k] - ym
                edges.append((m, k, 1.0 / math.sqrt(dt * dt + dy * dy)))
                run_max = slope
        if m - lo >= 2:
            stack.append((lo, m))
        if hi - (m + 1) >= 2:
            stack.append((m + 1, hi))

    edges.sort(key=lambda e: (e[0], e[1]))
    return _visibility_graph(n, edges)


def nvg_bruteforce(series: TimeSeries | Sequence[float] | np.ndarray) -> Graph:
    """Reference natural visibility graph via direct pairwise evaluation.

    Checks the sight-line condition for every pair against every
    intermediate observation. Quadratic-to-cubic; test oracle only.
    """
    y = _series_values(series)
    n = y.shape[0]
    if n < 2:
        raise ValueError("natural visibility graph needs at least 2 observations")
    edges = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            visible = True
            for k in range(i + 1, j):
                if y[k] >= y[j] + (y[i] - y[j]) * (j - k) / (j - i):
                    visible = False
                    break
            if visible:
                dt = j - i
                dy = y[j] - y[i]
                edges.append((i, j, 1.0 / math.sqrt(dt * dt + dy * dy)))
    return _visibility_graph(n, edges)


def hvg(series: TimeSeries | Sequence[float] | np.ndarray) -> Graph:
    """Weighted horizontal visibility graph of a series.

    Edge (i, j) iff every observation strictly between them is strictly
    lower than both endpoints. Single left-to-right pass over a stack
    of not-yet-dominated indices, O(n) amortized.
    """
    y = _series_values(series)
    n = y.shape[0]
    if n < 2:
        raise ValueError("horizontal visibility graph needs at least 2 observations")

    edges: list[tuple[int, int, float]] = []

    def add(i: int, j: int) -> None:
        dt = j - i
        dy = y[j] - y[i]
        edges.append((i, j, 1.0 / math.sqrt(dt * dt + dy * dy)))

    stack: list[int] = []
    for j in range(n):
        yj = y[j]
        # Popped entries sit between the remaining stack top and j; an
        # entry is visible from j only if it tops everything popped
        # after it (equal heights block, hence the strict comparison).
        run_max = -math.inf
        while stack and y[stack[-1]] < yj:
            i = stack.pop()
            if y[i] > run_max:
                add(i, j)
                run_max = y[i]
        if stack:
            add(stack[-1], j)
        stack.append(j)

    edges.sort(key=lambda e: (e[0], e[1]))
    return _visibility_graph(n, edges)


@dataclass(frozen=True)
class QuantileBinning:
    """Sample quantile breakpoints splitting a series into eta bins."""

    eta: int
    breakpoints: np.ndarray

    def __post_init__(self) -> None:
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        if self.eta < 2:
            raise ValueError("eta must be at least 2")
        if bp.shape != (self.eta,):
            raise ValueError("need one breakpoint per quantile")
        if np.any(np.diff(bp) < 0):
            raise ValueError("breakpoints must be non-decreasing")
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    def assign(self, values: np.ndarray) -> np.ndarray:
        """Map each value to the smallest bin i with value <= q_i (0-based)."""
        idx = np.searchsorted(self.breakpoints, values, side="left")
        return np.minimum(idx, self.eta - 1)


def sample_quantiles(
    series: TimeSeries | Sequence[float] | np.ndarray, eta: int
) -> QuantileBinning:
    """Breakpoints q_i at probabilities i/eta, i = 1..eta.

    Uses the linear-interpolation sample-quantile scheme on the sorted
    sample: with h = (n - 1) p + 1 (1-based), the quantile is
    ``x_floor(h) + (h - floor(h)) * (x_(floor(h)+1) - x_floor(h))``.
    The last breakpoint is exactly the sample maximum.
    """
    y = _series_values(series)
    n = y.shape[0]
    if eta < 2:
        raise ValueError("eta must be at least 2")
    if n < 2:
        raise ValueError("need at least 2 observations")
    x = np.sort(y)
    bp = np.empty(eta, dtype=np.float64)
    for i in range(1, eta + 1):
        h = (n - 1) * (i / eta) + 1.0
        lo = min(int(math.floor(h)), n)
        frac = h - lo
        q = x[lo - 1]
        if frac > 0.0 and lo < n:
            q += frac * (x[lo] - x[lo - 1])
        bp[i - 1] = q
    return QuantileBinning(eta=eta, breakpoints=bp)


def quantile_graph(
    series: TimeSeries | Sequence[float] | np.ndarray, eta: int = DEFAULT_ETA
) -> Graph:
    """Directed transition graph between quantile bins.

    Always has exactly ``eta`` nodes; bins never visited by a
    transition stay isolated. Each consecutive pair of observations
    contributes one transition, and outgoing weights of an occupied
    node sum to one (empirical transition probabilities).
    """
    y = _series_values(series)
    if y.shape[0] < 2:
        raise ValueError("quantile graph needs at least 2 observations")
    binning = sample_quantiles(y, eta)
    bins = binning.assign(y)
    counts = np.zeros((eta, eta), dtype=np.int64)
    np.add.at(counts, (bins[:-1], bins[1:]), 1)
    row_totals = counts.sum(axis=1)
    src, dst = np.nonzero(counts)
    w = counts[src, dst] / row_totals[src]
    return Graph(
        node_count=eta,
        sources=src,
        targets=dst,
        weights=w,
        directed=True,
        allows_self_loops=True,
    )


def write_edge_list(g: Graph, path: str | Path) -> None:
    """Write "source target weight" lines, weights at 12 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        kind = "directed" if g.directed else "undirected"
        fh.write(f"# {kind} nodes={g.node_count}\n")
        for s, t, w in zip(g.sources, g.targets, g.weights):
            fh.write(f"{s} {t} {w:.12g}\n")
