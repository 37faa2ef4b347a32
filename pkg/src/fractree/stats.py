"""Statistics of the negative sector under the uniform measure.

Every element of the negative sector is a decorated tree, so drawing one
uniformly at random turns tree functionals into random variables: the
number of integration edges Q, the noise count P, the homogeneity, vertex
degrees, height, diameter.  This module computes their exact empirical
distributions from a built model space, together with four averaged graph
measures and least-squares fits of the divergence laws near the
subcriticality boundary.

Counts and histogram masses are exact (integers and fractions); only the
PageRank scores and the fitted coefficients are floating point.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from .builder import ModelSpace, negative_sector
from .counting import LAMBDA2, beta_N, lattice_bounds
from .params import Homogeneity, RationalLike, _frac, rho_c, scaled_degree
from .symbols import Symbol, bare_tree, diameter, height, iter_vertices

__all__ = [
    "TreeRecord",
    "tree_records",
    "SizeDistribution",
    "size_distribution",
    "homogeneity_histogram",
    "DegreeDistribution",
    "degree_distribution",
    "HeightDiameter",
    "height_diameter",
    "GraphMeasures",
    "graph_measures",
    "ScalingFit",
    "scaling_fit",
    "StatReport",
    "stat_report",
    "report_json_dict",
    "write_histogram_csv",
]


# ---------------------------------------------------------------------------
# per-tree records


@dataclass(frozen=True)
class TreeRecord:
    """Everything the aggregators need to know about one sector element.

    Height, diameter and the degree counts refer to the bare tree (noise
    edges stripped); ``degrees[j]`` counts bare vertices of undirected
    degree j, for j = 0 .. N+1.  ``poly_degree`` is the scaled degree of
    the polynomial decoration, zero unless the element carries one.
    """

    symbol: Symbol
    p: int
    q: int
    poly_degree: Fraction
    homogeneity: Homogeneity
    height: int
    diameter: int
    degrees: tuple[int, ...]


def _degree_counts(t: Symbol, N: int) -> tuple[int, ...]:
    """Vertex counts by undirected degree, index 0 .. N+1."""
    counts = [0] * (N + 2)
    for _, parent, _, node in iter_vertices(t):
        deg = len(node.children) + (1 if parent >= 0 else 0)
        if deg > N + 1:
            raise ValueError(f"vertex of degree {deg} exceeds N+1 = {N + 1}")
        counts[deg] += 1
    return tuple(counts)


def tree_records(ms: ModelSpace) -> tuple[TreeRecord, ...]:
    """One record per negative-sector element, in canonical sector order."""
    N = ms.params.N
    rho = ms.params.rho
    out = []
    for sym, hom in negative_sector(ms):
        b = bare_tree(sym)
        out.append(
            TreeRecord(
                symbol=sym,
                p=sym.p,
                q=sym.q,
                poly_degree=scaled_degree(sym.kvec, rho),
                homogeneity=hom,
                height=height(b),
                diameter=diameter(b),
                degrees=_degree_counts(b, N),
            )
        )
    return tuple(out)


def _require_sector(ms: ModelSpace) -> int:
    n = len(negative_sector(ms))
    if n == 0:
        raise ValueError("negative sector is empty; nothing to aggregate")
    return n


# ---------------------------------------------------------------------------
# size distribution


@dataclass(frozen=True)
class SizeDistribution:
    """Law of the integration-edge count Q over the negative sector.

    ``off_grid`` is the probability that Q is not a multiple of N, i.e.
    that the bare tree is a strictly pruned one.  The ratio moments divide
    Q by the lattice bound q*, the largest size a negative element can
    have; near the subcriticality boundary the ratio concentrates at 1.
    A report from a build without a completeness certificate is only a
    lower-bound census, hence ``certified`` is carried along.
    """

    counts: tuple[tuple[int, int], ...]
    pmf: tuple[tuple[int, Fraction], ...]
    off_grid: Fraction
    mean_ratio: Fraction
    var_ratio: Fraction
    q_star: Fraction
    certified: bool


def size_distribution(ms: ModelSpace) -> SizeDistribution:
    total = _require_sector(ms)
    N = ms.params.N
    q_star = lattice_bounds(ms.params.N, ms.params.d, ms.params.rho).q_star
    hist: Counter[int] = Counter(sym.q for sym, _ in negative_sector(ms))
    counts = tuple(sorted(hist.items()))
    pmf = tuple((q, Fraction(c, total)) for q, c in counts)
    off = sum((f for q, f in pmf if q % N != 0), Fraction(0))
    mean = sum((Fraction(q) / q_star * f for q, f in pmf), Fraction(0))
    second = sum(((Fraction(q) / q_star) ** 2 * f for q, f in pmf), Fraction(0))
    return SizeDistribution(
        counts=counts,
        pmf=pmf,
        off_grid=off,
        mean_ratio=mean,
        var_ratio=second - mean * mean,
        q_star=q_star,
        certified=ms.complete,
    )


# ---------------------------------------------------------------------------
# homogeneity histogram


def homogeneity_histogram(
    ms: ModelSpace, drop_kappa: bool = True
) -> tuple[tuple, ...]:
    """Occupation counts of the homogeneity values, bins sorted ascending.

    With ``drop_kappa`` the arbitrarily small corrections are discarded and
    bins are keyed by the rational part alone; otherwise each distinct
    (rational, correction-multiplier) pair gets its own bin, so the number
    of bins is exactly the count of distinct homogeneities in the sector.
    """
    hist: Counter = Counter()
    for _, hom in negative_sector(ms):
        hist[hom.a if drop_kappa else (hom.a, hom.b)] += 1
    return tuple(sorted(hist.items()))


# ---------------------------------------------------------------------------
# degree distribution


@dataclass(frozen=True)
class DegreeDistribution:
    """Pooled and per-tree vertex-degree statistics, degrees 0 .. N+1.

    The pooled histogram ranges over the vertices of every sector element
    plus the unit, which contributes a single isolated vertex of degree 0;
    the per-tree means average the normalized degree vector over sector
    elements only.  ``bare`` records which tree the degrees were read from.
    """

    bare: bool
    pooled_counts: tuple[int, ...]
    pooled: tuple[Fraction, ...]
    per_tree_mean: tuple[Fraction, ...]


def degree_distribution(ms: ModelSpace, bare: bool = False) -> DegreeDistribution:
    total = _require_sector(ms)
    N = ms.params.N
    pooled = [0] * (N + 2)
    pooled[0] += 1  # the unit
    acc = [Fraction(0)] * (N + 2)
    for sym, _ in negative_sector(ms):
        t = bare_tree(sym) if bare else sym
        cnt = _degree_counts(t, N)
        n = sum(cnt)
        for j in range(N + 2):
            pooled[j] += cnt[j]
            acc[j] += Fraction(cnt[j], n)
    vertices = sum(pooled)
    return DegreeDistribution(
        bare=bare,
        pooled_counts=tuple(pooled),
        pooled=tuple(Fraction(c, vertices) for c in pooled),
        per_tree_mean=tuple(a / total for a in acc),
    )


# ---------------------------------------------------------------------------
# height and diameter


@dataclass(frozen=True)
class HeightDiameter:
    """Bare-tree heights and diameters with boundary-scaled moments.

    The scaled first moments multiply the means by sqrt(rho - rho_c); as
    rho approaches the boundary they are expected to level off near the
    reference constants 4 sqrt(pi d) / (3 lambda2) for the height and
    16 sqrt(pi d) / (9 lambda2) for the diameter.  The scaled second
    moments multiply by the gap itself.
    """

    heights: tuple[int, ...]
    diameters: tuple[int, ...]
    mean_height: Fraction
    mean_diameter: Fraction
    scaled_mean_height: float
    scaled_mean_diameter: float
    scaled_sq_height: float
    scaled_sq_diameter: float
    height_reference: float
    diameter_reference: float


def height_diameter(ms: ModelSpace) -> HeightDiameter:
    total = _require_sector(ms)
    records = tree_records(ms)
    hs = tuple(r.height for r in records)
    ds = tuple(r.diameter for r in records)
    mh = Fraction(sum(hs), total)
    md = Fraction(sum(ds), total)
    gap = float(ms.params.rho_gap)
    root = math.sqrt(gap)
    ddim = ms.params.d
    return HeightDiameter(
        heights=hs,
        diameters=ds,
        mean_height=mh,
        mean_diameter=md,
        scaled_mean_height=root * float(mh),
        scaled_mean_diameter=root * float(md),
        scaled_sq_height=gap * sum(h * h for h in hs) / total,
        scaled_sq_diameter=gap * sum(d * d for d in ds) / total,
        height_reference=4.0 * math.sqrt(math.pi * ddim) / (3.0 * LAMBDA2),
        diameter_reference=16.0 * math.sqrt(math.pi * ddim) / (9.0 * LAMBDA2),
    )


# ---------------------------------------------------------------------------
# graph measures


@dataclass(frozen=True)
class GraphMeasures:
    """Four measures averaged over the bare trees of the sector.

    density: mean of m / (n (n - 1)) with one directed edge per tree edge,
    zero for a single vertex.  betweenness: mean over trees of the average
    vertex betweenness (count of vertex pairs whose unique path passes
    through the vertex, endpoints excluded).  pagerank: mean over trees of
    the mean vertex PageRank, computed by power iteration on the
    undirected tree; since scores sum to one per tree this equals the mean
    of 1/n up to the iteration tolerance.  periphery: mean over trees of
    the number of vertices at maximal depth, where depth is measured along
    root-to-leaf orientation.
    """

    density: Fraction
    betweenness: Fraction
    pagerank: float
    periphery: Fraction


def _pagerank_mean(
    neighbors: Sequence[Sequence[int]], damping: float = 0.85, tol: float = 1e-10
) -> float:
    n = len(neighbors)
    if n == 1:
        return 1.0
    deg = [len(nb) for nb in neighbors]
    pr = [1.0 / n] * n
    base = (1.0 - damping) / n
    while True:
        new = [base] * n
        for v in range(n):
            share = damping * pr[v] / deg[v]
            for u in neighbors[v]:
                new[u] += share
        err = sum(abs(a - b) for a, b in zip(new, pr))
        pr = new
        if err < tol:
            return sum(pr) / n


def _tree_measures(b: Symbol) -> tuple[Fraction, Fraction, float, int]:
    verts = list(iter_vertices(b))
    n = len(verts)
    if n == 1:
        return Fraction(0), Fraction(0), 1.0, 1

    parent = [pv for _, pv, _, _ in verts]
    kids: list[list[int]] = [[] for _ in range(n)]
    for i in range(1, n):
        kids[parent[i]].append(i)

    # subtree sizes, children come after parents in breadth-first order
    size = [1] * n
    for i in range(n - 1, 0, -1):
        size[parent[i]] += size[i]

    # betweenness of v: pairs of components created by deleting v
    btotal = 0
    for v in range(n):
        comps = [size[c] for c in kids[v]]
        if v != 0:
            comps.append(n - size[v])
        s = n - 1
        btotal += (s * s - sum(c * c for c in comps)) // 2

    depth = [0] * n
    for i in range(1, n):
        depth[i] = depth[parent[i]] + 1
    hmax = max(depth)

    neighbors = [kids[v] + ([parent[v]] if v else []) for v in range(n)]

    return (
        Fraction(n - 1, n * (n - 1)),
        Fraction(btotal, n),
        _pagerank_mean(neighbors),
        sum(1 for x in depth if x == hmax),
    )


def graph_measures(ms: ModelSpace) -> GraphMeasures:
    total = _require_sector(ms)
    dens = Fraction(0)
    betw = Fraction(0)
    prs = 0.0
    peri = 0
    for sym, _ in negative_sector(ms):
        td, tb, tp, tc = _tree_measures(bare_tree(sym))
        dens += td
        betw += tb
        prs += tp
        peri += tc
    return GraphMeasures(
        density=dens / total,
        betweenness=betw / total,
        pagerank=prs / total,
        periphery=Fraction(peri, total),
    )


# ---------------------------------------------------------------------------
# scaling fits


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fits of the boundary divergence laws.

    The homogeneity count is fitted as h = A / (rho - rho_c), one free
    parameter.  The sector cardinality is fitted as
    log c = B + (3/2) log(rho - rho_c) + beta d / (rho - rho_c) with B and
    beta free, and beta is compared against the analytic coefficient for
    the given N.  ``envelope`` brackets the admissible values of A implied
    by the rigorous count bounds at the middle of the grid, and
    ``gap_products`` lists h * (rho - rho_c) per point, which the bounds
    force to stay within a fixed range.
    """

    N: int
    d: int
    rhos: tuple[Fraction, ...]
    coefficient: float
    envelope: tuple[float, float]
    envelope_ok: bool
    intercept: float
    beta: float
    beta_reference: float
    beta_relative_error: float
    h_residuals: tuple[float, ...]
    logc_residuals: tuple[float, ...]
    gap_products: tuple[float, ...]


def scaling_fit(
    points: Iterable[tuple[RationalLike, int, int]], N: int, d: int
) -> ScalingFit:
    """Fit divergence laws to a grid of (rho, h, c) triples.

    Every point must come from a certified census at the same (N, d);
    at least four distinct subcritical rho values are required.
    """
    rows = []
    for rho, h, c in points:
        rows.append((_frac(rho), int(h), int(c)))
    rows.sort(reverse=True)
    rhos = tuple(r for r, _, _ in rows)
    if len(set(rhos)) < 4:
        raise ValueError("scaling fit needs at least 4 distinct grid points")
    rc = rho_c(N, d)
    gaps = [r - rc for r in rhos]
    if min(gaps) <= 0:
        raise ValueError("scaling fit needs strictly subcritical grid points")
    if any(h <= 0 or c <= 0 for _, h, c in rows):
        raise ValueError("counts must be positive")

    x = np.array([1.0 / float(g) for g in gaps])
    hvals = np.array([float(h) for _, h, _ in rows])
    coeff = float(np.dot(hvals, x) / np.dot(x, x))
    h_res = tuple(float(h - coeff * xi) for h, xi in zip(hvals, x))

    y = np.array(
        [math.log(c) - 1.5 * math.log(float(g)) for (_, _, c), g in zip(rows, gaps)]
    )
    design = np.column_stack([np.ones_like(x), d * x])
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    intercept, beta = float(sol[0]), float(sol[1])
    logc_res = tuple(float(yi - intercept - beta * d * xi) for yi, xi in zip(y, x))

    ref = beta_N(N)
    mid = sum(rhos, Fraction(0)) / len(rhos)
    lo = float((mid + d) / (N + 1))
    hi = float((mid - rc) + Fraction(N * d) * (mid + d) / (N + 1))
    return ScalingFit(
        N=N,
        d=d,
        rhos=rhos,
        coefficient=coeff,
        envelope=(lo, hi),
        envelope_ok=lo <= coeff <= hi,
        intercept=intercept,
        beta=beta,
        beta_reference=ref,
        beta_relative_error=abs(beta - ref) / ref,
        h_residuals=h_res,
        logc_residuals=logc_res,
        gap_products=tuple(float(h * g) for (_, h, _), g in zip(rows, gaps)),
    )


# ---------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class StatReport:
    """All per-build statistics in one immutable bundle."""

    records: tuple[TreeRecord, ...]
    sizes: SizeDistribution
    homogeneity_values: tuple[tuple, ...]
    homogeneity_pairs: tuple[tuple, ...]
    degrees_decorated: DegreeDistribution
    degrees_bare: DegreeDistribution
    heights: HeightDiameter
    measures: GraphMeasures
    certified: bool


def stat_report(ms: ModelSpace) -> StatReport:
    return StatReport(
        records=tree_records(ms),
        sizes=size_distribution(ms),
        homogeneity_values=homogeneity_histogram(ms, drop_kappa=True),
        homogeneity_pairs=homogeneity_histogram(ms, drop_kappa=False),
        degrees_decorated=degree_distribution(ms, bare=False),
        degrees_bare=degree_distribution(ms, bare=True),
        heights=height_diameter(ms),
        measures=graph_measures(ms),
        certified=ms.complete,
    )


def _fstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def report_json_dict(rep: StatReport) -> dict:
    """JSON-ready dict; fractions become "num/den" strings, scores floats."""
    sizes = rep.sizes
    return {
        "certified": rep.certified,
        "size": {
            "counts": {str(q): c for q, c in sizes.counts},
            "pmf": {str(q): _fstr(f) for q, f in sizes.pmf},
            "off_grid": _fstr(sizes.off_grid),
            "mean_ratio": _fstr(sizes.mean_ratio),
            "var_ratio": _fstr(sizes.var_ratio),
            "q_star": _fstr(sizes.q_star),
        },
        "homogeneity": {
            "values": [[_fstr(a), c] for a, c in rep.homogeneity_values],
            "pairs": [[_fstr(a), b, c] for (a, b), c in rep.homogeneity_pairs],
        },
        "degree": {
            "decorated": {
                "pooled_counts": list(rep.degrees_decorated.pooled_counts),
                "pooled": [_fstr(f) for f in rep.degrees_decorated.pooled],
                "per_tree_mean": [_fstr(f) for f in rep.degrees_decorated.per_tree_mean],
            },
            "bare": {
                "pooled_counts": list(rep.degrees_bare.pooled_counts),
                "pooled": [_fstr(f) for f in rep.degrees_bare.pooled],
                "per_tree_mean": [_fstr(f) for f in rep.degrees_bare.per_tree_mean],
            },
        },
        "height_diameter": {
            "mean_height": _fstr(rep.heights.mean_height),
            "mean_diameter": _fstr(rep.heights.mean_diameter),
            "scaled_mean_height": rep.heights.scaled_mean_height,
            "scaled_mean_diameter": rep.heights.scaled_mean_diameter,
            "scaled_sq_height": rep.heights.scaled_sq_height,
            "scaled_sq_diameter": rep.heights.scaled_sq_diameter,
            "height_reference": rep.heights.height_reference,
            "diameter_reference": rep.heights.diameter_reference,
        },
        "graph_measures": {
            "density": _fstr(rep.measures.density),
            "betweenness": _fstr(rep.measures.betweenness),
            "pagerank": rep.measures.pagerank,
            "periphery": _fstr(rep.measures.periphery),
        },
    }


def write_histogram_csv(f: IO[str], rows: Iterable[tuple], total: int) -> None:
    """Write (bin, count, normalized) rows; normalized column is a float."""
    w = csv.writer(f)
    w.writerow(["bin", "count", "normalized"])
    for key, count in rows:
        w.writerow([key, count, float(Fraction(count, total))])
