"""Restricted-choice dynamics over a sofic subshift.

The attractor of the restricted dynamics is analyzed through per-vertex
limit clouds: seed every vertex of the presentation with the bounding
cloud and iterate C'_v = union over edges (u -j-> v) of S_j(C_u) to a
fixed family.  C_v is then the limit set of S_w(seed) over words whose
accepting path ends at v, and the slice of a strategy u is the union of
the family over start_vertices(P, u).  Deduplicating slice clouds over all
short ultimately periodic strategies enumerates the finitely many distinct
slices; the union of the family is the restricted attractor projection
K_Lambda together with its decomposition sets A_j = {x : S_j(x) stays in
K_Lambda}.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .setdyn import ModelSpec, PointCloud, _map_points, hausdorff
from .sofic import SoficPresentation, start_vertices
from .symbolic import UPString, enumerate_words


@dataclass(frozen=True, eq=False)
class VertexFamily:
    """Per-vertex limit clouds of a presentation, with diagnostics."""

    presentation: SoficPresentation
    clouds: dict
    converged: dict
    residuals: dict
    iterations: int

    @property
    def all_converged(self) -> bool:
        return all(self.converged.values())

    def union(self) -> PointCloud:
        return PointCloud.union(self.clouds.values())


def vertex_limits(
    model: ModelSpec,
    pres: SoficPresentation,
    delta: float,
    tol: float = None,
    maxiter: int = 500,
) -> VertexFamily:
    """Iterate the graph-indexed set update to its fixed family.

    Every vertex starts at the full bounding cloud; one sweep replaces each
    C_v by the snapped union of S_j(C_u) over edges (u -j-> v).  Sweeps are
    Jacobi-style (all vertices advance from the same snapshot), so the
    computation parallelizes across vertices with a barrier between sweeps.
    """
    if pres.is_empty:
        raise ValueError("presentation is empty")
    if tol is None:
        tol = float(delta)
    seed = model.seed_cloud(delta)
    empty = PointCloud(np.empty((0, model.dim)), delta)
    incoming = {v: [] for v in pres.vertices}
    for src, sym, dst in pres.edges:
        incoming[dst].append((src, sym))
    for edges in incoming.values():
        edges.sort()
    clouds = {v: seed for v in pres.vertices}
    residuals = {v: float("inf") for v in pres.vertices}
    converged = {v: False for v in pres.vertices}
    for sweep in range(1, maxiter + 1):
        fresh = {}
        for v, edges in incoming.items():
            parts = [
                _map_points(model.maps[sym], clouds[src].points)
                for src, sym in edges
                if clouds[src].n
            ]
            if not parts:
                # no long word ends here: the limit over its paths is empty
                fresh[v] = empty
                continue
            raw = np.concatenate(parts)
            model.escape_check(raw, delta, step=sweep)
            fresh[v] = PointCloud(raw, delta)
        for v in pres.vertices:
            if fresh[v] == clouds[v]:
                residuals[v] = 0.0
                converged[v] = True
            elif fresh[v].n == 0 or clouds[v].n == 0:
                residuals[v] = float("inf")
                converged[v] = False
            else:
                residuals[v] = hausdorff(fresh[v], clouds[v], model)
                converged[v] = residuals[v] <= tol
        clouds = fresh
        if all(converged.values()):
            return VertexFamily(pres, clouds, converged, residuals, sweep)
    return VertexFamily(pres, clouds, converged, residuals, maxiter)


def slice_cloud(
    model: ModelSpec,
    pres: SoficPresentation,
    family: VertexFamily,
    u: UPString,
) -> PointCloud:
    """The slice of strategy u: union of family clouds over start_vertices."""
    starts = start_vertices(pres, u)
    if not starts:
        raise ValueError(f"strategy {u} is not in the subshift")
    return PointCloud.union([family.clouds[v] for v in sorted(starts)])


@dataclass(frozen=True, eq=False)
class SliceReport:
    """Distinct slices, strategy classification, and the K_Lambda decomposition."""

    delta: float
    slices: tuple
    representatives: dict
    k_lambda: PointCloud
    a_sets: tuple


def _membership_tolerance(delta: float) -> float:
    return delta * (1.0 + 1e-9) + 1e-12 if delta > 0 else 0.0


def _decomposition_sets(model: ModelSpec, k_lambda: PointCloud, delta: float):
    tol = _membership_tolerance(delta)
    sets = []
    for fn in model.maps:
        images = _map_points(fn, k_lambda.points)
        if delta > 0:
            dist, _ = cKDTree(k_lambda.points).query(images, k=1, workers=-1)
            mask = dist <= tol
        else:
            mask = k_lambda.contains_points(images)
        pts = k_lambda.points[mask] if mask.any() else np.empty((0, k_lambda.dim))
        sets.append(PointCloud(pts, delta))
    return tuple(sets)


def enumerate_slices(
    model: ModelSpec,
    pres: SoficPresentation,
    family: VertexFamily,
    period_bound: int,
    word_cap: int = 200_000,
) -> SliceReport:
    """Slices of every UPString with |preperiod| + |period| <= period_bound.

    Candidates are all normalized (preperiod, period) pairs over the
    alphabet; strings outside the subshift are skipped, and slice clouds are
    deduplicated by set equality (distinct start-vertex sets may still give
    equal slices).  Also emits K_Lambda as the union of all vertex clouds
    and the decomposition sets A_j.
    """
    if period_bound < 1:
        raise ValueError("period_bound must be at least 1")
    n = pres.n_symbols
    slices = []
    reps = {}
    seen = set()
    for pre_len in range(0, period_bound):
        for per_len in range(1, period_bound - pre_len + 1):
            for pre in enumerate_words(n, pre_len, cap=word_cap):
                for per in enumerate_words(n, per_len, cap=word_cap):
                    u = UPString(pre.letters, per.letters)
                    key = str(u)
                    if key in seen:
                        continue
                    seen.add(key)
                    starts = start_vertices(pres, u)
                    if not starts:
                        continue
                    cloud = PointCloud.union([family.clouds[v] for v in sorted(starts)])
                    for i, existing in enumerate(slices):
                        if existing == cloud:
                            reps[key] = i
                            break
                    else:
                        reps[key] = len(slices)
                        slices.append(cloud)
    k_lambda = family.union()
    a_sets = _decomposition_sets(model, k_lambda, k_lambda.delta)
    return SliceReport(
        delta=k_lambda.delta,
        slices=tuple(slices),
        representatives=reps,
        k_lambda=k_lambda,
        a_sets=a_sets,
    )


def verify_decomposition(report: SliceReport, model: ModelSpec):
    """Check K_Lambda = A_0 u ... u A_{N-1} = S_0(A_0) u ... u S_{N-1}(A_{N-1}).

    Returns (ok, residuals): the first union must match within 2*delta, the
    mapped union within 4*delta (exactly, when delta = 0).
    """
    delta = report.delta
    nonempty = [a for a in report.a_sets if a.n]
    if not nonempty:
        return False, {"union": float("inf"), "mapped": float("inf")}
    union = PointCloud.union(nonempty)
    mapped_parts = []
    for fn, a in zip(model.maps, report.a_sets):
        if a.n:
            mapped_parts.append(PointCloud(_map_points(fn, a.points), delta))
    mapped = PointCloud.union(mapped_parts)
    r_union = hausdorff(report.k_lambda, union, model)
    r_mapped = hausdorff(report.k_lambda, mapped, model)
    ok = r_union <= 2.0 * delta and r_mapped <= 4.0 * delta
    return ok, {"union": r_union, "mapped": r_mapped}


def save_slice_report(report: SliceReport, out_dir: str) -> dict:
    """Write slice_k.csv, k_lambda.csv, a_j.csv, and a JSON manifest."""
    os.makedirs(out_dir, exist_ok=True)
    slice_files = []
    for i, cloud in enumerate(report.slices):
        name = f"slice_{i}.csv"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(cloud.to_csv())
        slice_files.append(name)
    with open(os.path.join(out_dir, "k_lambda.csv"), "w", encoding="utf-8") as fh:
        fh.write(report.k_lambda.to_csv())
    a_files = []
    for j, cloud in enumerate(report.a_sets):
        name = f"a_{j}.csv"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(cloud.to_csv())
        a_files.append(name)
    manifest = {
        "delta": report.delta,
        "distinct_slices": len(report.slices),
        "slices": slice_files,
        "k_lambda": "k_lambda.csv",
        "a_sets": a_files,
        "representatives": dict(sorted(report.representatives.items())),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
