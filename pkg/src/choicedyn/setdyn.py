"""Set-dynamics engine: snapped point clouds and attractor iteration.

Bounded subsets of the state space are represented as finite clouds of
points snapped to a delta-grid (delta = 0 keeps exact coordinates, for
finite discrete models).  Snapping rounds each coordinate to the nearest
grid node with ties toward -inf; clouds are kept deduplicated in canonical
lexicographic order, so equal sets compare equal and iteration over a
bounded region terminates in exact set cycles.

The engine provides the Hutchinson-Barnsley step F(A) = S_0(A) u ... u
S_{N-1}(A), the global attractor loop, word application, per-strategy
(individual) attractors with tail-cycle detection, omega-limit sets from a
caller seed, and the chaos game.  Map application over a cloud may run on a
thread pool (CHOICE_DYN_THREADS); results are order-independent because the
reduction is canonical sort + dedupe.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .symbolic import UPString, Word, shift as _shift


class AssumptionViolation(RuntimeError):
    """A trajectory left the bounding region by more than 10*delta.

    The engine monitors every map application; a violation means the model
    has no joint absorbing set along the strategy being iterated (the
    dissipativity assumption fails empirically), as on the real-line
    counterexample under the alternating strategy.
    """

    def __init__(self, model_name: str, step: int, value, excess: float):
        self.model_name = model_name
        self.step = step
        self.value = value
        self.excess = excess
        super().__init__(
            f"model {model_name!r}: point {value} escaped the bounding region "
            f"by {excess:.3g} at step {step}"
        )


def _thread_count() -> int:
    raw = os.environ.get("CHOICE_DYN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_points(fn, pts: np.ndarray) -> np.ndarray:
    """Apply a vectorized point map, chunked over a thread pool when enabled."""
    workers = _thread_count()
    if workers == 1 or len(pts) < 8192:
        return np.asarray(fn(pts), dtype=float)
    chunks = np.array_split(pts, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: np.asarray(fn(c), dtype=float), chunks))
    return np.concatenate(parts)


def _as_point_array(points, dim=None) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim in (None, 1) else arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError("points must form an (n, dim) array")
    return arr


def _unique_rows(arr: np.ndarray) -> np.ndarray:
    """Deduplicated rows in lexicographic order (row-major)."""
    if len(arr) == 0:
        return arr
    if arr.shape[1] == 1:
        return np.unique(arr[:, 0])[:, None]
    if arr.dtype == np.int64:
        mins = arr.min(axis=0)
        spans = (arr.max(axis=0) - mins + 1).astype(object)
        total_bits = sum(int(s - 1).bit_length() for s in spans)
        if total_bits <= 62:
            shifted = arr - mins
            key = shifted[:, 0].astype(np.int64)
            for c in range(1, arr.shape[1]):
                key = key * int(spans[c]) + shifted[:, c]
            uniq = np.unique(key)
            out = np.empty((len(uniq), arr.shape[1]), dtype=np.int64)
            rem = uniq
            for c in range(arr.shape[1] - 1, 0, -1):
                rem, col = np.divmod(rem, int(spans[c]))
                out[:, c] = col
            out[:, 0] = rem
            return out + mins
    return np.unique(arr, axis=0)


def _void_view(arr: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(arr)
    return a.view([("", a.dtype)] * a.shape[1]).ravel()


def _rows_isin(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of a occur among the rows of b."""
    if len(b) == 0:
        return np.zeros(len(a), dtype=bool)
    if a.shape[1] == 1:
        return np.isin(a[:, 0], b[:, 0])
    return np.isin(_void_view(a), _void_view(b))


class PointCloud:
    """A finite set of points at resolution delta, in canonical order.

    Construction snaps, deduplicates, and sorts; two clouds with the same
    delta compare equal iff they are the same set.  ``delta == 0`` keeps
    coordinates exact (discrete models).
    """

    __slots__ = ("delta", "points")

    def __init__(self, points, delta: float = 0.0):
        delta = float(delta)
        if delta < 0 or not math.isfinite(delta):
            raise ValueError("delta must be a finite non-negative number")
        arr = _as_point_array(points)
        if not np.isfinite(arr).all():
            raise ValueError("points must be finite")
        if delta > 0:
            idx = np.ceil(arr / delta - 0.5).astype(np.int64)
            arr = _unique_rows(idx) * delta
        else:
            arr = _unique_rows(arr + 0.0)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "points", arr)

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("PointCloud is immutable")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return (
            self.delta == other.delta
            and self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
        )

    def __repr__(self) -> str:
        return f"PointCloud(n={self.n}, dim={self.dim}, delta={self.delta!r})"

    def _keys(self) -> np.ndarray:
        if self.delta > 0:
            return np.rint(self.points / self.delta).astype(np.int64)
        return self.points

    def subset_of(self, other: "PointCloud") -> bool:
        return bool(_rows_isin(self._keys(), other._keys()).all())

    def difference(self, other: "PointCloud") -> "PointCloud":
        mask = ~_rows_isin(self._keys(), other._keys())
        return PointCloud(self.points[mask], self.delta) if mask.any() else PointCloud(
            np.empty((0, self.dim)), self.delta
        )

    def intersection(self, other: "PointCloud") -> "PointCloud":
        mask = _rows_isin(self._keys(), other._keys())
        return PointCloud(self.points[mask], self.delta) if mask.any() else PointCloud(
            np.empty((0, self.dim)), self.delta
        )

    def contains_points(self, pts) -> np.ndarray:
        """Per-row membership of the snapped probe points in this cloud."""
        pts = _as_point_array(pts, self.dim)
        if self.delta > 0:
            keys = np.ceil(pts / self.delta - 0.5).astype(np.int64)
        else:
            keys = pts + 0.0
        return _rows_isin(keys, self._keys())

    @staticmethod
    def union(clouds) -> "PointCloud":
        clouds = list(clouds)
        if not clouds:
            raise ValueError("union of no clouds")
        delta = clouds[0].delta
        dim = clouds[0].dim
        if any(c.delta != delta or c.dim != dim for c in clouds):
            raise ValueError("clouds disagree on delta or dimension")
        return PointCloud(np.concatenate([c.points for c in clouds]), delta)

    def to_csv(self) -> str:
        header = ",".join(f"x{i}" for i in range(self.dim))
        lines = [header]
        for row in self.points:
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_csv(text: str, delta: float = 0.0) -> "PointCloud":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("x0"):
            raise ValueError("expected a header row like x0,x1")
        dim = len(lines[0].split(","))
        rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
        arr = np.array(rows, dtype=float).reshape(-1, dim)
        return PointCloud(arr, delta)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """A state space with N continuous maps and a bounding region.

    ``maps`` act on (n, dim) arrays; ``scalar_maps`` act on point tuples
    (used by the chaos-game loop).  ``seeder(delta)`` produces the raw seed
    points that stand in for the bounding region; ``seed_absorbing`` asserts
    that the seed cloud contains every snapped image of itself, which makes
    attractor iteration monotonically decreasing.
    """

    name: str
    dim: int
    maps: tuple
    scalar_maps: tuple
    lower: tuple
    upper: tuple
    seeder: object
    metric: str = "euclidean"
    discrete: bool = False
    seed_absorbing: bool = False
    dsigma_bits: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    def seed_cloud(self, delta: float) -> PointCloud:
        return PointCloud(self.seeder(delta), delta)

    def diameter(self) -> float:
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        return float(np.linalg.norm(hi - lo))

    def escape_check(self, pts: np.ndarray, delta: float, step: int = 0) -> None:
        slack = 10.0 * delta
        lo = np.asarray(self.lower, dtype=float) - slack
        hi = np.asarray(self.upper, dtype=float) + slack
        bad = np.any(pts < lo, axis=1) | np.any(pts > hi, axis=1)
        if bad.any():
            i = int(np.argmax(bad))
            value = tuple(float(v) for v in pts[i])
            excess = float(
                max(np.max(np.asarray(value) - hi, initial=0.0), np.max(lo - np.asarray(value), initial=0.0))
            )
            raise AssumptionViolation(self.name, step, value, excess)


@dataclass(frozen=True)
class AttractorReport:
    """A computed cloud plus convergence diagnostics."""

    cloud: PointCloud
    iterations: int
    residual: float
    converged: bool


def _check_delta(model: ModelSpec, delta: float) -> float:
    delta = float(delta)
    if model.discrete:
        if delta != 0:
            raise ValueError(f"model {model.name!r} is discrete; use delta = 0")
    elif delta <= 0:
        raise ValueError(f"continuous model {model.name!r} needs delta > 0")
    return delta


def hutchinson_step(model: ModelSpec, cloud: PointCloud) -> PointCloud:
    """One application of F(A) = S_0(A) u ... u S_{N-1}(A), snapped."""
    if cloud.n == 0:
        raise ValueError("hutchinson_step needs a nonempty cloud")
    images = [_map_points(fn, cloud.points) for fn in model.maps]
    raw = np.concatenate(images)
    model.escape_check(raw, cloud.delta)
    return PointCloud(raw, cloud.delta)


def skew_step(model: ModelSpec, point, w: UPString):
    """One step of the skew product: (x, w) -> (S_{w(0)}(x), shift(w))."""
    sym = w.letter_at(0)
    if not 0 <= sym < model.n_maps:
        raise ValueError(f"symbol {sym} outside the model's {model.n_maps} maps")
    image = model.scalar_maps[sym](point if model.dim > 1 else float(np.atleast_1d(point)[0]))
    return image, _shift(w)


def apply_word(model: ModelSpec, word: Word, cloud: PointCloud) -> PointCloud:
    """S_w = S_{w(n-1)} o ... o S_{w(0)} applied to the cloud, snapped once."""
    raw = cloud.points
    for k, sym in enumerate(word):
        if not 0 <= sym < model.n_maps:
            raise ValueError(f"symbol {sym} outside the model's {model.n_maps} maps")
        raw = _map_points(model.maps[sym], raw)
        model.escape_check(raw, cloud.delta, step=k + 1)
    return PointCloud(raw, cloud.delta)


def _directed_euclidean(a: np.ndarray, b: np.ndarray) -> float:
    tree = cKDTree(b)
    d, _ = tree.query(a, k=1, workers=-1)
    return float(np.max(d))


def _directed_dsigma(a: np.ndarray, b: np.ndarray, bits: int) -> float:
    ca = a[:, 0].astype(np.int64)
    cb = b[:, 0].astype(np.int64)
    worst = 0.0
    for lo in range(0, len(ca), 1024):
        chunk = ca[lo : lo + 1024]
        x = np.bitwise_xor(chunk[:, None], cb[None, :])
        _, exp = np.frexp(x.astype(float))
        dist = np.where(x == 0, 0.0, np.ldexp(1.0, exp - 1 - bits))
        worst = max(worst, float(dist.min(axis=1).max()))
    return worst


def directed_distance(a: PointCloud, b: PointCloud, model: ModelSpec = None) -> float:
    """One-sided distance sup_{x in a} dist(x, b)."""
    if a.n == 0:
        return 0.0
    if b.n == 0:
        raise ValueError("distance to an empty cloud")
    if model is not None and model.metric == "dsigma":
        return _directed_dsigma(a.points, b.points, model.dsigma_bits)
    return _directed_euclidean(a.points, b.points)


def hausdorff(a: PointCloud, b: PointCloud, model: ModelSpec = None) -> float:
    """Hausdorff distance: the max of the two one-sided sup-inf distances."""
    if a.n == 0 or b.n == 0:
        raise ValueError("hausdorff distance needs nonempty clouds")
    return max(directed_distance(a, b, model), directed_distance(b, a, model))


def compute_K(
    model: ModelSpec,
    delta: float,
    tol: float = None,
    maxiter: int = 1000,
    seed: PointCloud = None,
) -> AttractorReport:
    """Iterate the Hutchinson-Barnsley step from the seeded bounding cloud.

    Stops when the cloud equals its successor (exact cycle on the grid), or
    when the Hausdorff step distance drops to ``tol`` (default: delta, the
    tightest admissible), or at ``maxiter`` with converged=False.
    """
    delta = _check_delta(model, delta)
    if tol is None:
        tol = delta
    if delta > 0 and tol < delta:
        raise ValueError("tol must be at least delta")
    current = seed if seed is not None else model.seed_cloud(delta)
    monotone = model.seed_absorbing and seed is None
    residual = math.inf
    for it in range(1, maxiter + 1):
        nxt = hutchinson_step(model, current)
        if nxt == current:
            return AttractorReport(nxt, it, 0.0, True)
        if monotone:
            removed_n = current.n - nxt.n
            if removed_n < 0:
                raise RuntimeError(f"model {model.name!r}: seed_absorbing seed is not absorbing")
            if 0 < removed_n <= max(2000, current.n // 20):
                removed = current.difference(nxt)
                residual = directed_distance(removed, nxt, model)
                if residual <= tol:
                    return AttractorReport(nxt, it, residual, True)
        else:
            residual = hausdorff(current, nxt, model)
            if residual <= tol:
                return AttractorReport(nxt, it, residual, True)
        current = nxt
    return AttractorReport(current, maxiter, residual, False)


def _tail_cycle(
    model: ModelSpec,
    w: UPString,
    delta: float,
    burnin: int,
    window: int,
    seed: PointCloud,
) -> AttractorReport:
    """Iterate T_k = snap(S_{w(k)}(T_{k-1})) and detect a tail cycle.

    After burn-in, looks for T_{k} == T_{k+p} with p the period length of w
    and returns the union over one cycle; without a cycle inside the window
    the union over the window is returned with converged=False.
    """
    p = len(w.period)
    recent: dict = {}
    cloud = seed
    total = burnin + window
    step = 0
    while True:
        if step >= burnin:
            recent[step] = cloud
            prev = recent.get(step - p)
            if prev is not None and prev == cloud:
                cycle = [recent[j] for j in range(step - p, step)]
                return AttractorReport(PointCloud.union(cycle), step, 0.0, True)
        if step >= total:
            break
        raw = _map_points(model.maps[w.letter_at(step)], cloud.points)
        model.escape_check(raw, delta, step=step + 1)
        cloud = PointCloud(raw, delta)
        step += 1
    tail = [recent[j] for j in sorted(recent)]
    if len(tail) > p:
        residual = hausdorff(tail[-1 - p], tail[-1], model)
    else:
        residual = math.inf
    return AttractorReport(PointCloud.union(tail), step, residual, False)


def default_burnin(model: ModelSpec, delta: float, seed: PointCloud = None) -> int:
    """10 * (diameter / delta) map applications.

    Exact (delta = 0) runs have no grid scale; the seed size stands in as a
    crude transient bound for a finite state space.
    """
    if delta <= 0:
        return seed.n if seed is not None else 0
    return int(math.ceil(10.0 * model.diameter() / delta))


def individual_attractor(
    model: ModelSpec,
    w: UPString,
    delta: float,
    burnin: int = None,
    window: int = None,
    seed: PointCloud = None,
) -> AttractorReport:
    """The per-strategy attractor A_w: union over one detected tail cycle.

    The iteration runs from the seeded bounding cloud; cycles in the snapped
    set sequence are detected with period dividing |period(w)|.
    """
    if model.discrete:
        delta = _check_delta(model, delta)
    else:
        delta = float(delta)
        if delta < 0:
            raise ValueError("delta must be non-negative")
    if seed is None:
        seed = model.seed_cloud(delta)
    if burnin is None:
        burnin = default_burnin(model, delta, seed)
    if window is None:
        window = 4 * len(w.period)
    return _tail_cycle(model, w, delta, burnin, window, seed)


def omega_limit(
    model: ModelSpec,
    seed: PointCloud,
    w: UPString,
    delta: float,
    burnin: int = None,
    window: int = None,
) -> PointCloud:
    """The omega-limit set of a caller-supplied seed along strategy w."""
    report = individual_attractor(model, w, delta, burnin=burnin, window=window, seed=seed)
    return report.cloud


def chaos_game(
    model: ModelSpec,
    probs,
    x0,
    steps: int,
    burnin: int,
    rng_seed: int,
    delta: float,
    observable=None,
):
    """Random iteration: pick S_j with probability probs[j] each step.

    Returns ``(cloud, mean)`` where the cloud collects the post-burn-in
    points snapped at delta and mean is the empirical average of the
    observable (default: first coordinate) over the post-burn-in orbit.
    Identical rng_seed gives bit-identical results.
    """
    probs = np.asarray(probs, dtype=float)
    if len(probs) != model.n_maps:
        raise ValueError(f"need {model.n_maps} probabilities, got {len(probs)}")
    if (probs < 0).any() or not probs.any():
        raise ValueError("probabilities must be non-negative and not all zero")
    if abs(float(probs.sum()) - 1.0) > 1e-12:
        raise ValueError("probabilities must sum to 1 within 1e-12")
    if steps <= burnin:
        raise ValueError("steps must exceed burnin")
    rng = np.random.default_rng(rng_seed)
    symbols = rng.choice(model.n_maps, size=steps, p=probs)
    fns = model.scalar_maps
    if model.dim == 1:
        x = float(x0 if np.isscalar(x0) else x0[0])
        buf = np.empty(steps)
        for i, s in enumerate(symbols.tolist()):
            x = fns[s](x)
            buf[i] = x
        buf = buf[:, None]
    else:
        x = tuple(float(v) for v in np.atleast_1d(x0))
        buf = np.empty((steps, model.dim))
        for i, s in enumerate(symbols.tolist()):
            x = fns[s](x)
            buf[i] = x
    model.escape_check(buf, delta)
    tail = buf[burnin:]
    cloud = PointCloud(tail, delta)
    obs = observable if observable is not None else (lambda a: a[:, 0])
    mean = float(np.mean(obs(tail)))
    return cloud, mean
