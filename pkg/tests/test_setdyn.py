import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from choicedyn import models
from choicedyn.setdyn import (
    AssumptionViolation,
    PointCloud,
    apply_word,
    chaos_game,
    compute_K,
    directed_distance,
    hausdorff,
    hutchinson_step,
    individual_attractor,
    omega_limit,
    skew_step,
)
from choicedyn.symbolic import UPString, Word, shift


@pytest.fixture(scope="module")
def cantor():
    return models.cantor_model()


@pytest.fixture(scope="module")
def cantor_K(cantor):
    return compute_K(cantor, delta=1e-3)


@pytest.fixture(scope="module")
def three_point():
    return models.three_point_model()


def test_cloud_snapping_and_order():
    cloud = PointCloud(np.array([[0.26], [0.24], [0.26], [0.97]]), 0.1)
    assert cloud.points.ravel().tolist() == pytest.approx([0.2, 0.3, 1.0])
    assert cloud.n == 3  # duplicates collapse
    # ties round toward -inf (0.5 grid keeps the arithmetic exact)
    assert PointCloud(np.array([[0.25]]), 0.5).points.ravel().tolist() == [0.0]
    assert PointCloud(np.array([[-0.25]]), 0.5).points.ravel().tolist() == [-0.5]
    assert PointCloud(np.array([[0.75]]), 0.5).points.ravel().tolist() == [0.5]


finite_floats = st.floats(min_value=-8.0, max_value=8.0, allow_nan=False)
point_lists = st.lists(st.tuples(finite_floats, finite_floats), min_size=1, max_size=12)


@given(pts=point_lists, delta=st.sampled_from([0.0, 0.5, 0.125]))
def test_snapping_idempotent(pts, delta):
    cloud = PointCloud(np.array(pts), delta)
    again = PointCloud(cloud.points, delta)
    assert again == cloud


@given(a=point_lists, b=point_lists, delta=st.sampled_from([0.0, 0.25]))
def test_union_is_commutative_and_absorbing(a, b, delta):
    ca = PointCloud(np.array(a), delta)
    cb = PointCloud(np.array(b), delta)
    u1 = PointCloud.union([ca, cb])
    u2 = PointCloud.union([cb, ca])
    assert u1 == u2
    assert ca.subset_of(u1) and cb.subset_of(u1)
    assert ca.difference(u1).n == 0
    assert ca.intersection(u1) == ca


def test_cloud_set_semantics():
    a = PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]]), 0.5)
    b = PointCloud(np.array([[1.0, 1.0], [0.0, 0.0]]), 0.5)
    assert a == b
    c = PointCloud(np.array([[0.0, 0.0]]), 0.5)
    assert c.subset_of(a) and not a.subset_of(c)
    assert a.difference(c) == PointCloud(np.array([[1.0, 1.0]]), 0.5)
    assert a.intersection(c) == c


def test_hutchinson_cantor_corners(cantor):
    out = hutchinson_step(cantor, PointCloud(np.array([[0.0], [1.0]]), 1e-4))
    assert np.allclose(out.points.ravel(), [0.0, 1 / 3, 2 / 3, 1.0], atol=1e-4)


def test_hutchinson_three_point_full_set(three_point):
    full = three_point.seed_cloud(0.0)
    assert hutchinson_step(three_point, full) == full


def test_fixed_cloud_stays_fixed(cantor, cantor_K):
    assert hutchinson_step(cantor, cantor_K.cloud) == cantor_K.cloud


def test_hausdorff_basics():
    one = PointCloud(np.array([[0.0]]), 0.0)
    other = PointCloud(np.array([[1.0]]), 0.0)
    both = PointCloud(np.array([[0.0], [1.0]]), 0.0)
    assert hausdorff(one, other) == 1.0
    assert hausdorff(both, both) == 0.0
    assert hausdorff(both, one) == 1.0
    assert directed_distance(one, both) == 0.0
    with pytest.raises(ValueError):
        hausdorff(one, PointCloud(np.empty((0, 1)), 0.0))


def test_compute_K_matches_ternary_oracle(cantor, cantor_K):
    # independent recursion on the interval tree, never the map iteration
    depth = 7  # ceil(log3(1/delta)) for delta = 1e-3
    ref = PointCloud(models.cantor_reference_points(depth), 1e-3)
    assert cantor_K.converged
    assert hausdorff(cantor_K.cloud, ref) <= 2e-3
    for x in cantor_K.cloud.points.ravel()[::50]:
        assert models.distance_to_cantor(float(x), depth) <= 2e-3


def test_compute_K_three_point_exact(three_point):
    rep = compute_K(three_point, delta=0.0)
    assert rep.converged and rep.residual == 0.0
    assert models.label_cloud(rep.cloud) == frozenset("ABC")


def test_compute_K_single_map_contains_fixed_points():
    rep = compute_K(models.malaria_single(models.PSET0), delta=1e-3)
    assert rep.converged
    for pt in models.fixed_points(models.PSET0):
        assert directed_distance(PointCloud(np.array([pt]), 1e-3), rep.cloud) <= 2e-3


def test_compute_K_seed_independence(cantor, cantor_K):
    other = compute_K(cantor, delta=1e-3, seed=PointCloud(np.array([[0.3], [0.9]]), 1e-3))
    assert other.converged
    assert hausdorff(other.cloud, cantor_K.cloud) <= 2 * 2e-3


def test_compute_K_rejects_bad_resolution(cantor, three_point):
    with pytest.raises(ValueError):
        compute_K(cantor, delta=0.0)
    with pytest.raises(ValueError):
        compute_K(three_point, delta=0.01)
    with pytest.raises(ValueError):
        compute_K(cantor, delta=1e-3, tol=1e-4)


def test_skew_step_matches_orbit():
    mal = models.malaria_model()
    w = UPString("01", "10")
    x, s = (0.5, 0.5), w
    orbit = [x]
    for _ in range(5):
        x, s = skew_step(mal, x, s)
        orbit.append(x)
    direct = (0.5, 0.5)
    for k in range(5):
        direct = mal.scalar_maps[w.letter_at(k)](direct)
        assert orbit[k + 1] == direct
    assert s == shift(w, 5)


def test_apply_word_examples():
    line = models.line_counterexample()
    one = PointCloud(np.array([[1.0]]), 0.0)
    assert apply_word(line, Word(""), one) == one
    assert apply_word(line, Word("01"), one).points.ravel().tolist() == [4.0]
    cantor = models.cantor_model()
    cloud = PointCloud(np.array([[0.0], [1.0]]), 1e-4)
    just0 = apply_word(cantor, Word("0"), cloud)
    only_map0 = hutchinson_step(models.submodel(cantor, 0), cloud)
    assert just0 == only_map0


def test_individual_attractor_single_symbol_reduction(cantor):
    rep = individual_attractor(cantor, UPString("", "0"), delta=1e-3)
    sub = compute_K(models.submodel(cantor, 0), delta=1e-3)
    assert rep.converged
    assert hausdorff(rep.cloud, sub.cloud) <= 2 * 1e-3


def test_individual_attractor_periodic_cycle_union(cantor):
    # (01)* alternates x/3 and x/3 + 2/3; the two-cycle 0.25 <-> 0.75 solves
    # S1(S0(x)) = x/9 + 2/3 = x and S0(S1(x)) = x/9 + 2/9 = x by hand
    rep = individual_attractor(cantor, UPString("", "01"), delta=1e-4, burnin=200)
    assert rep.converged
    assert np.allclose(sorted(rep.cloud.points.ravel()), [0.25, 0.75], atol=2e-4)


def test_line_model_diagnostics():
    line = models.line_counterexample()
    seed = PointCloud(np.array([[1.0]]), 0.0)
    with pytest.raises(AssumptionViolation) as err:
        individual_attractor(line, UPString("", "01"), delta=0.0, burnin=0, window=40, seed=seed)
    assert err.value.step <= 25
    for j in (0, 1):
        rep = individual_attractor(line, UPString("", str(j)), delta=0.0)
        assert rep.converged
        assert np.max(np.abs(rep.cloud.points)) <= 1e-9


def test_omega_limit_examples(three_point):
    w = UPString("", "0")
    from_A = omega_limit(three_point, models.points_cloud(["A"]), w, delta=0.0)
    assert models.label_cloud(from_A) == frozenset("BC")
    bigger = omega_limit(three_point, models.points_cloud(["A", "B"]), w, delta=0.0)
    assert from_A.subset_of(bigger)


def test_omega_limit_inside_individual_attractor():
    mal = models.malaria_model()
    w = UPString("", "0")
    a_w = individual_attractor(mal, w, delta=0.01)
    om = omega_limit(mal, PointCloud(np.array([[0.5, 0.5]]), 0.01), w, delta=0.01)
    assert directed_distance(om, a_w.cloud) <= 2 * 0.01


def test_nesting_inclusions_on_cantor(cantor, cantor_K):
    delta = 1e-3
    for per in ("0", "1", "01", "011"):
        rep = individual_attractor(cantor, UPString("", per), delta=delta)
        f_a = hutchinson_step(cantor, rep.cloud)
        assert directed_distance(rep.cloud, f_a) <= 2 * delta
        assert directed_distance(f_a, cantor_K.cloud) <= 2 * delta


def test_cantor_digit_coding_reaches_every_K_point(cantor, cantor_K):
    # base-2 coding of the ternary digits: periodized, the composite word
    # S_{w[depth]} contracts to a point within 3**-depth of the target
    delta = 1e-3
    depth = 7
    rng = np.random.default_rng(3)
    pts = cantor_K.cloud.points.ravel()
    for x in rng.choice(pts, size=5, replace=False):
        digits = models.cantor_digits(float(x), depth)
        word = tuple(d // 2 for d in reversed(digits))
        rep = individual_attractor(cantor, UPString("", word), delta=delta)
        target = PointCloud(np.array([[float(x)]]), delta)
        assert directed_distance(target, rep.cloud) <= 2 * delta
        assert directed_distance(rep.cloud, cantor_K.cloud) <= 2 * delta


def test_chaos_game_contract(cantor):
    cloud, mean = chaos_game(
        cantor, (0.5, 0.5), 0.2, steps=20_000, burnin=500, rng_seed=11, delta=1e-3
    )
    cloud2, mean2 = chaos_game(
        cantor, (0.5, 0.5), 0.2, steps=20_000, burnin=500, rng_seed=11, delta=1e-3
    )
    assert cloud == cloud2 and mean == mean2
    with pytest.raises(ValueError):
        chaos_game(cantor, (0.7, 0.7), 0.2, steps=100, burnin=1, rng_seed=0, delta=1e-3)
    with pytest.raises(ValueError):
        chaos_game(cantor, (0.5, 0.5), 0.2, steps=10, burnin=20, rng_seed=0, delta=1e-3)


def test_chaos_game_scatter_inside_K(cantor, cantor_K):
    cloud, _ = chaos_game(
        cantor, (0.5, 0.5), 0.2, steps=20_000, burnin=500, rng_seed=11, delta=1e-3
    )
    assert directed_distance(cloud, cantor_K.cloud) <= 3e-3


def test_csv_round_trip(cantor_K):
    text = cantor_K.cloud.to_csv()
    again = PointCloud.from_csv(text, cantor_K.cloud.delta)
    assert again == cantor_K.cloud
    assert again.to_csv() == text


def test_delta_invariance_constant(cantor):
    for delta in (1e-2, 1e-3):
        rep = compute_K(cantor, delta=delta)
        assert rep.converged
        step = hutchinson_step(cantor, rep.cloud)
        assert hausdorff(step, rep.cloud) <= 4 * delta


def test_dsigma_metric_hausdorff():
    model = models.gestalt_model()
    L = model.meta["depth"]
    a = PointCloud(np.array([[float(models.word_to_code("0" * L, L))]]), 0.0)
    b_code = models.word_to_code("001" + "0" * (L - 3), L)
    b = PointCloud(np.array([[float(b_code)]]), 0.0)
    # first disagreement at position 2 (0-indexed), so the distance is 2**-3
    assert hausdorff(a, b, model) == 2.0 ** -3
    assert hausdorff(a, a, model) == 0.0


def test_thread_pool_reduction_is_canonical(monkeypatch):
    mal = models.malaria_model()
    base = compute_K(mal, delta=0.02)
    monkeypatch.setenv("CHOICE_DYN_THREADS", "4")
    threaded = compute_K(mal, delta=0.02)
    assert threaded.cloud == base.cloud
    assert threaded.iterations == base.iterations


def test_maxiter_exhaustion_reports_not_converged(cantor):
    rep = compute_K(cantor, delta=1e-3, maxiter=2)
    assert not rep.converged
    assert rep.iterations == 2
    assert rep.residual > 1e-3
