import math

import numpy as np
import pytest

import medianjn as mj
from medianjn.errors import EmptyRegion, ExactModeTooLarge, InvalidS, NonPositiveQ

from util import fn, random_space, two_point_space


def test_lp_norm_examples():
    sp = two_point_space()
    assert mj.lp_norm(sp, fn(sp, [0.0, 0.0]), None, 2.0) == 0.0
    assert mj.lp_norm(sp, fn(sp, [3.0, 4.0]), None, 2.0) == 5.0
    single = mj.build_space(["a"], [2.0], coords=[[0.0]])
    assert mj.lp_norm(single, fn(single, [3.0]), None, 1.0) == 6.0
    with pytest.raises(EmptyRegion):
        mj.lp_norm(sp, fn(sp, [1.0, 1.0]), [], 2.0)


def test_weak_lp_examples():
    sp = two_point_space()
    assert mj.weak_lp_norm(sp, fn(sp, [0.0, 0.0]), None, 2.0) == 0.0
    assert mj.weak_lp_norm(sp, fn(sp, [2.0, 1.0]), None, 2.0) == 2.0


def test_weak_lp_constant_identity():
    rng = np.random.default_rng(3)
    for _ in range(40):
        sp = random_space(rng, max_n=8)
        c = float(rng.normal())
        p = float(rng.uniform(1.0, 4.0))
        got = mj.weak_lp_norm(sp, fn(sp, np.full(sp.n, c)), None, p)
        assert got == pytest.approx(abs(c) * sp.total_measure ** (1.0 / p), rel=1e-12)


def test_integral_oscillation_examples():
    sp = two_point_space()
    f = fn(sp, [0.0, 1.0])
    assert mj.integral_oscillation(sp, fn(sp, [2.0, 2.0]), None, 1.0) == (0.0, 2.0)
    v1, _ = mj.integral_oscillation(sp, f, None, 1.0)
    assert v1 == pytest.approx(0.5, abs=1e-12)
    v2, c2 = mj.integral_oscillation(sp, f, None, 2.0)
    assert v2 == pytest.approx(0.25, abs=1e-12)
    assert c2 == pytest.approx(0.5, abs=1e-10)
    with pytest.raises(NonPositiveQ):
        mj.integral_oscillation(sp, f, None, 0.0)


def test_integral_oscillation_subunit_exponent():
    sp = two_point_space()
    f = fn(sp, [0.0, 1.0])
    value, c = mj.integral_oscillation(sp, f, None, 0.5)
    # concave power: the best center sits at a sample value
    assert value == pytest.approx(0.5, abs=1e-9)
    assert min(abs(c - 0.0), abs(c - 1.0)) < 1e-6


def test_bmo_examples():
    sp = two_point_space()
    assert mj.bmo_median_norm(sp, fn(sp, [7.0, 7.0]), None, 0.5) == 0.0
    assert mj.bmo_median_norm(sp, fn(sp, [0.0, 1.0]), None, 0.5) == 0.5
    three = mj.grid_space(1, 3)
    f = fn(three, [1.0, 0.0, 0.0])
    best = max(
        mj.median_oscillation(three, f, b, 0.5)[0]
        for b in mj.canonical_balls(three)
    )
    assert mj.bmo_median_norm(three, f, None, 0.5) == best


def test_jn_median_two_point():
    sp = two_point_space()
    f = fn(sp, [0.0, 1.0])
    res = mj.jn_median_norm(sp, f, None, 2.0, 0.5)
    assert res.value == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert len(res.packing.balls) == 1
    assert res.packing.balls[0].members == ("p0", "p1")
    const = mj.jn_median_norm(sp, fn(sp, [4.0, 4.0]), None, 2.0, 0.5)
    assert const.value == 0.0 and const.packing.balls == ()


def test_jn_integral_two_point():
    sp = two_point_space()
    f = fn(sp, [0.0, 1.0])
    res = mj.jn_integral_norm(sp, f, None, 2.0, 1.0)
    assert res.value == pytest.approx(math.sqrt(0.5), rel=1e-12)


def test_greedy_below_exact():
    rng = np.random.default_rng(4)
    for _ in range(60):
        sp = random_space(rng, max_n=7)
        f = fn(sp, rng.normal(size=sp.n))
        s = float(rng.uniform(0.05, 0.5))
        p = float(rng.choice([1.5, 2.0, 3.0]))
        exact = mj.jn_median_norm(sp, f, None, p, s, mode="exact", force=True)
        greedy = mj.jn_median_norm(sp, f, None, p, s, mode="greedy")
        assert greedy.total <= exact.total * (1 + 1e-12) + 1e-15


def test_exact_mode_refusal_and_force():
    g = mj.grid_space(1, 20)
    f = fn(g, np.log(np.arange(1, 21, dtype=float)))
    with pytest.raises(ExactModeTooLarge):
        mj.jn_median_norm(g, f, None, 2.0, 0.25, mode="exact")
    forced = mj.jn_median_norm(g, f, None, 2.0, 0.25, mode="exact", force=True)
    greedy = mj.jn_median_norm(g, f, None, 2.0, 0.25, mode="greedy")
    assert greedy.total <= forced.total * (1 + 1e-12)


def test_packing_disjointness_and_region():
    rng = np.random.default_rng(9)
    sp = random_space(rng, max_n=8)
    f = fn(sp, rng.normal(size=sp.n))
    region = [sp.point_ids[i] for i in range(sp.n - 1)]
    res = mj.jn_median_norm(sp, f, region, 2.0, 0.25, mode="exact", force=True)
    used = 0
    region_idx = {sp.index(p) for p in region}
    for b in res.packing.balls:
        assert used & b.mask == 0
        used |= b.mask
        assert set(b.idx) <= region_idx


def test_centered_sup_sandwich_smoke():
    rng = np.random.default_rng(10)
    sp = random_space(rng, max_n=6)
    f = fn(sp, rng.normal(size=sp.n))
    norm = mj.jn_median_norm(sp, f, None, 2.0, 0.2, mode="exact", force=True)
    centered = mj.jn_centered_sup(sp, f, None, 2.0, 0.2, 0.5, force=True)
    assert norm.total <= centered.total * (1 + 1e-12) + 1e-15
    assert centered.total <= 4.0 * norm.total * (1 + 1e-12) + 1e-15
    with pytest.raises(InvalidS):
        mj.jn_centered_sup(sp, f, None, 2.0, 0.4, 0.3)


def test_norm_algebra():
    # Subadditivity under split levels, absolute-value contraction, and the
    # max/min bounds at quartered levels.
    rng = np.random.default_rng(17)
    for _ in range(60):
        sp = random_space(rng, max_n=6)
        f = fn(sp, rng.normal(size=sp.n))
        g = fn(sp, rng.normal(size=sp.n))
        p = float(rng.choice([1.5, 2.0, 3.0]))
        s = float(rng.uniform(0.05, 0.5))
        u = float(rng.uniform(0.2, 0.8))
        t1, t2 = u * s, (1.0 - u) * s

        def norm(h, level):
            return mj.jn_median_norm(sp, h, None, p, level, force=True).value

        slack = 1e-9
        total = fn(sp, f.values + g.values)
        assert norm(total, s) <= (norm(f, t1) + norm(g, t2)) * (1 + slack) + 1e-14
        assert norm(fn(sp, np.abs(f.values)), s) <= norm(f, s) * (1 + slack) + 1e-14
        hi = fn(sp, np.maximum(f.values, g.values))
        lo = fn(sp, np.minimum(f.values, g.values))
        bound = norm(f, t1 / 2.0) + norm(g, t2 / 2.0)
        assert norm(hi, s) <= bound * (1 + slack) + 1e-14
        assert norm(lo, s) <= bound * (1 + slack) + 1e-14


def test_norm_params_validation():
    mj.NormParams(p=2.0, q=1.0, s=0.25, r_center=0.5)
    with pytest.raises(InvalidS):
        mj.NormParams(p=2.0, q=1.0, s=0.6, r_center=0.6)
    with pytest.raises(mj.errors.InvalidParameter):
        mj.NormParams(p=0.5, q=0.1, s=0.25, r_center=0.5)


def test_result_json_shape():
    sp = two_point_space()
    res = mj.jn_median_norm(sp, fn(sp, [0.0, 1.0]), None, 2.0, 0.5)
    payload = res.to_json()
    assert set(payload) == {"norm", "packing", "mode"}
    assert set(payload["packing"][0]) == {"center", "radius", "oscillation", "term"}
