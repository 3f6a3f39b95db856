import math

import numpy as np
import pytest

import medianjn as mj
from medianjn.errors import ConstructionFailed, InvalidS, UnverifiedDecomposition

from util import fn, random_space


@pytest.fixture(scope="module")
def grid32():
    return mj.grid_space(1, 32, spacing=1.0 / 32)


@pytest.fixture(scope="module")
def dec32(grid32):
    return mj.grid_boman_decomposition(grid32, mj.ball_at(grid32, "p15", 10.0))


def test_grid_decomposition_verifies(grid32, dec32):
    cert = mj.verify_boman(grid32, dec32)
    assert cert.ok, cert.failing()
    assert dec32.c2 > dec32.c1 > 1.0


def test_trivial_single_ball():
    g = mj.grid_space(1, 8)
    dec = mj.grid_boman_decomposition(g, mj.ball_at(g, "p3", 0.25))
    cert = mj.verify_boman(g, dec)
    assert cert.ok
    assert len(dec.balls) == 1 and dec.links == {}


def test_violation_detection(grid32, dec32):
    bad = mj.BomanDecomposition(
        region=dec32.region,
        balls=dec32.balls,
        central=dec32.central,
        c1=dec32.c1,
        c2=dec32.c2,
        c3=dec32.c3,
        rho=1.01,
        overlap=dec32.overlap,
        chains=dec32.chains,
        links=dec32.links,
    )
    cert = mj.verify_boman(grid32, bad)
    assert not cert.ok and "v-absorption" in cert.failing()


def test_block_granularity():
    g = mj.grid_space(1, 30, spacing=1.0 / 30)
    dec = mj.grid_boman_decomposition(g, mj.ball_at(g, "p15", 5.0), granularity=3)
    assert mj.verify_boman(g, dec).ok
    assert len(dec.balls) == 10
    with pytest.raises(mj.errors.InvalidParameter):
        mj.grid_boman_decomposition(g, mj.ball_at(g, "p15", 5.0), granularity=2)


def test_construction_failed_two_points():
    sp = mj.build_space(["a", "b"], [1, 1], coords=[[0.0], [500.0]])
    with pytest.raises(ConstructionFailed):
        mj.grid_boman_decomposition(sp, mj.ball_at(sp, "a", 1000.0))


def test_chain_ratio_trivial_cases(grid32):
    single = mj.grid_boman_decomposition(grid32, mj.ball_at(grid32, "p5", 1.0 / 64))
    f = mj.canonical_function("log_blowup", grid32)
    res = mj.chain_ratio(grid32, f, single, 2.0, 0.5)
    assert res.lhs == 0.0 and res.c0 == 0.0


def test_chain_ratio_constant_function(grid32, dec32):
    const = fn(grid32, np.full(grid32.n, 1.5))
    res = mj.chain_ratio(grid32, const, dec32, 2.0, 0.5)
    assert res.lhs == 0.0 and res.rhs_sum == 0.0 and res.c0 == 0.0


def test_chain_ratio_requires_verified(grid32, dec32):
    bad = mj.BomanDecomposition(
        region=dec32.region[:-1],
        balls=dec32.balls,
        central=dec32.central,
        c1=dec32.c1,
        c2=dec32.c2,
        c3=dec32.c3,
        rho=dec32.rho,
        overlap=dec32.overlap,
        chains=dec32.chains,
        links=dec32.links,
    )
    f = mj.canonical_function("log_blowup", grid32)
    with pytest.raises(UnverifiedDecomposition):
        mj.chain_ratio(grid32, f, bad, 2.0, 0.5)


def test_global_matches_local_on_single_ball(grid32):
    single = mj.grid_boman_decomposition(grid32, mj.ball_at(grid32, "p7", 1.0 / 64))
    f = mj.canonical_function("log_blowup", grid32)
    base = mj.dilate(grid32, single.balls[0], single.c1)
    eta = single.c2 / single.c1 - 1.0
    params = mj.cz_params(grid32, base, eta=eta)
    s = params.s0 * 0.9
    grid_l = np.geomspace(0.05, 5.0, 15)
    local = mj.local_jn_verify(f, params, 2.0, s, 0.5, lambda_grid=grid_l)
    glob = mj.global_jn_verify(grid32, f, single, 2.0, s, 0.5, lambda_grid=grid_l)
    for e_loc, (lam, lhs, _) in zip(local.entries, glob.entries):
        assert abs(e_loc.lhs - lhs) <= 1e-12


def test_global_verify_log_fixture(grid32, dec32):
    f = mj.canonical_function("log_blowup", grid32)
    rep = mj.global_jn_verify(grid32, f, dec32, 2.0, 0.0005, 0.5)
    assert rep.passed
    assert math.isfinite(rep.c_measured) and math.isfinite(rep.c0_empirical)
    with pytest.raises(InvalidS):
        mj.global_jn_verify(grid32, f, dec32, 2.0, 0.4, 0.5)


def test_constant_function_global(grid32, dec32):
    const = fn(grid32, np.full(grid32.n, 2.0))
    rep = mj.global_jn_verify(grid32, const, dec32, 2.0, 0.0005, 0.5)
    assert rep.c_measured == 0.0 and rep.passed


def test_equivalence_two_point():
    sp = mj.build_space(["p0", "p1"], [1, 1], coords=[[0.0], [1.0]])
    f = fn(sp, [0.0, 1.0])
    rep = mj.jn_equivalence_check(sp, f, None, 2.0, 1.0, 0.5, c_budget=10.0)
    assert rep.lower_bound_ok
    assert rep.upper_ratio == pytest.approx(1.0, rel=1e-12)
    assert rep.median_norm == pytest.approx(math.sqrt(0.5), rel=1e-12)


def test_equivalence_degenerate():
    sp = mj.build_space(["p0", "p1"], [1, 1], coords=[[0.0], [1.0]])
    rep = mj.jn_equivalence_check(sp, fn(sp, [3.0, 3.0]), None, 2.0, 1.0, 0.5, 10.0)
    assert rep.degenerate and rep.lower_bound_ok and rep.upper_ok


def test_equivalence_lower_bound_random():
    rng = np.random.default_rng(41)
    for _ in range(30):
        sp = random_space(rng, max_n=7)
        f = fn(sp, rng.normal(size=sp.n))
        p = float(rng.uniform(1.5, 3.0))
        q = float(rng.uniform(0.4, 0.9) * p)
        s = float(rng.uniform(0.05, 0.5))
        rep = mj.jn_equivalence_check(sp, f, None, p, q, s, c_budget=50.0)
        assert rep.lower_bound_ok


def test_decomposition_json_roundtrip(grid32, dec32):
    back = mj.decomposition_from_json(grid32, dec32.to_json())
    assert back.region == dec32.region
    assert back.chains == dec32.chains
    assert back.links == dec32.links
    assert mj.verify_boman(grid32, back).ok
