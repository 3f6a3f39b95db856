"""Shared helpers for the test suite."""

import numpy as np

import medianjn as mj


def two_point_space(w0=1.0, w1=1.0):
    return mj.build_space(["p0", "p1"], [w0, w1], coords=[[0.0], [1.0]])


def line_space(positions, weights=None, ids=None):
    positions = list(positions)
    ids = ids or [f"p{i}" for i in range(len(positions))]
    weights = weights or [1.0] * len(positions)
    return mj.build_space(ids, weights, coords=[[x] for x in positions])


def fn(space, values):
    return mj.SampleFunction.from_values(space, values)


def random_space(rng, max_n=12, min_n=2, dim=1, weight_lo=0.2, weight_hi=2.0):
    n = int(rng.integers(min_n, max_n + 1))
    while True:
        coords = rng.uniform(0.0, 10.0, size=(n, dim))
        diff = coords[:, None, :] - coords[None, :, :]
        d = np.sqrt((diff**2).sum(-1)) + np.eye(n)
        if d.min() > 1e-6:
            break
    w = rng.uniform(weight_lo, weight_hi, size=n)
    return mj.build_space([f"p{i}" for i in range(n)], w, coords=coords)
