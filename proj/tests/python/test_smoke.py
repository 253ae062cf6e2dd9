import itertools
import json
import math

import pytest

import slicewalk as sw


def brute_slice_count(g, kx, ky):
    adj = set(g.edges())
    n = 0
    for xs in itertools.combinations(range(g.x_count), kx):
        for ys in itertools.combinations(range(g.y_count), ky):
            if all((x, y) not in adj for x in xs for y in ys):
                n += 1
    return n


def test_generators_are_seeded():
    a = sw.gen_bipartite_regular(20, 3, seed=5)
    b = sw.gen_bipartite_regular(20, 3, seed=5)
    assert a.edges() == b.edges()
    assert len(a.edges()) == 60
    g = sw.gen_regular(12, 3, seed=1)
    assert g.vertex_count == 12 and len(g.edges()) == 18


def test_exact_count_matches_brute_force():
    g = sw.gen_bipartite_regular(6, 3, seed=2)
    for kx, ky in [(1, 1), (2, 1), (2, 2), (3, 0)]:
        assert sw.exact_slice_count(g, kx, ky) == brute_slice_count(g, kx, ky)


def test_one_sided_sum_is_partition_function():
    g = sw.gen_bipartite_regular(6, 2, seed=3)
    lam = 0.7
    total = sum(sw.exact_one_sided_partition(g, k, lam) for k in range(7))
    assert total == pytest.approx(sw.exact_partition(g, lam), rel=1e-12)


def test_distribution_and_sampler():
    g = sw.gen_bipartite_regular(5, 2, seed=4)
    s = sw.two_sided_slice(g, 1, 1)
    facets, prob = sw.exact_distribution(s)
    assert len(facets) == brute_slice_count(g, 1, 1)
    assert sum(prob) == pytest.approx(1.0)
    out = sw.sample(s, 20000, seed=9)
    assert all(s.is_facet(f) for f in out["samples"])
    assert out["report"]["tv"] < 0.1


def test_estimator_close_to_exact():
    g = sw.gen_bipartite_regular(6, 3, seed=6)
    # (1, 1) is connected under the down-up walk on this graph; (2, 1) is not
    est = sw.estimate_two_sided_count(g, 1, 1, eps=0.2, delta=0.2, seed=1)
    exact = sw.exact_slice_count(g, 1, 1)
    assert abs(est["estimate"] / exact - 1) < 0.2
    assert math.isclose(math.exp(est["log_estimate"]), est["estimate"], rel_tol=1e-9)


def test_verifier_reports():
    g = sw.gen_bipartite_regular(8, 3, seed=7)
    r = sw.verify_two_sided(g, 2, 2)
    assert r["failed"] == 0 and r["links"]


def test_bad_arguments_raise():
    with pytest.raises(ValueError):
        sw.gen_bipartite_regular(3, 5, seed=0)


def test_cli_passthrough_is_deterministic():
    args = ["--seed", "4", "gen-graph", "--bipartite", "--n", "10", "--delta", "3"]
    assert sw.run_cli(args) == sw.run_cli(args)
    rc, out, _ = sw.run_cli(["--seed", "1", "experiment", "ramanujan", "--n-side", "50", "--samples", "2"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["reproducibility"]["seed"] == 1
    rc, _, err = sw.run_cli(["estimate-z", "--lambda", "-1"])
    assert rc == 2 and err
