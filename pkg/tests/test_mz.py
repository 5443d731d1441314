import math
from collections import Counter

import networkx as nx
import numpy as np
import pytest

from geocycle.mz import (
    MzReport,
    PartitionError,
    build_graph,
    build_mz_cycle,
    curve_lp_norms,
    equal_area_partition,
    euler_cycle,
    mz_test,
    parse_p,
    patch_count,
    select_pairs,
    sphere_norms,
    tour_edges,
)
from geocycle.sphere import distance


@pytest.fixture(scope="module")
def built4():
    return build_mz_cycle(4)


def test_two_hemispheres():
    part = equal_area_partition(2)
    assert part.n == 2
    assert np.allclose(part.areas, 0.5, atol=1e-15)
    g = build_graph(part)
    assert sorted(map(sorted, g.multi_edges)) == [[0, 1], [0, 1]]
    assert g.degrees == [2, 2]
    walk = euler_cycle(g)
    assert walk[0] == walk[-1] == 0 and len(walk) == 3
    built = build_mz_cycle(1, cn=2.0)
    assert built.cycle.n == 4


@pytest.mark.parametrize("n", [3, 10, 37, 100, 400])
def test_partition_areas_and_cover(n):
    part = equal_area_partition(n)
    assert part.n == n
    assert np.max(np.abs(part.areas - 1 / n)) <= 1e-12
    rng = np.random.default_rng(n)
    X = rng.standard_normal((4000, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    ids = part.locate(X)
    assert np.all(ids >= 0)
    # empirical area agrees with 1/n up to Monte Carlo noise
    frac = np.bincount(ids, minlength=n) / len(X)
    assert np.max(np.abs(frac - 1 / n)) < 6 * math.sqrt(1 / n / len(X)) + 1e-3


def test_partition_diameter_constant():
    assert equal_area_partition(100).diam_constant <= 7
    with pytest.raises(PartitionError):
        equal_area_partition(1)


@pytest.mark.parametrize("n", [10, 50, 200])
def test_graph_even_degrees_and_connected(n):
    g = build_graph(equal_area_partition(n))
    assert all(d % 2 == 0 for d in g.degrees)
    assert g.is_connected()
    G = nx.MultiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from(g.multi_edges)
    assert nx.is_connected(G) and nx.is_eulerian(G)
    # every adjacency appears exactly twice
    counts = Counter(tuple(sorted(e)) for e in g.multi_edges)
    assert set(counts.values()) == {2}
    assert all(j not in nb for j, nb in enumerate(g.neighbors))


def test_kissing_bounded():
    peaks = [max(build_graph(equal_area_partition(n)).kissing) for n in (50, 200, 800)]
    assert max(peaks) <= 10
    assert max(peaks) - min(peaks) <= 3


@pytest.mark.parametrize("n", [10, 64, 257])
def test_euler_tour_covers_doubled_edges_once(n):
    g = build_graph(equal_area_partition(n))
    walk = euler_cycle(g)
    assert walk[0] == walk[-1] == 0
    used = Counter(tuple(sorted(e)) for e in tour_edges(walk))
    assert used == Counter(tuple(sorted(e)) for e in g.multi_edges)
    assert euler_cycle(g) == walk


def test_pairs_equal_spacing_and_inside(built4):
    part, pairs = built4.partition, built4.pairs
    gaps = [distance(a, b) for a, b in pairs]
    assert np.ptp(gaps) < 1e-12
    assert gaps[0] == pytest.approx(min(p.inner_cap_radius for p in part.patches), abs=1e-12)
    for p in part.patches:
        assert np.all(p.contains(pairs[p.id]))
        # the inner arc stays within the patch
        mids = [pairs[p.id, 0] + s * (pairs[p.id, 1] - pairs[p.id, 0]) for s in (0.25, 0.5, 0.75)]
        mids = np.array(mids) / np.linalg.norm(mids, axis=1)[:, None]
        assert np.all(p.contains(mids))


def test_assembly_arc_count_and_points(built4):
    n, edges = built4.partition.n, len(built4.walk) - 1
    assert built4.cycle.n == n + edges
    assert edges == len(built4.graph.multi_edges)
    pts = {tuple(np.round(x, 12)) for x in built4.cycle.points}
    assert pts == {tuple(np.round(x, 12)) for x in built4.pairs.reshape(-1, 3)}


def test_length_scaling():
    ratios = []
    for t in (2, 4, 8):
        c = build_mz_cycle(t)
        n = c.partition.n
        assert n == patch_count(t) == 4 * t * t
        ratios.append(c.cycle.length / math.sqrt(n))
    assert max(ratios) / min(ratios) < 2


def test_build_errors():
    with pytest.raises(ValueError):
        build_mz_cycle(0)
    with pytest.raises(ValueError):
        build_mz_cycle(2, cn=0)


def test_constant_polynomial_ratio_is_one(built4):
    C = np.zeros((25, 1))
    C[0, 0] = -1.7
    for p in (1.0, 2.0, 3.0, math.inf):
        num = curve_lp_norms(built4.cycle, 4, p, C)
        den = sphere_norms(4, p, C)
        assert num[0] / den[0] == pytest.approx(1.0, abs=1e-12)


def test_mz_report_and_sup_bound(built4):
    rep = mz_test(built4.cycle, 4, 2, num_samples=50, seed=1)
    assert 0 < rep.ratio_min <= rep.ratio_max
    assert len(rep.ratios) == 50
    assert rep.num_arcs == built4.cycle.n
    again = mz_test(built4.cycle, 4, 2, num_samples=50, seed=1)
    assert again.ratios == rep.ratios
    back = MzReport.from_dict(rep.to_dict())
    assert back.ratio_min == rep.ratio_min and back.t == 4
    sup = mz_test(built4.cycle, 4, "inf", num_samples=20, seed=2)
    assert sup.ratio_max <= 1 + 1e-9
    assert sup.to_dict()["p"] == "inf"


def test_parse_p():
    assert parse_p("inf") == math.inf and parse_p("2") == 2.0
    with pytest.raises(ValueError):
        parse_p(0.5)
