import io
import json
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from slsim.network import (
    Graph,
    compute_stats,
    generate_synthetic,
    load_edge_list,
    local_clustering,
    parse_edge_list,
    parse_graph_source,
    seed_count,
    seed_originators,
    write_edge_list,
)

from oracles import brute_force_clustering, brute_force_triangles

FIXTURE = Path(__file__).parent / "data" / "fixture60.txt"


def random_graph(n, p, seed):
    return Graph.from_edges(n, nx.gnp_random_graph(n, p, seed=seed).edges())


class TestParse:
    def test_path(self):
        g = parse_edge_list(io.StringIO("0 1\n1 2\n"))
        assert g.n == 3
        assert g.edges == ((0, 1), (1, 2))
        assert g.adjacency == ((1,), (0, 2), (1,))

    def test_dedup_and_self_loop(self):
        g = parse_edge_list(io.StringIO("0 1\n1 0\n0 0\n"))
        assert g.n == 2
        assert g.edges == ((0, 1),)

    def test_sparse_ids_densified_in_first_seen_order(self):
        g = parse_edge_list(io.StringIO("# comment\n107 5\n5 42\n"))
        assert g.n == 3
        # 107 -> 0, 5 -> 1, 42 -> 2
        assert g.edges == ((0, 1), (1, 2))

    def test_dense_ids_kept(self):
        g = parse_edge_list(io.StringIO("2 0\n0 1\n"))
        assert g.edges == ((0, 1), (0, 2))

    def test_malformed_line_number(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_edge_list(io.StringIO("0 1\n1 x\n"))

    def test_single_token_line(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_edge_list(io.StringIO("7\n"))

    @pytest.mark.parametrize("text", ["", "# only a comment\n", "3 3\n"])
    def test_empty_rejected(self, text):
        with pytest.raises(ValueError):
            parse_edge_list(io.StringIO(text))

    def test_round_trip(self):
        g = generate_synthetic("ba", 80, np.random.default_rng(3), m=3)
        buf = io.StringIO()
        write_edge_list(g, buf)
        buf.seek(0)
        back = parse_edge_list(buf)
        assert back.n == g.n
        assert back.edges == g.edges

    def test_undirected_invariant(self):
        g = load_edge_list(FIXTURE)
        for i, nbrs in enumerate(g.adjacency):
            assert i not in nbrs
            assert len(set(nbrs)) == len(nbrs)
            for j in nbrs:
                assert i in g.adjacency[j]


class TestFixture:
    def raw_edges(self):
        edges = set()
        for line in FIXTURE.read_text().splitlines():
            if line.startswith("#") or not line.strip():
                continue
            u, v = map(int, line.split())
            if u != v:
                edges.add(frozenset((u, v)))
        return edges

    def test_degrees_match_raw_file(self):
        g = load_edge_list(FIXTURE)
        raw = self.raw_edges()
        raw_deg: dict[int, int] = {}
        for e in raw:
            for x in e:
                raw_deg[x] = raw_deg.get(x, 0) + 1
        assert g.n == 60
        assert len(g.edges) == len(raw)
        assert sorted(g.degrees.tolist()) == sorted(raw_deg.values())

    def test_clustering_matches_brute_force(self):
        g = load_edge_list(FIXTURE)
        stats = compute_stats(g)
        assert stats.avg_clustering == pytest.approx(brute_force_clustering(g.n, g.edges), abs=1e-12)
        k = g.degrees
        pairs = k * (k - 1) / 2
        assert round(float((local_clustering(g) * pairs).sum())) == 3 * brute_force_triangles(g.n, g.edges)


class TestStats:
    def test_triangle(self):
        s = compute_stats(parse_edge_list(io.StringIO("0 1\n1 2\n2 0\n")))
        assert (s.n, s.edge_count, s.avg_degree, s.avg_clustering, s.connected) == (3, 3, 2.0, 1.0, True)

    def test_path(self):
        s = compute_stats(parse_edge_list(io.StringIO("0 1\n1 2\n")))
        assert s.avg_clustering == 0.0

    def test_disconnected(self):
        s = compute_stats(parse_edge_list(io.StringIO("0 1\n2 3\n")))
        assert not s.connected

    @pytest.mark.parametrize("seed", range(5))
    def test_random_graphs_against_oracles(self, seed):
        g = random_graph(50, 0.15, seed)
        s = compute_stats(g)
        assert s.avg_degree == 2 * s.edge_count / s.n
        assert s.avg_clustering == pytest.approx(brute_force_clustering(g.n, g.edges), abs=1e-12)
        assert s.connected == nx.is_connected(g.to_networkx())

    def test_json_fields(self):
        s = compute_stats(parse_edge_list(io.StringIO("0 1\n1 2\n2 0\n")))
        assert json.loads(s.to_json()) == {
            "n": 3, "edge_count": 3, "avg_degree": 2.0, "avg_clustering": 1.0, "connected": True,
        }


class TestSynthetic:
    def test_ba_deterministic(self):
        a = generate_synthetic("preferential-attachment", 200, np.random.default_rng(7), m=4)
        b = generate_synthetic("preferential-attachment", 200, np.random.default_rng(7), m=4)
        assert a.edges == b.edges

    def test_ring_lattice(self):
        g = generate_synthetic("small-world", 100, np.random.default_rng(1), k=6, p=0.0)
        assert set(g.degrees.tolist()) == {6}

    def test_ba_density(self):
        g = generate_synthetic("ba", 1000, np.random.default_rng(11), m=26)
        s = compute_stats(g)
        assert 48 <= s.avg_degree <= 52
        assert s.connected

    @pytest.mark.parametrize("seed", range(3))
    def test_small_world_connected(self, seed):
        g = generate_synthetic("ws", 60, np.random.default_rng(seed), k=4, p=0.5)
        assert compute_stats(g).connected

    @pytest.mark.parametrize(
        "model, n, params",
        [
            ("ba", 2, {"m": 1}),
            ("ba", 10, {"m": 0}),
            ("ws", 10, {"k": 4, "p": 1.5}),
            ("ws", 10, {"k": 3, "p": 0.1}),
            ("er", 10, {}),
            ("ba", 10, {"m": 2, "k": 3}),
        ],
    )
    def test_invalid(self, model, n, params):
        with pytest.raises(ValueError):
            generate_synthetic(model, n, np.random.default_rng(0), **params)

    def test_source_string(self):
        g = parse_graph_source("synthetic:ba,n=50,m=2,seed=4")
        again = parse_graph_source("synthetic:ba,n=50,m=2,seed=4")
        assert g.n == 50 and g.edges == again.edges
        assert g.source == "synthetic:ba,n=50,m=2,seed=4"

    def test_source_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="nope.txt"):
            parse_graph_source(str(tmp_path / "nope.txt"))


class TestSeeding:
    def test_one_percent_of_1033(self):
        assert seed_count(1033, 0.01) == 10

    def test_at_least_one(self):
        assert seed_count(20, 0.01) == 1

    def test_full(self, rng):
        g = random_graph(30, 0.2, 0)
        assert seed_originators(g, 1.0, rng=rng) == frozenset(range(30))

    def test_star_hub_first(self):
        g = Graph.from_edges(6, [(3, k) for k in range(6) if k != 3])
        assert seed_originators(g, 0.1, "highest-degree") == frozenset({3})

    def test_highest_degree_ties_by_id(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        assert seed_originators(g, 0.5, "highest-degree") == frozenset({0, 1})

    def test_uniform_random_deterministic_and_distinct(self):
        g = random_graph(100, 0.1, 1)
        a = seed_originators(g, 0.05, rng=np.random.default_rng(9))
        b = seed_originators(g, 0.05, rng=np.random.default_rng(9))
        assert a == b and len(a) == 5 and all(0 <= x < 100 for x in a)

    def test_count_override(self, rng):
        g = random_graph(1033, 0.01, 2)
        assert len(seed_originators(g, 0.01, rng=rng, count=11)) == 11

    @pytest.mark.parametrize("fraction", [0.0, -0.1, 1.5])
    def test_bad_fraction(self, fraction, rng):
        with pytest.raises(ValueError):
            seed_originators(random_graph(10, 0.3, 0), fraction, rng=rng)
