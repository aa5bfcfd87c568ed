import json

import numpy as np
import pytest

from htsim import build_geometry


@pytest.fixture(scope="module")
def geoms():
    return {(L, c): build_geometry(L, c)
            for L, c in [(3, 1), (6, 1), (6, 3), (9, 3)]}


def test_build_rejects_bad_sizes():
    with pytest.raises(ValueError):
        build_geometry(4, 1)
    with pytest.raises(ValueError):
        build_geometry(2, 1)
    with pytest.raises(ValueError):
        build_geometry(6, 2)


def test_index_space_counts(geoms):
    for (L, c), g in geoms.items():
        assert g.n_edges == c * L * L
        assert g.n_plaquettes == c * L * L // 3
        assert g.n_vertices == c * 2 * L * L // 3


def test_l3_spec_counts():
    g = build_geometry(3, 1)
    assert (g.n_edges, g.n_plaquettes, g.n_vertices) == (9, 3, 6)


def test_l48_three_color_edge_count():
    g = build_geometry(48, 3)
    assert g.n_edges == 3 * 2304


def test_edge_covers(geoms):
    for (L, c), g in geoms.items():
        cnt = np.zeros(g.n_edges, int)
        for v in range(g.n_vertices):
            for e in g.star[v]:
                assert g.edge_color[e] == g.vertex_color[v]
                cnt[e] += 1
        assert np.all(cnt == 2)
        cnt[:] = 0
        for p in range(g.n_plaquettes):
            for e in g.boundary[p]:
                assert g.edge_color[e] == g.plaq_color[p]
                cnt[e] += 1
        assert np.all(cnt == 2)


def test_global_star_constraint(geoms):
    for (L, c), g in geoms.items():
        for color in range(c):
            par = np.zeros(g.n_edges, int)
            for v in g.per_color_verts[color]:
                par[g.star[v]] ^= 1
            assert not par.any()


def test_table_cardinalities(geoms):
    g = geoms[(6, 3)]
    for v in range(g.n_vertices):
        assert len(set(int(e) for e in g.star[v])) == 3
    for p in range(g.n_plaquettes):
        assert len(set(int(e) for e in g.boundary[p])) == 6
        assert len(set(int(e) for e in g.interior[p])) == 6
    for e in range(g.n_edges):
        assert len(set(int(x) for x in g.leaf_z_heralds[e])) == 4
    for v in range(g.n_vertices):
        if g.vertex_sublattice[v] == 1:
            assert len(set(int(x) for x in g.loop_z_heralds[v])) == 6


def test_cz_pairs_cover_interior_twice(geoms):
    g = geoms[(6, 3)]
    for p in range(g.n_plaquettes):
        count = {}
        for a, b in g.cz_pairs[p]:
            count[int(a)] = count.get(int(a), 0) + 1
            count[int(b)] = count.get(int(b), 0) + 1
        assert set(count) == set(int(e) for e in g.interior[p])
        assert all(v == 2 for v in count.values())


def test_xloop_outer_is_boundary_minus_star(geoms):
    for g in geoms.values():
        n_sub1 = 0
        for v in range(g.n_vertices):
            if g.vertex_sublattice[v] == 1:
                n_sub1 += 1
                pnw = int(g.xloop_pnw[v])
                assert set(int(e) for e in g.xloop_outer[v]) == \
                    set(int(e) for e in g.boundary[pnw]) - set(int(e) for e in g.star[v])
                assert int(g.xloop_up[v]) in set(int(e) for e in g.boundary[pnw])
            else:
                assert g.xloop_pnw[v] == -1
        assert n_sub1 == g.n_vertices // 2


def _bfs_dist(g, start, kind):
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            if kind == "vertex":
                nbrs = []
                for e in g.star[a]:
                    u = int(g.edge2vert[e, 0])
                    nbrs.append(u if u != a else int(g.edge2vert[e, 1]))
            else:
                nbrs = []
                for e in g.boundary[a]:
                    q = int(g.edge2plaq[e, 0])
                    nbrs.append(q if q != a else int(g.edge2plaq[e, 1]))
            for b in nbrs:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    nxt.append(b)
        frontier = nxt
    return dist


@pytest.mark.parametrize("L,colors", [(3, 1), (6, 1), (9, 3), (12, 1)])
def test_graph_distance_matches_bfs(L, colors):
    g = build_geometry(L, colors)
    for color in range(colors):
        for kind, ids in (("vertex", g.per_color_verts[color]),
                          ("plaquette", g.per_color_plaqs[color])):
            a = int(ids[0])
            ref = _bfs_dist(g, a, kind)
            for b in ids:
                assert g.graph_distance(kind, a, int(b)) == ref[int(b)]
            b = int(ids[len(ids) // 2])
            ref_b = _bfs_dist(g, b, kind)
            for x in ids:
                assert g.graph_distance(kind, b, int(x)) == ref_b[int(x)]


def test_graph_distance_properties(geoms):
    g = geoms[(6, 3)]
    verts = g.per_color_verts[1]
    a, b = int(verts[0]), int(verts[5])
    assert g.graph_distance("vertex", a, a) == 0
    assert g.graph_distance("vertex", a, b) == g.graph_distance("vertex", b, a)
    with pytest.raises(ValueError):
        g.graph_distance("vertex", int(g.per_color_verts[0][0]),
                         int(g.per_color_verts[1][0]))


def test_adjacent_vertex_distance_one(geoms):
    g = geoms[(6, 1)]
    e = 0
    a, b = int(g.edge2vert[e, 0]), int(g.edge2vert[e, 1])
    assert g.graph_distance("vertex", a, b) == 1


def test_logical_anticommutation_parities(geoms):
    for (L, c), g in geoms.items():
        for ci in range(c):
            zh, zv = set(g.zlog_h[ci]), set(g.zlog_v[ci])
            xh, xv = set(g.xlog_h[ci]), set(g.xlog_v[ci])
            assert len(zh & xv) % 2 == 1
            assert len(zv & xh) % 2 == 1
            assert len(zh & xh) % 2 == 0
            assert len(zv & xv) % 2 == 0


def test_destab_paths_anticommute_only_with_partner(geoms):
    g = geoms[(6, 3)]
    for ci, pstar in enumerate(g.excluded_plaq):
        for p in g.per_color_plaqs[ci]:
            p = int(p)
            if p == pstar:
                continue
            path = set(g.destab_path[p])
            for q in range(g.n_plaquettes):
                par = len(path & set(int(x) for x in g.boundary[q])) % 2
                assert par == (1 if q in (p, pstar) else 0)


def test_vertex_path_endpoints(geoms):
    g = geoms[(6, 1)]
    verts = g.per_color_verts[0]
    a, b = int(verts[0]), int(verts[7])
    path = g.vertex_path(a, b)
    assert len(path) == g.graph_distance("vertex", a, b)
    par = np.zeros(g.n_vertices, int)
    for e in path:
        par[g.edge2vert[e]] ^= 1
    ends = np.nonzero(par)[0]
    assert set(ends.tolist()) == {a, b}


def test_geometry_dump_roundtrip(geoms):
    g = geoms[(3, 1)]
    data = json.loads(g.to_json())
    assert data["L"] == 3 and data["colors"] == 1
    assert data["n_edges"] == 9
    assert np.array_equal(np.array(data["star"]), g.star)


def test_geometry_dump_matches_golden(geoms):
    """Move tables are frozen: any change to the orientation conventions
    shows up against the golden dump."""
    import pathlib
    golden = json.loads(
        (pathlib.Path(__file__).parent / "golden_geometry_L3.json").read_text())
    data = json.loads(geoms[(3, 1)].to_json())
    for key in ("star", "boundary", "xloop_up", "xloop_left", "xloop_third",
                "xloop_outer", "zloop_ext", "zlog_h", "zlog_v", "xlog_h",
                "xlog_v", "destab_path", "edge2vert", "edge2plaq"):
        assert data[key] == golden[key], key


def test_loop_dressing_residuals_are_star_sums():
    g = build_geometry(6, 3)
    for c in range(3):
        sym = g.loop_logical(c)
        # every residual entry reproduces its edge set from vertex stars
        for q, (vs, lvs, sb) in sym.resid.items():
            assert sb == 0  # base loops carry no intrinsic sign
            edges = sym.resid_edges(g, q)
            acc = set()
            for v in vs:
                acc ^= set(int(e) for e in g.star[v])
            for cc in lvs:
                acc ^= set(g.zlog_v[cc])
            assert acc == edges
