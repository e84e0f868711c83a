import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cliquewitness.models import GraphInstance, clique_indicator, sample_er, sample_planted
from cliquewitness.params import WitnessParams, derive_alphas
from cliquewitness.subsets import SubsetIndexer
from cliquewitness.witness import (
    build_matrix,
    check_sos_feasibility,
    dump_matrix,
    extract_blocks,
    load_matrix,
    MomentMatrix,
)

PARAMS = derive_alphas(0.05, 0.5)


def brute_force_matrix(graph, params, kind):
    # independent entrywise construction straight from the definitions, used
    # as the oracle for every vectorized builder below
    ix = SubsetIndexer(graph.n)
    subsets = ix.all_subsets()
    dim = len(subsets)
    out = np.zeros((dim, dim))
    adj = graph.adjacency
    for r, a in enumerate(subsets):
        for c, b in enumerate(subsets):
            union = a | b
            coef = params.alpha_of_size(len(union))
            if kind == "M":
                ind = clique_indicator(graph, union)
                out[r, c] = coef * ind
            else:
                val = coef
                for i in a - b:
                    for j in b - a:
                        if i != j:
                            val *= float(adj[i - 1, j - 1])
                out[r, c] = val
    if kind == "H":
        by = np.concatenate(
            [np.full(graph.n, params.alpha1), np.full(ix.num_pairs, params.alpha2)]
        )
        return out[1:, 1:] - np.outer(by, by)
    return out


def test_entries_match_brute_force_m_and_n():
    g = sample_er(6, 0.5, seed=3)
    for kind in ("M", "N"):
        mat = build_matrix(g, PARAMS, kind)
        assert np.max(np.abs(mat.values - brute_force_matrix(g, PARAMS, kind))) == 0.0


def test_h_matches_brute_force():
    g = sample_er(6, 0.5, seed=11)
    mat = build_matrix(g, PARAMS, "H")
    assert np.max(np.abs(mat.values - brute_force_matrix(g, PARAMS, "H"))) <= 1e-15


def test_m_equals_dnd():
    # the clique-indicator matrix is the single-set indicator conjugation of
    # the centered-free one: M = D N D with D = diag(indicator of each set)
    g = sample_er(7, 0.5, seed=5)
    m = build_matrix(g, PARAMS, "M").values
    nmat = build_matrix(g, PARAMS, "N").values
    ix = SubsetIndexer(7)
    d = np.array([clique_indicator(g, s) for s in ix.all_subsets()], dtype=float)
    assert np.max(np.abs(m - d[:, None] * nmat * d[None, :])) == 0.0


def test_complete_graph_values():
    g = sample_er(6, 1.0, seed=0)
    pr = derive_alphas(0.05, 1.0)
    m = build_matrix(g, pr, "M")
    nmat = build_matrix(g, pr, "N")
    assert np.array_equal(m.values, nmat.values)
    assert m.values[0, 0] == 1.0
    ix = m.indexer
    sizes = np.array([len(s) for s in ix.all_subsets()])
    unions = np.maximum(sizes[:, None], sizes[None, :])
    # on the complete graph every entry is alpha of the union size; check the
    # generic positions where the two sets are disjoint or nested
    assert m.values[1, 2] == pr.alpha2
    assert m.values[ix.pair_index(1, 2), ix.pair_index(3, 4)] == pr.alpha4
    assert m.values[ix.pair_index(1, 2), ix.pair_index(1, 3)] == pr.alpha3
    assert m.values[ix.pair_index(1, 2), ix.pair_index(1, 2)] == pr.alpha2
    assert np.all(m.values[unions == 0] == 1.0)


def test_singleton_block_of_n_keeps_edge_factor():
    # distinct singletons in the centered-free matrix carry the edge
    # indicator, so M and N agree on that block
    g = GraphInstance.from_edges(5, [(1, 2)], p=0.5)
    nmat = build_matrix(g, PARAMS, "N").values
    m = build_matrix(g, PARAMS, "M").values
    assert nmat[1, 2] == PARAMS.alpha2
    assert nmat[1, 3] == 0.0
    assert np.array_equal(nmat[1:6, 1:6], m[1:6, 1:6])


def test_objective_counts_singletons():
    g = sample_er(9, 1.0, seed=2)
    pr = derive_alphas(0.05, 1.0)
    # complete graph: every singleton survives, so the objective is n alpha1
    assert abs(build_matrix(g, pr, "M").objective() - 9 * pr.alpha1) <= 1e-15
    assert abs(build_matrix(g, pr, "N").objective() - 9 * pr.alpha1) <= 1e-15


def test_extract_blocks_shapes():
    g = sample_er(6, 0.5, seed=1)
    h = build_matrix(g, PARAMS, "H")
    h11, h12, h22 = extract_blocks(h)
    assert h11.shape == (6, 6)
    assert h12.shape == (6, 15)
    assert h22.shape == (15, 15)
    full = np.block([[h11, h12], [h12.T, h22]])
    assert np.array_equal(full, h.values)


def test_kind_and_probability_validation():
    g = sample_er(5, 0.5, seed=0)
    with pytest.raises(ValueError):
        build_matrix(g, PARAMS, "X")
    mismatched = derive_alphas(0.05, 0.4)
    with pytest.raises(ValueError):
        build_matrix(g, mismatched, "M")


def test_feasibility_on_planted_instance():
    g = sample_planted(12, 0.5, 5, seed=8)
    kappa = 0.25 * 12 ** (-2 / 3) / math.log(12)
    pr = derive_alphas(kappa, 0.5)
    rep = check_sos_feasibility(build_matrix(g, pr, "M"), g)
    assert rep.empty_entry_is_one
    assert rep.entries_in_range
    assert rep.vanishes_off_cliques
    assert rep.union_symmetric
    assert rep.psd
    assert rep.feasible
    assert abs(rep.objective - 12 * kappa) <= 1e-15


def test_feasibility_flags_out_of_range():
    g = sample_er(6, 0.5, seed=4)
    loud = WitnessParams(kappa=0.9, p=0.5, alpha=(0.9, 0.95, 0.99, 1.0))
    rep = check_sos_feasibility(build_matrix(g, loud, "M"), g)
    assert rep.entries_in_range  # 1.0 still inside the closed interval
    vals = build_matrix(g, loud, "M").values * 1.5
    vals[0, 0] = 1.0
    hot = MomentMatrix(indexer=SubsetIndexer(6), kind="M", values=vals, params=loud)
    rep2 = check_sos_feasibility(hot, g)
    assert not rep2.entries_in_range
    assert not rep2.feasible


def test_feasibility_flags_broken_symmetry_and_support():
    g = sample_planted(8, 0.5, 4, seed=1)
    pr = derive_alphas(0.01, 0.5)
    mat = build_matrix(g, pr, "M")
    vals = mat.values.copy()
    ix = mat.indexer
    i, j = sorted(g.planted)[:2]
    # every position whose union is {i, j} must share one value; bump one
    vals[ix.pair_index(i, j), 0] = pr.alpha2 * 1.01
    vals[0, ix.pair_index(i, j)] = pr.alpha2 * 1.01
    u, w = next(
        (u, w)
        for u in range(1, 9)
        for w in range(u + 1, 9)
        if not g.adjacency[u - 1, w - 1]
    )
    # a non-edge pair is not a clique; giving it weight violates the support
    vals[ix.pair_index(u, w), ix.pair_index(u, w)] = pr.alpha2
    broken = MomentMatrix(indexer=ix, kind="M", values=vals, params=pr)
    rep = check_sos_feasibility(broken, g)
    assert not rep.union_symmetric
    assert not rep.vanishes_off_cliques
    assert rep.feasible is False


def test_rejects_non_m_kind_feasibility():
    g = sample_er(5, 0.5, seed=0)
    with pytest.raises(ValueError):
        check_sos_feasibility(build_matrix(g, PARAMS, "N"), g)


def test_dump_load_round_trip(tmp_path):
    g = sample_er(6, 0.5, seed=9)
    mat = build_matrix(g, PARAMS, "M")
    text_path = tmp_path / "m.txt"
    dump_matrix(mat, str(text_path))
    back = load_matrix(str(text_path), PARAMS)
    assert back.kind == "M"
    assert np.max(np.abs(back.values - mat.values)) == 0.0
    bin_path = tmp_path / "m.npz"
    dump_matrix(mat, str(bin_path), binary=True)
    back2 = load_matrix(str(bin_path), PARAMS, binary=True)
    assert np.array_equal(back2.values, mat.values)


@settings(max_examples=20, deadline=None)
@given(
    n=st.integers(min_value=4, max_value=8),
    seed=st.integers(min_value=0, max_value=10_000),
)
def test_support_and_symmetry_properties(n, seed):
    # on any draw: zero outside cliques, symmetric, empty-set entry one, and
    # all entries within [0, 1] for in-range coefficients
    g = sample_er(n, 0.5, seed=seed)
    pr = derive_alphas(0.05, 0.5)
    m = build_matrix(g, pr, "M").values
    ix = SubsetIndexer(n)
    subsets = ix.all_subsets()
    for r, c in itertools.product(range(len(subsets)), repeat=2):
        if clique_indicator(g, subsets[r] | subsets[c]) == 0:
            assert m[r, c] == 0.0
    assert np.array_equal(m, m.T)
    assert m[0, 0] == 1.0
    assert np.all((0.0 <= m) & (m <= 1.0))
