from __future__ import annotations

import random

import pytest

from strongpfd import (
    ColoringError,
    Graph,
    NotThinError,
    canonical_form,
    cartesian_edge_set,
    complete_graph,
    cycle_graph,
    is_isomorphic,
    path_graph,
    pfd_fast,
    recognize,
    strong_product,
    twisted_instance,
    verify_product,
)
from strongpfd.oracle import random_product_instance


def canon_multiset(factors):
    return sorted(canonical_form(f) for f in factors)


def test_recognize_product(p3xp3):
    graph, _ = p3xp3
    report = recognize(graph)
    assert report.in_upsilon
    assert report.reconstruction_ok
    assert report.max_local_factors == 2
    assert len(report.extracted_factors) == 2
    assert all(is_isomorphic(f, path_graph(3)) for f in report.extracted_factors)


def test_recognize_prime_cycle():
    report = recognize(cycle_graph(7))
    assert report.in_upsilon
    assert report.max_local_factors == 1
    assert len(report.extracted_factors) == 1
    assert is_isomorphic(report.extracted_factors[0], cycle_graph(7))


def test_recognize_twisted_fixture():
    graph = twisted_instance()
    report = recognize(graph)
    assert not report.in_upsilon
    assert report.max_local_factors == 2
    assert not report.reconstruction_ok
    assert report.diagnostics


def test_recognize_rejects_bad_inputs():
    with pytest.raises(NotThinError):
        recognize(complete_graph(4))
    with pytest.raises(Exception):
        recognize(Graph(4, [(0, 1), (2, 3)]))


def test_recognize_report_dict_shape(p3xp3):
    graph, _ = p3xp3
    data = recognize(graph).to_dict()
    assert data["in_upsilon"] is True
    assert data["n_factors"] == 2
    assert data["skeleton"]["n_colors"] == 2
    assert {"S1-local", "completion", "N2-sweep"} == set(data["skeleton"]["stages"])


def test_verify_product_ground_truth(p3xp3):
    graph, coords = p3xp3
    truth = {}
    from strongpfd import cartesian_index

    for u, v in cartesian_edge_set(graph, coords):
        truth[(u, v)] = cartesian_index(graph, coords, u, v)
    factors = [path_graph(3), path_graph(3)]
    assert verify_product(factors, truth, graph)

    # an extra non-product edge breaks edge-exactness
    broken = Graph(9, list(graph.edges()) + [(0, 8)])
    assert not verify_product(factors, truth, broken)

    # splitting one class breaks the fiber structure
    split = dict(truth)
    first = next(e for e, c in truth.items() if c == 0)
    split[first] = 2
    assert not verify_product(factors, split, graph)


def test_pfd_fast_examples(p3xp3):
    graph, _ = p3xp3
    result = pfd_fast(graph)
    assert canon_multiset(result.factors) == canon_multiset([path_graph(3)] * 2)

    graph2, _ = strong_product([path_graph(4), cycle_graph(5)])
    result2 = pfd_fast(graph2)
    assert canon_multiset(result2.factors) == canon_multiset(
        [path_graph(4), cycle_graph(5)]
    )

    prime = cycle_graph(9)
    result3 = pfd_fast(prime)
    assert result3.prime_count == 1
    assert is_isomorphic(result3.factors[0], prime)


def test_pfd_fast_agrees_with_recognize():
    rng = random.Random(55)
    for trial in range(8):
        inst = random_product_instance(
            [rng.randint(3, 5), rng.randint(3, 5)], seed=13000 + trial
        )
        report = recognize(inst.graph)
        if not report.in_upsilon:
            continue
        fast = pfd_fast(inst.graph)
        assert canon_multiset(fast.factors) == canon_multiset(report.extracted_factors)


def test_pfd_fast_unreliable_outside_its_precondition():
    # the fast path trusts the caller; on the twisted fixture it either
    # aborts or hands back factors that do not rebuild the graph
    graph = twisted_instance()
    try:
        result = pfd_fast(graph)
    except ColoringError:
        return
    rebuilt, _ = strong_product(list(result.factors))
    assert not is_isomorphic(rebuilt, graph)


def test_recognize_permutation_invariance(p3xp3):
    graph, _ = p3xp3
    rng = random.Random(8)
    perm = list(range(graph.vertex_count))
    rng.shuffle(perm)
    relabeled = graph.relabeled(perm)
    a = recognize(graph)
    b = recognize(relabeled)
    assert a.in_upsilon == b.in_upsilon
    assert a.max_local_factors == b.max_local_factors
    assert canon_multiset(a.extracted_factors) == canon_multiset(b.extracted_factors)


def test_recognize_k1():
    report = recognize(Graph(1))
    assert report.in_upsilon
    assert report.max_local_factors == 0
    assert report.extracted_factors == ()


def test_recognize_with_tight_size_cap_reports_failure(p3xp3):
    graph, _ = p3xp3
    report = recognize(graph, size_cap=4)
    assert not report.in_upsilon
    assert not report.reconstruction_ok
    assert any("size cap" in d or "cap" in d for d in report.diagnostics)


def test_recognize_survives_coloring_abort(p3xp3):
    # pendant on a product corner: backbone neighborhoods disagree on the
    # local factor count, the anchored coloring aborts, and the report
    # carries the diagnostic with the counts still recorded
    base, _ = p3xp3
    graph = Graph(10, list(base.edges()) + [(0, 9)])
    report = recognize(graph)
    assert not report.in_upsilon
    assert report.coloring is None
    assert report.max_local_factors == 2
    assert any("local factors" in d for d in report.diagnostics)
