import dataclasses
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from homdens.certifier import (
    EXTRA,
    GOOD,
    RULE_CATALOG,
    UNKNOWN,
    Certificate,
    Certifier,
    certify,
    classify_catalog,
    find_multitree,
    find_pendant_cycles,
    find_theta,
    replay_certificate,
)
from homdens.graphs import (
    Graph,
    TooLarge,
    canonical_form,
    canonical_graph,
    cocktail_party,
    complete,
    complete_bipartite,
    complete_minus_complete,
    cycle,
    make_graph,
    path,
    theta,
)
from homdens.homdensity import norm_power, t_dp, t_weighted
from homdens.kernel import random_kernel

P5_COMPLEMENT = path(5).complement()


@pytest.fixture(scope="module")
def catalog6():
    return classify_catalog(6)


def test_k5_via_vertex_transitive_upgrade():
    r = certify(complete(5))
    assert r.status == EXTRA
    assert r.certificate.rule == "RULE-VT-UPGRADE"
    assert [p.rule for p in r.certificate.premises] == ["BASE-COMPLETE"]


def test_k5_minus_k3_is_extra_good():
    r = certify(complete_minus_complete(5, 3))
    assert r.status == EXTRA
    assert replay_certificate(r.certificate)
    # K5-K3 is the theta graph P(1,2,2,2); removing a dominating vertex leaves a star
    assert find_theta(complete_minus_complete(5, 3)) is not None


def test_small_examples():
    assert certify(cycle(5)).status == EXTRA
    assert certify(complete(3)).status == EXTRA
    assert certify(path(2)).status == EXTRA
    assert certify(cocktail_party(3)).status in (GOOD, EXTRA)
    with pytest.raises(TooLarge):
        certify(path(10))


def test_open_case_is_unknown():
    r = certify(P5_COMPLEMENT)
    assert r.status == UNKNOWN and r.certificate is None
    assert certify(P5_COMPLEMENT, max_depth=64).status == UNKNOWN


def test_catalog_n3():
    rows = classify_catalog(3)
    assert [(r.graph.n, r.graph.e) for r in rows] == [(1, 0), (2, 1), (3, 2), (3, 3)]
    assert rows[-1].status == EXTRA
    assert rows[-2].status == EXTRA


def test_catalog_no_unknown_up_to_5():
    rows = classify_catalog(5)
    assert len(rows) == 31
    assert all(r.status in (GOOD, EXTRA) for r in rows)


def test_catalog_sorted_and_complete(catalog6):
    labels = [r.label for r in catalog6]
    assert labels == sorted(labels) and len(set(labels)) == 143


def test_catalog6_open_case(catalog6):
    row = [r for r in catalog6 if r.label == canonical_form(P5_COMPLEMENT)]
    assert len(row) == 1 and row[0].status == UNKNOWN


def test_soundness_over_catalog6(catalog6):
    for r in catalog6:
        if r.certificate is not None:
            rep = replay_certificate(r.certificate)
            assert rep, (r.graph, rep)
            assert r.certificate.graph == r.graph


def test_certificate_rules_are_catalogued(catalog6):
    used = set()
    for r in catalog6:
        if r.certificate is not None:
            used |= r.certificate.rules_used()
    assert used <= set(RULE_CATALOG)


@given(graphs(max_n=6), st.randoms())
def test_idempotent_under_relabeling(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    a = certify(G)
    b = certify(G.relabel(perm))
    assert a.status == b.status == certify(canonical_graph(G)).status
    if a.certificate is not None:
        assert b.certificate.graph == G.relabel(perm)
        assert replay_certificate(b.certificate)


@settings(max_examples=25)
@given(graphs(max_n=6, connected=True))
def test_depth_monotone(G):
    rank = {UNKNOWN: 0, GOOD: 1, EXTRA: 2}
    prev = 0
    for d in (1, 2, 4, 8, 32):
        s = rank[certify(G, max_depth=d, certifier=Certifier()).status]
        assert s >= prev
        prev = s


def test_json_round_trip(catalog6):
    for r in catalog6:
        if r.certificate is None:
            continue
        text = r.certificate.to_json()
        again = Certificate.from_json(text)
        assert again.to_json() == text
        assert again == r.certificate


def _tamper(c, **kw):
    return dataclasses.replace(c, **kw)


def test_replay_rejects_fake_leaf():
    G = make_graph(4, [(0, 1), (1, 2), (2, 3)])
    good = certify(G).certificate
    assert replay_certificate(good)
    fake = Certificate(
        Graph(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2))), EXTRA, "RULE-LEAF", {"leaf": 1},
        (certify(complete(3)).certificate,),
    )
    rep = replay_certificate(fake)
    assert not rep and rep.reason == "not a leaf"


def test_replay_rejects_tampered_premise():
    c = certify(complete(5)).certificate
    bad_premise = _tamper(c.premises[0], graph=complete(4))
    rep = replay_certificate(_tamper(c, premises=(bad_premise,)))
    assert not rep
    c = certify(Graph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4)))).certificate
    assert replay_certificate(c)


def test_replay_rejects_wrong_status_and_rule():
    c = certify(cycle(4)).certificate
    assert c.rule == "BASE-TREE/UNICYCLIC"
    rep = replay_certificate(_tamper(c, status=GOOD))
    assert not rep and "concludes" in rep.reason
    assert not replay_certificate(_tamper(c, rule="BASE-MADE-UP"))
    assert not replay_certificate(Certificate(Graph(2, ((0, 1),)), GOOD, "BASE-COMPLETE", {}, (c,)))


def test_replay_checks_domination():
    G = Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2)))
    c = Certificate(G, GOOD, "RULE-DOMINATE-1", {"vertex": 1}, (certify(G.remove_vertices([1])).certificate,))
    rep = replay_certificate(c)
    assert not rep and "dominate" in rep.reason


def test_replay_location():
    c = certify(complete(5)).certificate
    inner = _tamper(c.premises[0], rule_data={"order": 5}, graph=cycle(5))
    rep = replay_certificate(_tamper(c, premises=(inner,)))
    assert not rep


def test_pendant_cycle_rule():
    # K4 with a pentagon hanging off vertex 0
    edges = list(complete(4).edges) + [(0, 4), (4, 5), (5, 6), (6, 7), (7, 0)]
    G = make_graph(8, edges)
    assert find_pendant_cycles(G)
    r = certify(G)
    assert r.status == EXTRA and "RULE-PENDANT-CYCLE" in r.certificate.rules_used()
    assert replay_certificate(r.certificate)


def test_multitree_rule():
    # K4 with K_{2,3} glued along one of its degree-3 vertices
    edges = list(complete(4).edges) + [(0, 5), (0, 6), (0, 7), (4, 5), (4, 6), (4, 7)]
    G = make_graph(8, edges)
    mt = find_multitree(G)
    assert mt is not None and mt["copies"] == 3
    r = certify(G)
    c = r.certificate
    assert r.status == EXTRA and c.rule == "RULE-MULTITREE-GLUE"
    assert c.rule_data["provenance"] == "proof-sketch"
    assert replay_certificate(c)
    bad = _tamper(c, rule_data={**c.rule_data, "embedding": list(reversed(c.rule_data["embedding"]))})
    assert not replay_certificate(bad)


def test_sketch_rules_can_be_excluded():
    G = make_graph(8, list(complete(4).edges) + [(0, 5), (0, 6), (0, 7), (4, 5), (4, 6), (4, 7)])
    r = certify(G, certifier=Certifier(allow_sketch=False))
    used = r.certificate.rules_used() if r.certificate else set()
    assert "RULE-MULTITREE-GLUE" not in used


def test_provenance_flags(catalog6):
    for r in catalog6:
        stack = [r.certificate] if r.certificate else []
        while stack:
            c = stack.pop()
            stack.extend(c.premises)
            if c.rule == "BASE-BIPARTITE-SMALL":
                assert c.rule_data["provenance"] == "literature"
            if c.rule.startswith("RULE-DOMINATE") and c.status == EXTRA:
                assert c.rule_data["provenance"] == "proof-sketch"


def test_theta_family_certified():
    for ks in [(1, 2, 2), (2, 3, 4), (1, 3, 3, 3), (2, 2, 2, 2)]:
        r = certify(theta(*ks))
        assert r.status == EXTRA
        assert replay_certificate(r.certificate)


def test_certified_graphs_numerically(catalog6):
    # a light version of the conjecture/extra-good suites
    rng = np.random.default_rng(2024)
    kernels = [random_kernel("DNN", int(rng.integers(1, 6)), seed=s, weights="random") for s in range(20)]
    for r in catalog6:
        if r.status == UNKNOWN:
            continue
        for g in kernels:
            assert t_dp(r.graph, g) >= norm_power(r.graph, g) * (1 - 1e-9)
            if r.status == EXTRA:
                fs = [rng.uniform(0, 1, g.k) for _ in range(r.graph.n)]
                lhs, rhs = t_weighted(r.graph, g, fs)
                assert lhs >= rhs * (1 - 1e-9)


def test_components_rule():
    G = Graph(5, ((0, 1), (1, 2), (2, 0), (3, 4)))
    r = certify(G)
    assert r.status == GOOD
    assert r.certificate.rule == "RULE-COMPONENTS"
    assert replay_certificate(r.certificate)
    assert json.loads(r.certificate.to_json())["rule"] == "RULE-COMPONENTS"


def test_complete_bipartite_base():
    r = certify(complete_bipartite(3, 3))
    assert r.status in (GOOD, EXTRA)
    assert replay_certificate(r.certificate)
