"""Smoke tests for the python bindings: each operation once, end to end."""

import json

import pytest

import dbcount

TWO_CLAUSE = "p cnf 3 2\n1 2 0\n2 3 0\n"
TRIANGLE = "p cnf 3 3\n1 2 0\n2 3 0\n1 3 0\n"


def test_count_known_values():
    assert dbcount.count(TWO_CLAUSE) == 5
    assert dbcount.count("p cnf 4 0\n") == 16
    assert dbcount.count("p cnf 3 1\n0\n") == 0


def test_count_raises_on_undecomposable_and_bad_input():
    with pytest.raises(dbcount.NotDecomposableError):
        dbcount.count(TRIANGLE)
    with pytest.raises(ValueError):
        dbcount.count("p dnf 2 1\n1 0\n")


def test_decompose_check_roundtrip():
    doc = dbcount.decompose(TWO_CLAUSE)
    tree = json.loads(doc)
    assert tree["root"] == 0
    assert len(tree["nodes"]) == 2
    assert dbcount.check(TWO_CLAUSE, doc)
    assert not dbcount.check(TRIANGLE, doc)

    with pytest.raises(dbcount.NotDecomposableError):
        dbcount.decompose(TRIANGLE)
    with pytest.raises(ValueError):
        dbcount.decompose(TWO_CLAUSE, root=9)


def test_generate_is_deterministic_and_self_witnessing():
    inst, witness = dbcount.generate(seed=11, edges=6, max_edge_size=3)
    again, witness_again = dbcount.generate(seed=11, edges=6, max_edge_size=3)
    assert (inst, witness) == (again, witness_again)
    assert dbcount.check(inst, witness)
    assert dbcount.count(inst) == dbcount.brute_count(inst)

    neg, neg_witness = dbcount.generate(seed=11, edges=6, max_edge_size=3, format="cspneg")
    assert dbcount.count(neg) == dbcount.count(inst)
    assert dbcount.check(neg, neg_witness)


def test_classify_reports_the_hierarchy():
    report = dbcount.classify(TWO_CLAUSE)
    assert report["gamma"] and report["join_path"] and report["alpha"]
    assert report["edges"] == 2 and report["vertices"] == 3

    cyclic = dbcount.classify(TRIANGLE)
    assert not cyclic["alpha"] and not cyclic["gamma"]
    assert not cyclic["disjoint_branches"]


def test_big_counts_stay_exact():
    # 80 unconstrained variables: the count is 2**80, past any uint64.
    assert dbcount.count("p cnf 80 0\n") == 2**80
