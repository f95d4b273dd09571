import math

import pytest

import oracles
from colorbij.enumeration import (
    MARKINGS,
    ORACLE_FAMILIES,
    colorable,
    dyck_paths,
    enumerated_identities,
    enumerated_size,
    expected_size,
    gen,
    oracle_verify,
    plane_trees,
    polygon_partitions,
    weight,
)
from colorbij.model import ColorSequence, serialize

UNIFORM = ColorSequence()
G222 = ColorSequence((2, 2, 2), False)


def test_dyck_example():
    steps = [p.steps for p in dyck_paths(3, 2)]
    assert set(steps) == {"UUDDUD", "UDUUDD", "UUDUDD"}
    # lexicographic with U < D
    assert steps == sorted(steps, key=lambda w: w.replace("U", "0").replace("D", "1"))


def test_tree_example():
    assert [serialize(t) for t in plane_trees(2, 1)] == ["(ooo)"]


def test_marked_composition_count():
    objs = list(gen("comp", 9, 4, marking="cells"))
    assert len(objs) == 4704 == 56 * math.comb(9, 3)
    assert len({serialize(o) for o in objs}) == 4704


@pytest.mark.parametrize("n", range(1, 7))
def test_base_streams_match_brute_force(n):
    for k in range(1, n + 1):
        assert sorted(p.steps for p in gen("dyck", n, k)) == sorted(
            w for w in oracles.dyck_words(n) if oracles.peaks(w) == k)
        assert sorted(c.parts for c in gen("comp", n, k)) == sorted(oracles.compositions(n, k))
        assert sorted(p.diagonals for p in polygon_partitions(n, k)) == sorted(
            tuple(sorted(d)) for d in oracles.dissections(n, k))


@pytest.mark.parametrize("family", sorted(MARKINGS))
def test_streams_have_no_duplicates(family):
    for marking in MARKINGS[family]:
        for n in range(1, 5):
            for k in range(1, n + 1):
                texts = [serialize(o) for o in gen(family, n, k, UNIFORM, marking)]
                assert len(texts) == len(set(texts))
                assert len(texts) == expected_size(family, n, k, UNIFORM, marking)


def test_colored_stream_size_is_the_weighted_count():
    g = ColorSequence((2, 1, 3), False)
    for family in ("comp", "dyck", "tree", "polygon"):
        for k in range(1, 5):
            colored = list(gen(family, 4, k, g, "none", colored=True))
            plain = list(gen(family, 4, k, g))
            assert len(colored) == sum(weight(o, g) for o in plain)
            assert len(colored) == expected_size(family, 4, k, g)


def test_colorable_limits():
    assert colorable(6, G222)
    assert not colorable(7, G222)
    assert not colorable(3, ColorSequence((4,), False))
    with pytest.raises(ValueError):
        list(gen("comp", 7, 2, G222, colored=True))


def test_bad_arguments():
    with pytest.raises(ValueError):
        list(gen("comp", 3, 4))
    with pytest.raises(ValueError):
        list(gen("comp", 3, 2, marking="peak"))
    with pytest.raises(ValueError):
        list(gen("cake", 3, 2))


def test_enumerated_size_matches_listing():
    for family, markings in MARKINGS.items():
        for marking in markings:
            assert enumerated_size(family, 4, 2, UNIFORM, marking) == len(
                list(gen(family, 4, 2, UNIFORM, marking)))


def test_enumerated_identities_small():
    g = ColorSequence((2, 1, 3), False)
    r = enumerated_identities(5, 3, g)
    assert r.passed
    assert r.sizes["comp:cells"] == math.comb(5, 2) * 42
    assert r.line().startswith("PASS n=5 k=3")
    assert r.to_dict()["passed"] is True


def test_oracle_examples():
    r = oracle_verify("phi_dc", 5, 3)
    assert r.passed and r.domain == 60 == 3 * oracles.count_dyck(5, 3, lambda j: 1)
    r = oracle_verify("phi_bt", 1, 1)
    assert r.passed and r.domain == 2
    assert r.line().startswith("PASS domain=2 image=2 codomain=2")


@pytest.mark.parametrize("bijection", sorted(ORACLE_FAMILIES))
def test_oracle_small_sweep(bijection):
    for n in range(1, 5):
        for k in range(1, n + 1):
            r = oracle_verify(bijection, n, k)
            assert r.passed, r.line()
            assert r.domain == r.image == r.codomain == r.expected


@pytest.mark.parametrize("bijection", sorted(ORACLE_FAMILIES))
def test_oracle_colored_small(bijection):
    for k in range(1, 5):
        r = oracle_verify(bijection, 4, k, G222)
        assert r.colored and r.passed, r.line()


def test_oracle_gamma_with_forbidden_sizes():
    g = ColorSequence((1, 0, 2), False)
    for bijection in ORACLE_FAMILIES:
        for k in range(1, 5):
            r = oracle_verify(bijection, 5, k, g)
            assert r.passed, r.line()


def test_oracle_reports_a_broken_map(monkeypatch):
    from colorbij import bijections as bij

    real = bij.FORWARD["phi_dc"]

    def broken(x):
        out = real(x)
        if x.marked_peak == 2:
            return real(type(x)(x.path, 1))
        return out

    monkeypatch.setitem(bij.FORWARD, "phi_dc", broken)
    r = oracle_verify("phi_dc", 3, 2)
    assert not r.passed
    assert not r.checks["injective"]
    assert "FAIL" in r.line() and "first_failure" in r.line()
