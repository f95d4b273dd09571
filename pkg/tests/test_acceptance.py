"""Acceptance criteria 1-7. Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s``; the lines are also
collected into the terminal summary.
"""
import math
import random
import time
import xml.etree.ElementTree as ET

from colorbij import bijections as bij
from colorbij.counting import (
    bell_inputs,
    bell_partial,
    compositions_closed,
    compositions_dp,
    dyck_closed,
    dyck_dp,
    oeis_prefix,
    polygons_closed,
    polygons_dp,
)
from colorbij.enumeration import ORACLE_FAMILIES, enumerated_identities, gen, oracle_verify
from colorbij.model import ColorSequence, parse, serialize
from colorbij.render import render

# largest n swept exhaustively: 8 when only paths, compositions and words are
# involved, 7 once trees or polygons are
SWEEP_N = {"phi_dc": 8, "comp_word": 8, "phi_dp": 7, "phi_bt": 7, "polygon_tree": 7}


def _sweep(gamma, bounds, colored):
    cases, objects, failures = 0, 0, []
    for name, top in bounds.items():
        for n in range(1, top + 1):
            for k in range(1, n + 1):
                r = oracle_verify(name, n, k, gamma, colored)
                cases += 1
                objects += r.domain
                if not r.passed:
                    failures.append(r.line())
    return cases, objects, failures


def test_criterion_1_bijection_soundness(record_criterion):
    start = time.perf_counter()
    cases, objects, failures = _sweep(ColorSequence(), SWEEP_N, False)
    detail = (f"exhaustive round trips and image = codomain for {len(SWEEP_N)} bijections, "
              f"{cases} (n,k) cases, {objects} domain objects, {len(failures)} failures "
              f"({time.perf_counter() - start:.0f}s)")
    if failures:
        detail += f"; first: {failures[0]}"
    assert record_criterion(1, not failures, detail)


def test_criterion_2_cardinality_identities(record_criterion):
    gammas = [ColorSequence(), ColorSequence((2, 1, 3), False), ColorSequence((1, 0, 2), True)]
    checked, bad = 0, []
    for g in gammas:
        for n in range(1, 9):
            for k in range(1, n + 1):
                r = enumerated_identities(n, k, g)
                checked += len(r.rows)
                if not r.passed:
                    bad.append(r.line())
    detail = (f"{checked} identity checks on enumerated sizes, n <= 8, "
              f"gamma in {{{', '.join(map(str, gammas))}}}, {len(bad)} mismatches")
    if bad:
        detail += f"; first: {bad[0]}"
    assert record_criterion(2, not bad, detail)


def test_criterion_3_bell_against_dp(record_criterion):
    rng = random.Random(20241015)
    gammas = [ColorSequence()] + [
        ColorSequence(tuple(rng.randint(0, 5) for _ in range(30)), False) for _ in range(60)]
    checked, bad = 0, []
    for g in gammas:
        for n in range(1, 31):
            x = bell_inputs(n, g)
            for k in range(1, n + 1):
                # the closed forms raise on any inexact division
                pairs = ((compositions_closed(n, k, g), compositions_dp(n, k, g)),
                         (dyck_closed(n, k, g), dyck_dp(n, k, g)),
                         (polygons_closed(n, k, g), polygons_dp(n, k, g)))
                checked += 3
                if any(a != b for a, b in pairs):
                    bad.append((str(g), n, k))
                if bell_partial(n, k, x) < 0:
                    bad.append((str(g), n, k))
    detail = (f"{checked} closed-form/DP comparisons, n <= 30, all k, "
              f"{len(gammas) - 1} random gamma in 0..5 plus uniform, {len(bad)} mismatches")
    assert record_criterion(3, not bad, detail)


OEIS_TERMS = {
    "A001700": [1, 3, 10, 35, 126, 462, 1716, 6435, 24310, 92378],
    "A368178": [2, 9, 54, 375, 2848, 22981, 193742, 1688427, 15101778, 137930199],
    "A176479": [2, 9, 44, 225, 1182, 6321, 34232, 187137, 1030490, 5707449],
}


def test_criterion_4_oeis_prefixes(record_criterion):
    got = {tag: oeis_prefix(tag, 10) for tag in OEIS_TERMS}
    bad = [tag for tag in OEIS_TERMS if got[tag] != OEIS_TERMS[tag]]
    detail = f"first 10 terms of {', '.join(OEIS_TERMS)}: {3 - len(bad)}/3 exact"
    if bad:
        detail += f"; {bad[0]} gave {got[bad[0]]}"
    assert record_criterion(4, not bad, detail)


GOLDENS = [
    ("phi_dc", "dyck", "comp", "UUUUDDDUDDUUDUUDDD | peak=3", "1,3,3,2 | cells=2,4,9"),
    ("phi_dp", "dyck", "tree", "UUUDUDUUDDDDUDUDUUDD | steps=1,2,3,5,6,15", "((ooo)(*((***(**))oo)))"),
    ("phi_bt", "word", "tree", "10101001001010 | marks=3,8,9,10,11,12", "(((ooo)o)(oo)(*(oo)))"),
]


def test_criterion_5_worked_examples(record_criterion):
    bad = []
    for name, src_kind, dst_kind, src, want in GOLDENS:
        out = serialize(bij.FORWARD[name](parse(src_kind, src)))
        back = serialize(bij.INVERSE[name](parse(dst_kind, want)))
        if out != want or back != src:
            bad.append(f"{name}: {src} -> {out} -> {back}")
    detail = f"{len(GOLDENS) - len(bad)}/{len(GOLDENS)} worked examples byte-exact in both directions"
    if bad:
        detail += f"; {bad[0]}"
    assert record_criterion(5, not bad, detail)


def test_criterion_6_colors_and_parts(record_criterion):
    g = ColorSequence((2, 2, 2), False)
    start = time.perf_counter()
    cases, objects, failures = _sweep(g, {name: 6 for name in ORACLE_FAMILIES}, True)
    # explicit transport on every colored domain object up to n = 5
    transported = 0
    for name, ((fam, mark), _) in ORACLE_FAMILIES.items():
        for n in range(1, 6):
            for k in range(1, n + 1):
                for x in gen(fam, n, k, g, mark, colored=True):
                    target = bij.strip_colors(bij.FORWARD[name](x))
                    y = bij.transport_colors(x, target, name, g)
                    transported += 1
                    if bij.INVERSE[name](y) != x:
                        failures.append(f"{name}: transport of {serialize(x)} does not return")
    detail = (f"gamma={g}, n <= 6: {cases} (n,k) cases, {objects} colored objects with parts, "
              f"colors and round trips checked, {transported} explicit transports, "
              f"{len(failures)} failures ({time.perf_counter() - start:.0f}s)")
    if failures:
        detail += f"; first: {failures[0]}"
    assert record_criterion(6, not failures, detail)


RENDER_FIXTURES = [
    ("dyck", "UUDD"),
    ("dyck", "UD"),
    ("dyck", "UDUDUD"),
    ("dyck", "UUUUDDDUDDUUDUUDDD | peak=3"),
    ("dyck", "UUUDUDUUDDDDUDUDUUDD | steps=1,2,3,5,6,15"),
    ("dyck", "UUDUDD | steps=1,3 | colors=asc:2,1"),
    ("dyck", "UUUDDD | peak=1"),
    ("polygon", "n=1"),
    ("polygon", "n=2; diag=(1,3)"),
    ("polygon", "n=4; diag=(1,5),(2,5)"),
    ("polygon", "n=9; diag=(1,4),(1,8),(4,6)"),
    ("polygon", "n=5; diag=(2,6); sides=1,3"),
    ("tree", "(oo)"),
    ("tree", "((ooo)(*((***(**))oo)))"),
    ("tree", "(((ooo)o)(oo)(*(oo)))"),
    ("tree", "((*o)*)"),
    ("tree", "(o(oo)(ooo)) | colors=1,2,3"),
    ("comp", "1,3,3,2 | cells=2,4,9"),
    ("comp", "4"),
    ("word", "10101001001010 | marks=3,8,9,10,11,12"),
]


def _structure(obj):
    """Expected element counts straight from the object."""
    from colorbij.model import (BinaryCompositionWord, Composition, DyckPath, MarkedComposition,
                                MarkedDyckPeak, MarkedDyckSteps, PlaneTree, PolygonPartition)
    if isinstance(obj, (DyckPath, MarkedDyckPeak, MarkedDyckSteps)):
        marks = (1 if isinstance(obj, MarkedDyckPeak) else
                 len(obj.marked_steps) if isinstance(obj, MarkedDyckSteps) else 0)
        return {"step": 2 * obj.n, "dot": marks}
    if isinstance(obj, PolygonPartition):
        return {"side": obj.n + 2, "diagonal": obj.k - 1, "dot": len(obj.marked_sides)}
    if isinstance(obj, PlaneTree):
        return {"edge": obj.n + obj.k, "dot": obj.mark_count}
    if isinstance(obj, (Composition, MarkedComposition)):
        cells = obj.marked_cells if isinstance(obj, MarkedComposition) else ()
        return {"cell": obj.n, "separator": obj.k - 1, "dot": len(cells)}
    if isinstance(obj, BinaryCompositionWord):
        return {"letter": obj.n + obj.k, "dot": len(obj.marked_positions)}
    raise TypeError(obj)


def test_criterion_7_renderer(record_criterion):
    bad = []
    for kind, text in RENDER_FIXTURES:
        obj = parse(kind, text)
        first, second = render(obj), render(obj)
        ET.fromstring(first.svg)
        if first.svg != second.svg:
            bad.append(f"{text}: output differs between runs")
        for cls, want in _structure(obj).items():
            got = first.count(cls)
            if got != want:
                bad.append(f"{text}: {got} {cls} elements, expected {want}")
        if not all(math.isfinite(v) for v in first.viewbox):
            bad.append(f"{text}: non-finite viewbox")
    detail = (f"{len(RENDER_FIXTURES)} fixtures, element counts match structure and output is "
              f"byte-identical across runs, {len(bad)} problems")
    if bad:
        detail += f"; first: {bad[0]}"
    assert record_criterion(7, not bad, detail)
