"""Exhaustive generators and the brute-force bijection oracle."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional

from . import bijections as bij
from .counting import binomial, count_compositions, count_dyck, count_polygons
from .model import (
    UNIFORM,
    BinaryCompositionWord,
    ColorSequence,
    Composition,
    DyckPath,
    MarkedComposition,
    MarkedDyckPeak,
    MarkedDyckSteps,
    PlaneTree,
    PolygonPartition,
    block_colors,
    composition_to_word,
    markable_steps,
    runs_of,
    serialize,
)

MARKINGS = {
    "comp": ("none", "cells"),
    "word": ("none", "letters"),
    "dyck": ("none", "peak", "steps"),
    "tree": ("none", "leaves", "leaf"),
    "polygon": ("none", "sides"),
}

# explicit colorings are only produced below these bounds
MAX_COLORED_N = 6
MAX_COLORED_GAMMA = 3


def _check(family, n, k, marking):
    if family not in MARKINGS:
        raise ValueError(f"unknown family {family!r}; expected one of {tuple(MARKINGS)}")
    if marking not in MARKINGS[family]:
        raise ValueError(f"marking {marking!r} is not defined for {family}; "
                         f"expected one of {MARKINGS[family]}")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")


def expected_size(family: str, n: int, k: int, gamma: ColorSequence = UNIFORM,
                  marking: str = "none") -> int:
    """Closed-form size of a family with every coloring counted."""
    _check(family, n, k, marking)
    if family in ("comp", "word"):
        base = count_compositions(n, k, gamma)
    elif family == "dyck":
        base = count_dyck(n, k, gamma)
    else:
        base = count_polygons(n, k, gamma)
    factor = {
        ("comp", "cells"): binomial(n, k - 1),
        ("word", "letters"): binomial(n + k, k),
        ("dyck", "peak"): k,
        ("dyck", "steps"): binomial(n + k, k),
        ("tree", "leaves"): binomial(n + 1, k),
        ("tree", "leaf"): n + 1,
        ("polygon", "sides"): binomial(n + 1, k),
    }.get((family, marking), 1)
    return factor * base


# -- uncolored base objects -------------------------------------------------


def compositions(n: int, k: int, gamma: ColorSequence = UNIFORM) -> Iterator[Composition]:
    """Compositions with admissible parts, in lexicographic order."""

    def rec(rest, parts_left, prefix):
        if parts_left == 0:
            if rest == 0:
                yield Composition(tuple(prefix))
            return
        for j in range(1, rest - parts_left + 2):
            if gamma[j]:
                prefix.append(j)
                yield from rec(rest - j, parts_left - 1, prefix)
                prefix.pop()

    yield from rec(n, k, [])


@lru_cache(maxsize=64)
def _dyck_words(n: int, k: int) -> tuple[str, ...]:
    out = []

    def rec(word, ups, h, peaks):
        if len(word) == 2 * n:
            if peaks == k:
                out.append("".join(word))
            return
        if ups < n:
            word.append("U")
            rec(word, ups + 1, h + 1, peaks)
            word.pop()
        if h > 0:
            new_peak = word[-1] == "U"
            if peaks + new_peak <= k:
                word.append("D")
                rec(word, ups, h - 1, peaks + new_peak)
                word.pop()

    rec([], 0, 0, 0)
    return tuple(out)


def dyck_paths(n: int, k: int, gamma: ColorSequence = UNIFORM,
               system: str = "desc") -> Iterator[DyckPath]:
    """Dyck paths with k peaks in lexicographic order (U < D).

    A path is kept when every block of ``system`` has an admissible size.
    """
    idx = 1 if system == "desc" else 0
    for w in _dyck_words(n, k):
        if all(gamma[seg[idx]] for seg in runs_of(w)):
            yield DyckPath(w)


@lru_cache(maxsize=64)
def _trees(leaves: int, internal: int, gamma: ColorSequence) -> tuple[PlaneTree, ...]:
    if leaves == 1:
        return (PlaneTree(),) if internal == 0 else ()
    if internal == 0:
        return ()
    out = []
    for deg in range(2, leaves + 1):
        if gamma[deg - 1]:
            for kids in _forests(deg, leaves, internal - 1, gamma):
                out.append(PlaneTree(kids))
    return tuple(out)


@lru_cache(maxsize=256)
def _forests(count: int, leaves: int, internal: int, gamma: ColorSequence):
    """Ordered tuples of ``count`` trees with the given totals."""
    if count == 0:
        return ((),) if leaves == 0 and internal == 0 else ()
    out = []
    for l1 in range(1, leaves - count + 2):
        for i1 in range(0, internal + 1):
            firsts = _trees(l1, i1, gamma)
            if not firsts:
                continue
            rests = _forests(count - 1, leaves - l1, internal - i1, gamma)
            for t in firsts:
                for r in rests:
                    out.append((t,) + r)
    return tuple(out)


def plane_trees(n: int, k: int, gamma: ColorSequence = UNIFORM) -> Iterator[PlaneTree]:
    """Trees with n+1 leaves and k internal nodes, none of outdegree 1."""
    g = ColorSequence(gamma.prefix(n), False)
    yield from _trees(n + 1, k, g)


def polygon_partitions(n: int, k: int, gamma: ColorSequence = UNIFORM) -> Iterator[PolygonPartition]:
    """Dissections by k-1 noncrossing diagonals, found by direct backtracking."""
    V = n + 2
    diags = [(a, b) for a in range(1, V + 1) for b in range(a + 2, V + 1) if (a, b) != (1, V)]

    def crosses(d, e):
        (a, b), (c, x) = d, e
        return a < c < b < x or c < a < x < b

    def rec(start, chosen):
        if len(chosen) == k - 1:
            p = PolygonPartition(n, tuple(chosen))
            if all(gamma[len(c) - 2] for c in p.cells()):
                yield p
            return
        for i in range(start, len(diags)):
            d = diags[i]
            if not any(crosses(d, e) for e in chosen):
                chosen.append(d)
                yield from rec(i + 1, chosen)
                chosen.pop()

    yield from rec(0, [])


# -- colorings --------------------------------------------------------------


def _colorings(sizes, gamma) -> Iterator[tuple[int, ...]]:
    return itertools.product(*(range(1, gamma[s] + 1) for s in sizes))


def _check_colorable(n, gamma):
    top = max(gamma[j] for j in range(1, n + 1))
    if n > MAX_COLORED_N or top > MAX_COLORED_GAMMA:
        raise ValueError(f"explicit colorings need n <= {MAX_COLORED_N} and "
                         f"gamma_j <= {MAX_COLORED_GAMMA}; count analytically instead")


def colorable(n: int, gamma: ColorSequence) -> bool:
    try:
        _check_colorable(n, gamma)
    except ValueError:
        return False
    return True


def _colored(base, gamma, system):
    sizes = [s for s, _ in block_colors(base)] if not isinstance(base, DyckPath) else None
    if isinstance(base, DyckPath):
        idx = 1 if system == "desc" else 0
        sizes = [seg[idx] for seg in base.segments()]
        for cols in _colorings(sizes, gamma):
            yield DyckPath(base.steps, cols, system)
    elif isinstance(base, Composition):
        for cols in _colorings(sizes, gamma):
            yield Composition(base.parts, cols)
    elif isinstance(base, PlaneTree):
        for cols in _colorings(sizes, gamma):
            yield base.with_colors(cols)
    elif isinstance(base, PolygonPartition):
        for cols in _colorings(sizes, gamma):
            yield PolygonPartition(base.n, base.diagonals, (), cols)
    else:
        raise TypeError(type(base).__name__)


# -- markings ---------------------------------------------------------------


def _mark_leaves(t: PlaneTree, marks: set[int]) -> PlaneTree:
    counter = [0]

    def build(v):
        if v.is_leaf:
            counter[0] += 1
            return PlaneTree(marked=counter[0] in marks)
        return PlaneTree(tuple(build(c) for c in v.children), False, v.color)

    return build(t)


def _marked(obj, family, marking, n, k):
    if marking == "none":
        if family == "word":
            yield composition_to_word(obj)
        else:
            yield obj
    elif marking == "cells":
        for cells in itertools.combinations(range(1, n + 1), k - 1):
            yield MarkedComposition(obj, cells)
    elif marking == "letters":
        w = composition_to_word(obj)
        for marks in itertools.combinations(range(1, n + k + 1), k):
            yield BinaryCompositionWord(w.letters, marks, w.colors)
    elif marking == "peak":
        for p in range(1, k + 1):
            yield MarkedDyckPeak(obj, p)
    elif marking == "steps":
        for marks in itertools.combinations(markable_steps(obj), k):
            yield MarkedDyckSteps(obj, marks)
    elif marking in ("leaves", "leaf"):
        for marks in itertools.combinations(range(1, n + 2), k if marking == "leaves" else 1):
            yield _mark_leaves(obj, set(marks))
    elif marking == "sides":
        for sides in itertools.combinations(range(1, n + 2), k):
            yield PolygonPartition(obj.n, obj.diagonals, sides, obj.cell_colors)


def gen(family: str, n: int, k: int, gamma: ColorSequence = UNIFORM,
        marking: str = "none", colored: bool = False,
        system: Optional[str] = None) -> Iterator:
    """Every object of a family exactly once, in a fixed order.

    Uncolored streams contain the objects whose block sizes are admissible
    under ``gamma``; with ``colored`` every coloring is produced as its own
    object. Dyck paths color descents for the peak marking and ascents for
    the step marking unless ``system`` says otherwise.
    """
    _check(family, n, k, marking)
    if system is None:
        system = "asc" if marking == "steps" else "desc"
    if colored:
        _check_colorable(n, gamma)
    if family in ("comp", "word"):
        bases = compositions(n, k, gamma)
    elif family == "dyck":
        bases = dyck_paths(n, k, gamma, system)
    elif family == "tree":
        bases = plane_trees(n, k, gamma)
    else:
        bases = polygon_partitions(n, k, gamma)
    for base in bases:
        variants = _colored(base, gamma, system) if colored else (base,)
        for obj in variants:
            yield from _marked(obj, family, marking, n, k)


def weight(obj, gamma: ColorSequence) -> int:
    """Number of colorings of an uncolored object."""
    w = 1
    for size, _ in block_colors(obj):
        w *= gamma[size]
    return w


# -- oracle -----------------------------------------------------------------

ORACLE_FAMILIES = {
    "phi_dc": (("dyck", "peak"), ("comp", "cells")),
    "phi_dp": (("dyck", "steps"), ("tree", "leaves")),
    "phi_bt": (("word", "letters"), ("tree", "leaf")),
    "polygon_tree": (("polygon", "sides"), ("tree", "leaves")),
    "comp_word": (("comp", "none"), ("word", "none")),
}


@dataclass
class OracleReport:
    bijection: str
    n: int
    k: int
    gamma: ColorSequence
    colored: bool
    domain: int = 0
    image: int = 0
    codomain: int = 0
    expected: int = 0
    checks: dict[str, bool] = field(default_factory=dict)
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def fail(self, check: str, detail: str):
        self.checks[check] = False
        if self.counterexample is None:
            self.counterexample = f"{check}: {detail}"

    def line(self) -> str:
        s = (f"{'PASS' if self.passed else 'FAIL'} domain={self.domain} image={self.image} "
             f"codomain={self.codomain} bijection={self.bijection} n={self.n} k={self.k} "
             f"gamma={self.gamma}{' colored' if self.colored else ''}")
        if self.counterexample:
            s += f" first_failure=[{self.counterexample}]"
        return s

    def to_dict(self) -> dict:
        return {"bijection": self.bijection, "n": self.n, "k": self.k,
                "gamma": str(self.gamma), "colored": self.colored,
                "domain": self.domain, "image": self.image, "codomain": self.codomain,
                "expected": self.expected, "checks": dict(self.checks),
                "passed": self.passed, "counterexample": self.counterexample}


def _colored_sizes(obj) -> list[tuple[int, int]]:
    return sorted((s, c or 1) for s, c in block_colors(obj))


def oracle_verify(bijection: str, n: int, k: int, gamma: ColorSequence = UNIFORM,
                  colored: Optional[bool] = None) -> OracleReport:
    """Map every domain object and check that the map is a size-, part- and
    color-preserving bijection onto the enumerated codomain."""
    if bijection not in ORACLE_FAMILIES:
        raise ValueError(f"unknown bijection {bijection!r}; expected one of {tuple(ORACLE_FAMILIES)}")
    if colored is None:
        colored = not gamma.is_plain(n) and colorable(n, gamma)
    (dfam, dmark), (cfam, cmark) = ORACLE_FAMILIES[bijection]
    fwd, inv = bij.FORWARD[bijection], bij.INVERSE[bijection]
    dom_type, cod_type = bij.SIGNATURES[bijection]
    rep = OracleReport(bijection, n, k, gamma, colored)
    for name in ("valid", "injective", "surjective", "round_trip", "inverse_round_trip",
                 "parts", "colors", "cardinality"):
        rep.checks[name] = True

    images: set[str] = set()
    verified: set[str] = set()
    weighted = 0
    for x in gen(dfam, n, k, gamma, dmark, colored):
        rep.domain += 1
        weighted += 1 if colored else weight(x, gamma)
        try:
            y = fwd(x)
        except Exception as exc:  # reported, not raised
            rep.fail("valid", f"{serialize(x)} raised {exc!r}")
            continue
        if not isinstance(y, cod_type) or _nk(y) != (n, k) or not _marks_ok(y, cmark, k):
            rep.fail("valid", f"{serialize(x)} -> {serialize(y)}")
        sy = serialize(y)
        if sy in images:
            rep.fail("injective", f"{serialize(x)} collides on {sy}")
        images.add(sy)
        cx, cy = _colored_sizes(x), _colored_sizes(y)
        if [s for s, _ in cx] != [s for s, _ in cy]:
            rep.fail("parts", f"{serialize(x)} -> {sy}")
        elif cx != cy:
            rep.fail("colors", f"{serialize(x)} -> {sy}")
        try:
            back = inv(y)
        except Exception as exc:
            rep.fail("round_trip", f"{sy} raised {exc!r}")
            continue
        if back != x:
            rep.fail("round_trip", f"{serialize(x)} -> {sy} -> {serialize(back)}")
        else:
            verified.add(sy)
    rep.image = len(images)

    codomain: set[str] = set()
    for y in gen(cfam, n, k, gamma, cmark, colored):
        sy = serialize(y)
        codomain.add(sy)
        if sy in verified:
            # y = fwd(x) and inv(y) = x were both seen above, so fwd(inv(y)) = y
            continue
        try:
            if fwd(inv(y)) != y:
                rep.fail("inverse_round_trip", sy)
        except Exception as exc:
            rep.fail("inverse_round_trip", f"{sy} raised {exc!r}")
    rep.codomain = len(codomain)
    if images != codomain:
        extra = sorted(images - codomain)[:1] or sorted(codomain - images)[:1]
        rep.fail("surjective", f"image and codomain differ, e.g. {extra}")

    rep.expected = expected_size(dfam, n, k, gamma, dmark)
    if weighted != rep.expected or (colored and rep.codomain != rep.expected):
        rep.fail("cardinality", f"enumerated {weighted}, closed form {rep.expected}")
    return rep


def _nk(obj) -> tuple[int, int]:
    return obj.n, obj.k


def _marks_ok(obj, marking, k) -> bool:
    if isinstance(obj, PlaneTree):
        return obj.mark_count == (1 if marking == "leaf" else k)
    if isinstance(obj, BinaryCompositionWord):
        return len(obj.marked_positions) == (k if marking == "letters" else 0)
    return True


# -- identities by enumeration ----------------------------------------------


def _mark_slots(obj, marking: str) -> tuple[int, int]:
    """(positions available, positions to choose) for one unmarked object."""
    if marking == "cells":
        return obj.n, obj.k - 1
    if marking == "letters":
        return obj.n + obj.k, obj.k
    if marking == "peak":
        return obj.k, 1
    if marking == "steps":
        return len(markable_steps(obj)), obj.k
    if marking == "leaves":
        return obj.leaf_count, obj.k
    if marking == "leaf":
        return obj.leaf_count, 1
    if marking == "sides":
        return obj.n + 1, obj.k
    return 0, 0


def enumerated_size(family: str, n: int, k: int, gamma: ColorSequence = UNIFORM,
                    marking: str = "none") -> int:
    """Size of a marked colored family found by listing its uncolored objects.

    Each object contributes its number of colorings times its number of
    markings, so no marked object is built.
    """
    total = 0
    for obj in gen(family, n, k, gamma, "none"):
        w = weight(obj, gamma)
        if marking != "none":
            avail, pick = _mark_slots(obj, marking)
            w *= binomial(avail, pick)
        total += w
    return total


IDENTITY_SIDES = (
    ("C(n,k-1)*c = k*d", ("comp", "cells"), ("dyck", "peak")),
    ("C(n+k,k)*d = C(n+1,k)*p", ("dyck", "steps"), ("tree", "leaves")),
    ("C(n+1,k)*p = polygons with k marked sides", ("tree", "leaves"), ("polygon", "sides")),
    ("(n+1)*p = C(n+k,k)*c", ("tree", "leaf"), ("word", "letters")),
)


@dataclass
class EnumeratedIdentities:
    n: int
    k: int
    gamma: ColorSequence
    sizes: dict[str, int]
    closed: dict[str, int]
    rows: list[tuple[str, int, int]]

    @property
    def passed(self) -> bool:
        return (all(a == b for _, a, b in self.rows)
                and all(self.sizes[key] == self.closed[key] for key in self.sizes))

    def line(self) -> str:
        body = "; ".join(f"[{name}] {a} = {b}" for name, a, b in self.rows)
        return f"{'PASS' if self.passed else 'FAIL'} n={self.n} k={self.k} gamma={self.gamma} {body}"

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "gamma": str(self.gamma),
                "sizes": dict(self.sizes), "closed": dict(self.closed),
                "rows": [{"identity": name, "lhs": a, "rhs": b} for name, a, b in self.rows],
                "passed": self.passed}


def enumerated_identities(n: int, k: int, gamma: ColorSequence = UNIFORM) -> EnumeratedIdentities:
    """Check the cardinality identities on enumerated family sizes."""
    sizes, closed = {}, {}
    for _, *sides in IDENTITY_SIDES:
        for fam, mark in sides:
            key = f"{fam}:{mark}"
            if key not in sizes:
                sizes[key] = enumerated_size(fam, n, k, gamma, mark)
                closed[key] = expected_size(fam, n, k, gamma, mark)
    rows = [(name, sizes[f"{a[0]}:{a[1]}"], sizes[f"{b[0]}:{b[1]}"])
            for name, a, b in IDENTITY_SIDES]
    return EnumeratedIdentities(n, k, gamma, sizes, closed, rows)
