"""The three marked bijections and their inverses.

* ``phi_dc``: Dyck paths with a marked peak <-> compositions with k-1 dotted cells
* ``phi_dp``: Dyck paths with k marked steps <-> trees with k marked leaves
* ``phi_bt``: binary words with k marked letters <-> trees with one marked leaf

Colors ride along with the building blocks: a maximal descent UD^j of the
path pairs with part j, a block U^aD with an internal node of outdegree a+1,
and a factor 10^j with an internal node of outdegree j+1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    BinaryCompositionWord,
    ColorSequence,
    Composition,
    DyckPath,
    InvalidObject,
    MarkedComposition,
    MarkedDyckPeak,
    MarkedDyckSteps,
    PlaneTree,
    PolygonPartition,
    WeightedPrimitiveTree,
    block_colors,
    check_gamma,
    check_tree,
    composition_to_word,
    polygon_to_tree,
    runs_of,
    tree_to_polygon,
    word_to_composition,
)


# --------------------------------------------------------------------------
# compositions <-> Dyck paths


@dataclass(frozen=True)
class SubwordSplit:
    """A word cut at its valleys into factors U^a D^b."""

    factors: tuple[tuple[int, int], ...]
    marked: int = 0  # 0-based factor index

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in self.factors)

    def word(self) -> str:
        return "".join("U" * a + "D" * b for a, b in self.factors)

    def rotate(self, r: int) -> "SubwordSplit":
        """Move the first ``r`` factors to the end."""
        k = len(self.factors)
        return SubwordSplit(self.factors[r:] + self.factors[:r], (self.marked - r) % k)


def split_at_valleys(word: str, marked: int = 0) -> SubwordSplit:
    return SubwordSplit(tuple(runs_of(word)), marked)


def _has_zero_prefix(factors) -> bool:
    """Whether some nonempty proper prefix has valuation 0."""
    h = 0
    total = sum(a + b for a, b in factors)
    seen = 0
    for a, b in factors:
        # within a factor the minimum prefix is reached at its end
        h += a - b
        seen += a + b
        if h == 0 and seen < total:
            return True
        if h < 0:
            return True
    return False


def phi_dc(x: MarkedDyckPeak) -> MarkedComposition:
    path = x.path
    # prepending U adds no peak, so peak i still sits in factor i
    split = split_at_valleys("U" + path.steps, x.marked_peak - 1)
    k = len(split.factors)
    hat = split.rotate(split.marked)
    parts = tuple(b for _, b in hat.factors)
    cells, seen = [], 0
    for a, _ in hat.factors[:-1]:
        seen += a
        cells.append(seen)
    colors = None
    if path.colors is not None:
        if path.color_system != "desc":
            raise InvalidObject("phi_dc transports descent-block colors")
        colors = tuple(path.colors[(split.marked + i) % k] for i in range(k))
    return MarkedComposition(Composition(parts, colors), tuple(cells))


def phi_dc_inv(c: MarkedComposition) -> MarkedDyckPeak:
    n, k = c.n, c.k
    bounds = (0,) + c.marked_cells + (n + 1,)
    factors = tuple((bounds[i + 1] - bounds[i], c.base.parts[i]) for i in range(k))
    hat = SubwordSplit(factors, 0)
    good = [r for r in range(k) if not _has_zero_prefix(hat.rotate(r).factors)]
    assert len(good) == 1, f"cycle lemma violated: {len(good)} good rotations"
    r = good[0]
    rotated = hat.rotate(r)
    word = rotated.word()
    assert word[0] == "U"
    colors = None
    if c.base.colors is not None:
        colors = tuple(c.base.colors[(r + i) % k] for i in range(k))
    path = DyckPath(word[1:], colors, "desc" if colors else None)
    return MarkedDyckPeak(path, rotated.marked + 1)


# --------------------------------------------------------------------------
# mutable trees used while merging


class _Node:
    __slots__ = ("children", "marked", "active", "color")

    def __init__(self, children=None, marked=False, color=None):
        self.children = children if children is not None else []
        self.marked = marked
        self.active = True
        self.color = color

    def leaves(self):
        out, stack = [], [self]
        while stack:
            v = stack.pop()
            if v.children:
                stack.extend(reversed(v.children))
            else:
                out.append(v)
        return out

    def graft(self, root: "_Node"):
        """Put ``root`` in place of this leaf."""
        assert not self.children
        self.children = root.children
        self.color = root.color
        self.marked = False

    def freeze(self) -> PlaneTree:
        if not self.children:
            return PlaneTree(marked=self.marked)
        return PlaneTree(tuple(c.freeze() for c in self.children), False, self.color)


def _primitive(marks, color) -> _Node:
    return _Node([_Node(marked=m) for m in marks], False, color)


# --------------------------------------------------------------------------
# Dyck paths with marked steps <-> trees with k marked leaves


def primitive_trees(x: MarkedDyckSteps) -> list[WeightedPrimitiveTree]:
    """One weighted claw per segment U^a D^b; U steps are leaves 1..a, the peak D is leaf a+1."""
    path = x.path
    marked = set(x.marked_steps)
    cols = path.colors if path.color_system == "asc" and path.colors else None
    if path.colors is not None and cols is None:
        raise InvalidObject("phi_dp transports ascent-block colors")
    out, pos = [], 1
    for i, (a, b) in enumerate(path.segments()):
        marks = tuple(pos + t in marked for t in range(a + 1))
        out.append(WeightedPrimitiveTree(a, b, marks, cols[i] if cols else None))
        pos += a + b
    return out


@dataclass
class ForestMember:
    root: _Node
    first: int  # index of the first primitive tree merged into it
    weight: int

    def active_unmarked(self) -> list[_Node]:
        return [v for v in self.root.leaves() if not v.marked and v.active]

    @property
    def deficit(self) -> int:
        return self.weight - len(self.active_unmarked())


@dataclass
class MergeState:
    """Forest F_v1..F_vm left after the left-to-right merging pass."""

    members: list[ForestMember]

    @property
    def deficits(self) -> list[int]:
        return [f.deficit for f in self.members]


def merge_forest(prims: list[WeightedPrimitiveTree]) -> MergeState:
    trees = [_primitive(p.marks, p.color) for p in prims]
    cur = ForestMember(trees[0], 0, prims[0].weight)
    members = []
    for i in range(1, len(prims)):
        free = cur.active_unmarked()
        b = cur.weight
        if len(free) >= b:
            for leaf in free[len(free) - b + 1:]:
                leaf.active = False
            free[len(free) - b].graft(trees[i])
            cur.weight = prims[i].weight
        else:
            members.append(cur)
            cur = ForestMember(trees[i], i, prims[i].weight)
    members.append(cur)
    return MergeState(members)


def phi_dp(x: MarkedDyckSteps) -> PlaneTree:
    prims = primitive_trees(x)
    state = merge_forest(prims)
    members = state.members
    last = members[-1]
    if len(members) > 1:
        deltas = state.deficits[:-1]
        assert all(d >= 1 for d in deltas), deltas
        free = last.active_unmarked()
        bk = prims[-1].weight
        assert len(free) == sum(deltas) + bk, (len(free), deltas, bk)
        pos = len(free) - bk - 1
        # roots are taken from the leaf list computed before any grafting
        for member, delta in zip(members[:-1], deltas):
            free[pos].graft(member.root)
            pos -= delta
        # F_v(m-1) sat delta_v(m-1) - 1 unmarked leaves from the left end
        assert pos == -1, pos
    return last.root.freeze()


@dataclass(frozen=True)
class InverseLabels:
    """Edge counts and right-most-edge labels of the primitive components."""

    a: tuple[int, ...]
    labels: tuple[int, ...]
    rotation: int  # 1-based index of the component the path starts with

    @property
    def deficits(self) -> tuple[int, ...]:
        return tuple(a - lam for a, lam in zip(self.a, self.labels))


def inverse_labels(t: PlaneTree) -> InverseLabels:
    walk = list(t.clockwise())
    roots = [i for i, v in enumerate(walk) if v.children]
    k, n = len(roots), t.n
    labels = []
    for i in range(k - 1):
        between = walk[roots[i] + 1:roots[i + 1]]
        labels.append(1 + sum(1 for v in between if not v.marked))
    labels.append(n - sum(labels))
    a = tuple(len(walk[r].children) - 1 for r in roots)
    d = [ai - li for ai, li in zip(a, labels)]
    rotation = 1
    acc = 0
    for j in range(k - 1):
        acc += d[j]
        if acc < 0:
            rotation = None
            break
    if rotation is None:
        for start in range(2, k + 1):
            acc, ok = 0, True
            for j in range(start, k):
                acc += d[j - 1]
                if acc < 0:
                    ok = False
                    break
            if ok:
                rotation = start
                break
    return InverseLabels(a, tuple(labels), rotation)


def phi_dp_inv(t: PlaneTree) -> MarkedDyckSteps:
    check_tree(t)
    if t.mark_count != t.k:
        raise InvalidObject(f"tree with {t.k} internal nodes needs {t.k} marked leaves")
    comps = [v for v in t.clockwise() if v.children]
    info = inverse_labels(t)
    k = len(comps)
    downs = list(info.labels)
    order = list(range(k))
    ell = info.rotation
    if ell > 1:
        downs[k - 1] += 1
        downs[ell - 2] -= 1
        order = list(range(ell - 1, k)) + list(range(ell - 1))
    steps, marks, colors = [], [], []
    base = 0
    for i in order:
        node = comps[i]
        a = len(node.children) - 1
        for c, child in enumerate(node.children):
            if child.is_leaf and child.marked:
                marks.append(base + c + 1)
        steps.append("U" * a + "D" * downs[i])
        base += a + downs[i]
        colors.append(node.color)
    word = "".join(steps)
    cols = tuple(colors) if colors[0] is not None else None
    return MarkedDyckSteps(DyckPath(word, cols, "asc" if cols else None), tuple(marks))


# --------------------------------------------------------------------------
# marked binary words <-> trees with one marked leaf


def phi_bt(w: BinaryCompositionWord) -> PlaneTree:
    if len(w.marked_positions) != w.k:
        raise InvalidObject(f"word with {w.k} ones needs {w.k} marked letters")
    marked = set(w.marked_positions)
    trees = []
    for i, (start, length) in enumerate(w.factors()):
        marks = [start + t + 1 in marked for t in range(length)]
        trees.append(_primitive(marks, w.colors[i] if w.colors else None))
    forest, cur = [], trees[0]
    for nxt in trees[1:]:
        spots = [v for v in cur.leaves() if v.marked]
        if spots:
            spots[-1].graft(nxt)
        else:
            forest.append(cur)
            cur = nxt
    forest.append(cur)
    last = forest[-1]
    if len(forest) > 1:
        spots = [v for v in last.leaves() if v.marked]
        assert len(spots) == len(forest), (len(spots), len(forest))
        for spot, member in zip(spots, reversed(forest[:-1])):
            spot.graft(member)
    return last.freeze()


def phi_bt_inv(t: PlaneTree) -> BinaryCompositionWord:
    check_tree(t)
    if t.mark_count != 1:
        raise InvalidObject(f"phi_bt_inv needs exactly one marked leaf, got {t.mark_count}")
    walk = list(t.clockwise())
    comps = [v for v in walk if v.children]
    k = len(comps)
    mark_at = next(i for i, v in enumerate(walk) if v.is_leaf and v.marked)
    # internal nodes seen before the marked leaf: T_1..T_{m+j}
    split = sum(1 for v in walk[:mark_at] if v.children)
    order = list(range(split, k)) + list(range(split))
    letters, marks, colors = [], [], []
    for i in order:
        node = comps[i]
        base = len(letters)
        for c, child in enumerate(node.children):
            if child.children or child.marked:
                marks.append(base + c + 1)
            letters.append("1" if c == 0 else "0")
        colors.append(node.color)
    cols = tuple(colors) if colors[0] is not None else None
    return BinaryCompositionWord("".join(letters), tuple(marks), cols)


# --------------------------------------------------------------------------
# dispatch and color transport

BIJECTIONS = ("phi_dc", "phi_dp", "phi_bt", "polygon_tree", "comp_word")

FORWARD = {
    "phi_dc": phi_dc,
    "phi_dp": phi_dp,
    "phi_bt": phi_bt,
    "polygon_tree": polygon_to_tree,
    "comp_word": composition_to_word,
}

INVERSE = {
    "phi_dc": phi_dc_inv,
    "phi_dp": phi_dp_inv,
    "phi_bt": phi_bt_inv,
    "polygon_tree": tree_to_polygon,
    "comp_word": word_to_composition,
}

# (domain type, codomain type) of each forward map
SIGNATURES = {
    "phi_dc": (MarkedDyckPeak, MarkedComposition),
    "phi_dp": (MarkedDyckSteps, PlaneTree),
    "phi_bt": (BinaryCompositionWord, PlaneTree),
    "polygon_tree": (PolygonPartition, PlaneTree),
    "comp_word": (Composition, BinaryCompositionWord),
}


def apply(bijection: str, obj):
    """Run ``bijection`` forward or backward depending on the type of ``obj``."""
    if bijection not in FORWARD:
        raise ValueError(f"unknown bijection {bijection!r}; expected one of {BIJECTIONS}")
    dom, cod = SIGNATURES[bijection]
    if isinstance(obj, dom):
        return FORWARD[bijection](obj)
    if isinstance(obj, cod):
        return INVERSE[bijection](obj)
    raise InvalidObject(f"{bijection} does not accept a {type(obj).__name__}")


def strip_colors(obj):
    if isinstance(obj, MarkedComposition):
        return MarkedComposition(obj.base.uncolored(), obj.marked_cells)
    if isinstance(obj, Composition):
        return obj.uncolored()
    if isinstance(obj, BinaryCompositionWord):
        return BinaryCompositionWord(obj.letters, obj.marked_positions)
    if isinstance(obj, DyckPath):
        return obj.uncolored()
    if isinstance(obj, MarkedDyckPeak):
        return MarkedDyckPeak(obj.path.uncolored(), obj.marked_peak)
    if isinstance(obj, MarkedDyckSteps):
        return MarkedDyckSteps(obj.path.uncolored(), obj.marked_steps)
    if isinstance(obj, PlaneTree):
        return obj.uncolored()
    if isinstance(obj, PolygonPartition):
        return PolygonPartition(obj.n, obj.diagonals, obj.marked_sides)
    raise TypeError(type(obj).__name__)


def transport_colors(source, target, bijection: str,
                     gamma: Optional[ColorSequence] = None):
    """Copy the block colors of ``source`` onto ``target``, its image under ``bijection``.

    ``target`` may be colored or not; its underlying uncolored object must be
    the image of ``source``.
    """
    if gamma is not None:
        check_gamma(source, gamma)
    image = apply(bijection, source)
    if strip_colors(image) != strip_colors(target):
        raise InvalidObject(f"target is not the {bijection} image of source")
    if gamma is not None:
        check_gamma(image, gamma)
    assert sorted(block_colors(image), key=repr) == sorted(block_colors(source), key=repr)
    return image
