"""Domain types, validation and the canonical text format.

Every object is an immutable, hashable value. Indices that appear in the
text format (cells, steps, letters, sides, peaks) are 1-based.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union


class ParseError(ValueError):
    """Malformed text. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidObject(ValueError):
    """A structurally well-formed object that violates an invariant."""


class ColorError(InvalidObject):
    pass


def _sorted_unique(values: Iterable[int], what: str) -> tuple[int, ...]:
    vals = tuple(values)
    out = tuple(sorted(set(vals)))
    if len(out) != len(vals):
        raise InvalidObject(f"duplicate {what} index")
    return out


def _check_colors(colors: Optional[Sequence[int]], count: int, what: str):
    if colors is None:
        return None
    colors = tuple(int(c) for c in colors)
    if len(colors) != count:
        raise InvalidObject(f"{what} needs {count} colors, got {len(colors)}")
    for c in colors:
        if c < 1:
            raise InvalidObject(f"color {c} is not positive")
    return colors


# --------------------------------------------------------------------------
# coloring sequence


@dataclass(frozen=True)
class ColorSequence:
    """Number of admissible colors for each part size.

    ``counts[j-1]`` is the count for size j. Sizes past the stored prefix get
    1 color when ``uniform`` is set and are inadmissible otherwise.
    """

    counts: tuple[int, ...] = ()
    uniform: bool = True

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise InvalidObject("color counts must be nonnegative")

    def __getitem__(self, j: int) -> int:
        if j < 1:
            raise IndexError(j)
        if j <= len(self.counts):
            return self.counts[j - 1]
        return 1 if self.uniform else 0

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self[j] for j in range(1, n + 1))

    def is_plain(self, n: int) -> bool:
        """True when every size up to n has exactly one color."""
        return all(self[j] == 1 for j in range(1, n + 1))

    @classmethod
    def parse(cls, text: str) -> "ColorSequence":
        text = text.strip()
        if text in ("", "uniform"):
            return cls()
        items = [t.strip() for t in text.split(",")]
        uniform = False
        if items[-1] in ("...", "…"):
            uniform = True
            items = items[:-1]
        try:
            return cls(tuple(int(t) for t in items), uniform)
        except ValueError as exc:
            raise ParseError(f"bad color sequence {text!r}") from exc

    def __str__(self) -> str:
        if not self.counts and self.uniform:
            return "uniform"
        body = ",".join(map(str, self.counts))
        return body + ",..." if self.uniform else body


UNIFORM = ColorSequence()


def check_gamma(obj, gamma: ColorSequence) -> None:
    """Raise ColorError unless every color of ``obj`` is admissible under gamma."""
    for size, color in block_colors(obj):
        limit = gamma[size]
        if limit == 0:
            raise ColorError(f"part size {size} is not admissible")
        if color is not None and color > limit:
            raise ColorError(f"color {color} out of range 1..{limit} for size {size}")


def block_colors(obj) -> list[tuple[int, Optional[int]]]:
    """(block size, color) pairs of the colorable building blocks of ``obj``."""
    if isinstance(obj, MarkedComposition):
        obj = obj.base
    system = None
    if isinstance(obj, (MarkedDyckPeak, MarkedDyckSteps)):
        # marked steps pair with ascents, a marked peak with descents
        system = "asc" if isinstance(obj, MarkedDyckSteps) else "desc"
        obj = obj.path
    if isinstance(obj, Composition):
        cols = obj.colors or (None,) * obj.k
        return list(zip(obj.parts, cols))
    if isinstance(obj, BinaryCompositionWord):
        parts = word_parts(obj.letters)
        cols = obj.colors or (None,) * len(parts)
        return list(zip(parts, cols))
    if isinstance(obj, DyckPath):
        system = obj.color_system or system or "desc"
        if obj.colors and system != obj.color_system:
            raise InvalidObject(f"path colors its {obj.color_system} blocks, not {system}")
        sizes = [b if system == "desc" else a for a, b in obj.segments()]
        return list(zip(sizes, obj.colors or (None,) * len(sizes)))
    if isinstance(obj, PlaneTree):
        return [(len(v.children) - 1, v.color) for v in obj.internal_nodes()]
    if isinstance(obj, PolygonPartition):
        cells = obj.cells()
        cols = obj.cell_colors or (None,) * len(cells)
        return [(len(c) - 2, col) for c, col in zip(cells, cols)]
    raise TypeError(f"no blocks for {type(obj).__name__}")


# --------------------------------------------------------------------------
# compositions and binary words


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]
    colors: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise InvalidObject("a composition needs at least one part")
        for p in parts:
            if p < 1:
                raise InvalidObject(f"part {p} is not positive")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "colors", _check_colors(self.colors, len(parts), "composition"))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def uncolored(self) -> "Composition":
        return Composition(self.parts)


@dataclass(frozen=True)
class MarkedComposition:
    """Composition of n with k parts and k-1 of its n unit cells dotted."""

    base: Composition
    marked_cells: tuple[int, ...] = ()

    def __post_init__(self):
        cells = _sorted_unique(self.marked_cells, "cell")
        if len(cells) != self.base.k - 1:
            raise InvalidObject(
                f"{self.base.k} parts need {self.base.k - 1} marked cells, got {len(cells)}")
        if cells and (cells[0] < 1 or cells[-1] > self.base.n):
            raise InvalidObject(f"marked cell outside 1..{self.base.n}")
        object.__setattr__(self, "marked_cells", cells)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return self.base.k


def word_parts(letters: str) -> list[int]:
    """Split a word 10^j1 10^j2 ... into its parts; raises on bad shape."""
    if not letters or letters[0] != "1":
        raise InvalidObject("word must start with 1")
    parts = []
    for i, ch in enumerate(letters):
        if ch == "1":
            if i and letters[i - 1] == "1":
                raise InvalidObject(f"two adjacent ones at letters {i} and {i + 1}")
            parts.append(0)
        elif ch == "0":
            parts[-1] += 1
        else:
            raise InvalidObject(f"letter {ch!r} is not binary")
    if parts[-1] == 0:
        raise InvalidObject("word must end with 0")
    return parts


@dataclass(frozen=True)
class BinaryCompositionWord:
    """Word 10^j1 ... 10^jk of length n+k with an optional set of marked letters."""

    letters: str
    marked_positions: tuple[int, ...] = ()
    colors: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        parts = word_parts(self.letters)
        marks = _sorted_unique(self.marked_positions, "letter")
        if marks and (marks[0] < 1 or marks[-1] > len(self.letters)):
            raise InvalidObject(f"marked letter outside 1..{len(self.letters)}")
        object.__setattr__(self, "marked_positions", marks)
        object.__setattr__(self, "colors", _check_colors(self.colors, len(parts), "word"))

    @property
    def k(self) -> int:
        return self.letters.count("1")

    @property
    def n(self) -> int:
        return self.letters.count("0")

    def factors(self) -> list[tuple[int, int]]:
        """(start, length) of each factor 10^j, start 0-based."""
        starts = [i for i, ch in enumerate(self.letters) if ch == "1"]
        ends = starts[1:] + [len(self.letters)]
        return [(s, e - s) for s, e in zip(starts, ends)]


def composition_to_word(c: Composition) -> BinaryCompositionWord:
    return BinaryCompositionWord("".join("1" + "0" * j for j in c.parts), (), c.colors)


def word_to_composition(w: BinaryCompositionWord) -> Composition:
    return Composition(tuple(word_parts(w.letters)), w.colors)


# --------------------------------------------------------------------------
# Dyck paths


@dataclass(frozen=True)
class Block:
    """One item of a block decomposition: a free step or a primitive block."""

    steps: str
    size: int = 0  # j for UD^j, a for U^aD, 0 for a free step
    color: Optional[int] = None

    @property
    def is_free(self) -> bool:
        return self.size == 0


@dataclass(frozen=True)
class DyckPath:
    """Word over {U, D}; ``colors`` color the blocks of ``color_system``."""

    steps: str
    colors: Optional[tuple[int, ...]] = None
    color_system: Optional[str] = None

    def __post_init__(self):
        steps = self.steps
        if not steps:
            raise InvalidObject("empty path (semilength 0 is not allowed)")
        h = 0
        for i, s in enumerate(steps):
            if s == "U":
                h += 1
            elif s == "D":
                h -= 1
                if h < 0:
                    raise InvalidObject(f"prefix valuation negative at step {i + 1}")
            else:
                raise InvalidObject(f"step {s!r} at step {i + 1} is not U or D")
        if h != 0:
            raise InvalidObject(f"total valuation is {h}, not 0")
        if self.colors is not None:
            if self.color_system not in ("desc", "asc"):
                raise InvalidObject("colored path needs color_system 'desc' or 'asc'")
            object.__setattr__(self, "colors", _check_colors(self.colors, self.k, "path"))
        elif self.color_system is not None:
            object.__setattr__(self, "color_system", None)

    @property
    def n(self) -> int:
        return len(self.steps) // 2

    @property
    def peaks(self) -> list[int]:
        """0-based index of the U of every peak, left to right."""
        s = self.steps
        return [i for i in range(len(s) - 1) if s[i] == "U" and s[i + 1] == "D"]

    @property
    def valleys(self) -> list[int]:
        s = self.steps
        return [i for i in range(len(s) - 1) if s[i] == "D" and s[i + 1] == "U"]

    @property
    def k(self) -> int:
        return len(self.peaks)

    def uncolored(self) -> "DyckPath":
        return DyckPath(self.steps)

    def segments(self) -> list[tuple[int, int]]:
        """(a, b) for each factor U^a D^b obtained by cutting at the valleys."""
        return runs_of(self.steps)


def runs_of(word: str) -> list[tuple[int, int]]:
    """Exponents of the factorisation U^a1 D^b1 ... U^ak D^bk of ``word``."""
    out = []
    i, n = 0, len(word)
    while i < n:
        a = 0
        while i < n and word[i] == "U":
            a += 1
            i += 1
        b = 0
        while i < n and word[i] == "D":
            b += 1
            i += 1
        out.append((a, b))
    return out


def descent_blocks(path: DyckPath) -> tuple[Block, ...]:
    """Free U steps and blocks UD^j, one block per maximal descent."""
    cols = iter(path.colors if path.color_system == "desc" and path.colors else ())
    out = []
    for a, b in path.segments():
        out.extend(Block("U") for _ in range(a - 1))
        out.append(Block("U" + "D" * b, b, next(cols, None)))
    return tuple(out)


def ascent_blocks(path: DyckPath) -> tuple[Block, ...]:
    """Blocks U^aD and free D steps, one block per maximal ascent."""
    cols = iter(path.colors if path.color_system == "asc" and path.colors else ())
    out = []
    for a, b in path.segments():
        out.append(Block("U" * a + "D", a, next(cols, None)))
        out.extend(Block("D") for _ in range(b - 1))
    return tuple(out)


@dataclass(frozen=True)
class MarkedDyckPeak:
    path: DyckPath
    marked_peak: int

    def __post_init__(self):
        if not 1 <= self.marked_peak <= self.path.k:
            raise InvalidObject(f"marked peak {self.marked_peak} outside 1..{self.path.k}")

    @property
    def n(self) -> int:
        return self.path.n

    @property
    def k(self) -> int:
        return self.path.k


def markable_steps(path: DyckPath) -> list[int]:
    """1-based indices of the U steps and of the first D of every descent."""
    s = path.steps
    return [i + 1 for i, ch in enumerate(s) if ch == "U" or s[i - 1] == "U"]


@dataclass(frozen=True)
class MarkedDyckSteps:
    """Dyck path with k marked steps among its U steps and peak D steps."""

    path: DyckPath
    marked_steps: tuple[int, ...] = ()

    def __post_init__(self):
        marks = _sorted_unique(self.marked_steps, "step")
        if len(marks) != self.path.k:
            raise InvalidObject(f"{self.path.k} peaks need {self.path.k} marked steps, got {len(marks)}")
        s = self.path.steps
        for m in marks:
            if not 1 <= m <= len(s):
                raise InvalidObject(f"marked step {m} outside 1..{len(s)}")
            if s[m - 1] == "D" and s[m - 2] != "U":
                raise InvalidObject(f"marked step {m} is a D step that is not at a peak")
        object.__setattr__(self, "marked_steps", marks)

    @property
    def n(self) -> int:
        return self.path.n

    @property
    def k(self) -> int:
        return self.path.k


# --------------------------------------------------------------------------
# plane trees


@dataclass(frozen=True)
class PlaneTree:
    """Rooted ordered tree node; a leaf when ``children`` is empty.

    Leaves may be marked, internal nodes may be colored. Outdegree 1 is not
    allowed.
    """

    children: tuple["PlaneTree", ...] = ()
    marked: bool = False
    color: Optional[int] = None
    # subtree statistics, filled in from the children
    leaf_count: int = field(default=1, init=False, repr=False, compare=False)
    internal_count: int = field(default=0, init=False, repr=False, compare=False)
    mark_count: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        kids = self.children
        if kids:
            if len(kids) == 1:
                raise InvalidObject("node of outdegree 1")
            if self.marked:
                raise InvalidObject("internal nodes cannot be marked")
            if self.color is not None and self.color < 1:
                raise InvalidObject(f"color {self.color} is not positive")
            set_ = object.__setattr__
            set_(self, "leaf_count", sum(c.leaf_count for c in kids))
            set_(self, "internal_count", 1 + sum(c.internal_count for c in kids))
            set_(self, "mark_count", sum(c.mark_count for c in kids))
        else:
            if self.color is not None:
                raise InvalidObject("leaves cannot be colored")
            if self.marked:
                object.__setattr__(self, "mark_count", 1)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def preorder(self) -> Iterator["PlaneTree"]:
        stack = [self]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(reversed(v.children))

    def clockwise(self) -> Iterator["PlaneTree"]:
        """Preorder visiting children right to left (walk around the tree clockwise)."""
        stack = [self]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(v.children)

    def leaves(self) -> list["PlaneTree"]:
        return [v for v in self.preorder() if v.is_leaf]

    def internal_nodes(self) -> list["PlaneTree"]:
        return [v for v in self.preorder() if v.children]

    @property
    def n(self) -> int:
        return self.leaf_count - 1

    @property
    def k(self) -> int:
        return self.internal_count

    @property
    def is_colored(self) -> bool:
        return any(v.color is not None for v in self.internal_nodes())

    def uncolored(self) -> "PlaneTree":
        if self.is_leaf:
            return self
        return PlaneTree(tuple(c.uncolored() for c in self.children))

    def with_colors(self, colors: Optional[Sequence[int]]) -> "PlaneTree":
        """Copy with internal-node colors replaced (preorder)."""
        it = iter(colors) if colors is not None else None

        def build(v):
            if v.is_leaf:
                return v
            col = next(it) if it is not None else None
            return PlaneTree(tuple(build(c) for c in v.children), False, col)

        return build(self)


def check_tree(t: PlaneTree) -> PlaneTree:
    if t.is_leaf:
        raise InvalidObject("a single leaf is a tree with n = 0")
    cols = [v.color for v in t.internal_nodes()]
    if any(c is not None for c in cols) and any(c is None for c in cols):
        raise InvalidObject("either all internal nodes are colored or none")
    return t


@dataclass(frozen=True)
class WeightedPrimitiveTree:
    """One-internal-node tree built from a segment U^a D^b."""

    a: int
    weight: int
    marks: tuple[bool, ...]
    color: Optional[int] = None

    def __post_init__(self):
        if self.a < 1 or self.weight < 1:
            raise InvalidObject("primitive tree needs a >= 1 and weight >= 1")
        if len(self.marks) != self.a + 1:
            raise InvalidObject("primitive tree needs a+1 leaf marks")

    @property
    def unmarked(self) -> int:
        return self.marks.count(False)


# --------------------------------------------------------------------------
# polygon dissections


@dataclass(frozen=True)
class PolygonPartition:
    """Rooted convex (n+2)-gon cut by noncrossing diagonals.

    Vertices 1..n+2 run clockwise, the base is {1, n+2} and non-base side i
    is {i, i+1}. ``cell_colors`` follows the cell order of :meth:`cells`.
    """

    n: int
    diagonals: tuple[tuple[int, int], ...] = ()
    marked_sides: tuple[int, ...] = ()
    cell_colors: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise InvalidObject("polygon needs n >= 1")
        diags = []
        for d in self.diagonals:
            a, b = sorted(int(v) for v in d)
            if a < 1 or b > n + 2:
                raise InvalidObject(f"diagonal {(a, b)} has a vertex outside 1..{n + 2}")
            if b - a < 2 or (a, b) == (1, n + 2):
                raise InvalidObject(f"{(a, b)} joins adjacent vertices")
            diags.append((a, b))
        diags.sort()
        if len(set(diags)) != len(diags):
            raise InvalidObject("repeated diagonal")
        for i, (a, b) in enumerate(diags):
            for c, d in diags[i + 1:]:
                if a < c < b < d or c < a < d < b:
                    raise InvalidObject(f"diagonals {(a, b)} and {(c, d)} cross")
        object.__setattr__(self, "diagonals", tuple(diags))
        sides = _sorted_unique(self.marked_sides, "side")
        if sides and (sides[0] < 1 or sides[-1] > n + 1):
            raise InvalidObject(f"marked side outside 1..{n + 1}")
        object.__setattr__(self, "marked_sides", sides)
        object.__setattr__(self, "cell_colors",
                           _check_colors(self.cell_colors, len(diags) + 1, "polygon"))

    @property
    def k(self) -> int:
        return len(self.diagonals) + 1

    def cells(self) -> list[tuple[int, ...]]:
        """Vertex lists of the cells, in preorder of the dual tree."""
        out: dict[int, list[int]] = {}
        for a, b in self.diagonals:
            out.setdefault(a, []).append(b)
        result = []

        def walk(a, b):
            verts = [a]
            result.append(verts)
            v = a
            while v != b:
                nxt = max((c for c in out.get(v, ()) if c <= b and (v, c) != (a, b)),
                          default=v + 1)
                verts.append(nxt)
                if nxt != v + 1:
                    walk(v, nxt)
                v = nxt

        walk(1, self.n + 2)
        return [tuple(c) for c in result]


def polygon_to_tree(p: PolygonPartition) -> PlaneTree:
    """Dual tree: cells become internal nodes, non-base side i becomes leaf i."""
    out: dict[int, list[int]] = {}
    for a, b in p.diagonals:
        out.setdefault(a, []).append(b)
    marked = set(p.marked_sides)
    colors = iter(p.cell_colors) if p.cell_colors else None

    def cell(a, b):
        color = next(colors) if colors else None
        kids = []
        v = a
        while v != b:
            nxt = max((c for c in out.get(v, ()) if c <= b and (v, c) != (a, b)),
                      default=v + 1)
            if nxt == v + 1:
                kids.append(PlaneTree(marked=v in marked))
            else:
                kids.append(cell(v, nxt))
            v = nxt
        return PlaneTree(tuple(kids), False, color)

    return cell(1, p.n + 2)


def tree_to_polygon(t: PlaneTree) -> PolygonPartition:
    check_tree(t)
    diags, sides, colors = [], [], []
    counter = [0]

    def walk(v, is_root):
        if v.is_leaf:
            counter[0] += 1
            if v.marked:
                sides.append(counter[0])
            return
        colors.append(v.color)
        first = counter[0] + 1
        for c in v.children:
            walk(c, False)
        if not is_root:
            diags.append((first, counter[0] + 1))

    walk(t, True)
    cols = tuple(colors) if colors[0] is not None else None
    return PolygonPartition(counter[0] - 1, tuple(diags), tuple(sides), cols)


# --------------------------------------------------------------------------
# text format

Obj = Union[Composition, MarkedComposition, BinaryCompositionWord, DyckPath,
            MarkedDyckPeak, MarkedDyckSteps, PlaneTree, PolygonPartition]

KINDS = ("comp", "word", "dyck", "tree", "polygon")

GRAMMAR = """\
Object text (sections after the body are separated by ' | '):
  comp     1,3,3,2 [| cells=2,4,9] [| colors=1,2,1,1]
  word     10101001001010 [| marks=3,8,9] [| colors=...]   (one color per factor 10^j)
  dyck     UUDUDD [| peak=2 | steps=1,3] [| colors=desc:1,2 | colors=asc:1,2]
  tree     ((ooo)(*o))  o = leaf, * = marked leaf, (...) = internal node
           [| colors=2,1]   (internal nodes in preorder)
  polygon  n=9; diag=(1,4),(1,8),(4,6); sides=2,5; colors=1,1,2,1
           vertices 1..n+2 clockwise, base side {1,n+2}, side i = {i,i+1}
Color sequence: 'uniform', '2,0,3' (zero past the end) or '2,0,3,...' (one past the end)
"""


def _ints(text: str, offset: int, what: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    out = []
    pos = offset
    for tok in text.split(","):
        t = tok.strip()
        if not re.fullmatch(r"\d+", t):
            raise ParseError(f"expected an integer in {what}, got {t!r}", pos)
        out.append(int(t))
        pos += len(tok) + 1
    return tuple(out)


def _sections(text: str) -> list[tuple[str, int]]:
    """Split on '|' keeping the offset of every section."""
    out, pos = [], 0
    for chunk in text.split("|"):
        lead = len(chunk) - len(chunk.lstrip())
        out.append((chunk.strip(), pos + lead))
        pos += len(chunk) + 1
    return out


def _keyed(section: str, offset: int) -> tuple[str, str, int]:
    key, eq, value = section.partition("=")
    if not eq:
        raise ParseError(f"expected key=value, got {section!r}", offset)
    return key.strip(), value, offset + len(key) + 1


def _wrap(fn):
    try:
        return fn()
    except (ParseError, InvalidObject):
        raise
    except (TypeError, ValueError, StopIteration) as exc:
        raise InvalidObject(str(exc)) from exc


def parse(kind: str, text: str) -> Obj:
    """Parse one object of family ``kind`` from its canonical text."""
    parser = {"comp": _parse_comp, "word": _parse_word, "dyck": _parse_dyck,
              "tree": _parse_tree, "polygon": _parse_polygon}.get(kind)
    if parser is None:
        raise ValueError(f"unknown object family {kind!r}; expected one of {KINDS}")
    return parser(text.strip())


def _parse_comp(text):
    secs = _sections(text)
    body, off = secs[0]
    parts = _ints(body, off, "parts")
    if not parts:
        raise ParseError("expected comma-separated parts", off)
    cells, colors = None, None
    for sec, soff in secs[1:]:
        key, val, voff = _keyed(sec, soff)
        if key == "cells" and cells is None:
            cells = _ints(val, voff, "cells")
        elif key == "colors" and colors is None:
            colors = _ints(val, voff, "colors")
        else:
            raise ParseError(f"unexpected section {key!r}", soff)
    base = _wrap(lambda: Composition(parts, colors))
    if cells is None:
        return base
    return _wrap(lambda: MarkedComposition(base, cells))


def _parse_word(text):
    secs = _sections(text)
    body, off = secs[0]
    bad = re.search(r"[^01]", body)
    if bad or not body:
        raise ParseError("expected a word over {0,1}", off + (bad.start() if bad else 0))
    marks, colors = (), None
    for sec, soff in secs[1:]:
        key, val, voff = _keyed(sec, soff)
        if key == "marks":
            marks = _ints(val, voff, "marks")
        elif key == "colors":
            colors = _ints(val, voff, "colors")
        else:
            raise ParseError(f"unexpected section {key!r}", soff)
    return _wrap(lambda: BinaryCompositionWord(body, marks, colors))


def _parse_dyck(text):
    secs = _sections(text)
    body, off = secs[0]
    bad = re.search(r"[^UD]", body)
    if bad or not body:
        raise ParseError("expected a word over {U,D}", off + (bad.start() if bad else 0))
    peak, steps, colors, system = None, None, None, None
    for sec, soff in secs[1:]:
        key, val, voff = _keyed(sec, soff)
        if key == "peak" and peak is None and steps is None:
            vals = _ints(val, voff, "peak")
            if len(vals) != 1:
                raise ParseError("peak= takes one index", voff)
            peak = vals[0]
        elif key == "steps" and steps is None and peak is None:
            steps = _ints(val, voff, "steps")
        elif key == "colors" and colors is None:
            system, sep, rest = val.partition(":")
            system = system.strip()
            if not sep or system not in ("desc", "asc"):
                raise ParseError("colors= needs a 'desc:' or 'asc:' prefix", voff)
            colors = _ints(rest, voff + len(val) - len(rest), "colors")
        else:
            raise ParseError(f"unexpected section {key!r}", soff)
    path = _wrap(lambda: DyckPath(body, colors, system))
    if peak is not None:
        return _wrap(lambda: MarkedDyckPeak(path, peak))
    if steps is not None:
        return _wrap(lambda: MarkedDyckSteps(path, steps))
    return path


def _parse_tree(text):
    secs = _sections(text)
    body, off = secs[0]
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(body):
            raise ParseError("unexpected end of tree", off + pos)
        ch = body[pos]
        if ch in "o*":
            pos += 1
            return PlaneTree(marked=ch == "*")
        if ch != "(":
            raise ParseError(f"unexpected {ch!r} in tree", off + pos)
        start = pos
        pos += 1
        kids = []
        while pos < len(body) and body[pos] != ")":
            kids.append(node())
        if pos >= len(body):
            raise ParseError("unbalanced '('", off + start)
        pos += 1
        try:
            return PlaneTree(tuple(kids))
        except InvalidObject as exc:
            raise InvalidObject(f"{exc} at position {off + start}") from None

    tree = node()
    if pos != len(body):
        raise ParseError("trailing characters after tree", off + pos)
    colors = None
    for sec, soff in secs[1:]:
        key, val, voff = _keyed(sec, soff)
        if key == "colors" and colors is None:
            colors = _ints(val, voff, "colors")
        else:
            raise ParseError(f"unexpected section {key!r}", soff)
    check_tree(tree)
    if colors is not None:
        if len(colors) != tree.k:
            raise InvalidObject(f"tree needs {tree.k} colors, got {len(colors)}")
        tree = _wrap(lambda: tree.with_colors(colors))
    return tree


_DIAG = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def _parse_polygon(text):
    fields: dict[str, tuple[str, int]] = {}
    pos = 0
    for chunk in text.split(";"):
        lead = len(chunk) - len(chunk.lstrip())
        if chunk.strip():
            key, val, voff = _keyed(chunk.strip(), pos + lead)
            if key not in ("n", "diag", "sides", "colors") or key in fields:
                raise ParseError(f"unexpected field {key!r}", pos + lead)
            fields[key] = (val.strip(), voff)
        pos += len(chunk) + 1
    if "n" not in fields:
        raise ParseError("polygon needs n=", 0)
    nval, noff = fields["n"]
    ns = _ints(nval, noff, "n")
    if len(ns) != 1:
        raise ParseError("n= takes one integer", noff)
    diags = []
    if "diag" in fields:
        dval, doff = fields["diag"]
        rest = dval
        at = 0
        while rest[at:].strip():
            m = _DIAG.match(rest, at + (len(rest[at:]) - len(rest[at:].lstrip())))
            if not m:
                raise ParseError("expected (a,b) in diag", doff + at)
            diags.append((int(m.group(1)), int(m.group(2))))
            at = m.end()
            tail = rest[at:].lstrip()
            if tail.startswith(","):
                at = len(rest) - len(tail) + 1
            elif tail:
                raise ParseError("expected ',' between diagonals", doff + at)
    sides = _ints(*fields["sides"], "sides") if "sides" in fields else ()
    colors = _ints(*fields["colors"], "colors") if "colors" in fields else None
    return _wrap(lambda: PolygonPartition(ns[0], tuple(diags), sides, colors))


def _join(values: Iterable[int]) -> str:
    return ",".join(map(str, values))


def tree_text(t: PlaneTree) -> str:
    if t.is_leaf:
        return "*" if t.marked else "o"
    return "(" + "".join(tree_text(c) for c in t.children) + ")"


def serialize(obj: Obj) -> str:
    """Canonical one-line text of ``obj``; inverse of :func:`parse`."""
    if isinstance(obj, Composition):
        s = _join(obj.parts)
        return s + (f" | colors={_join(obj.colors)}" if obj.colors else "")
    if isinstance(obj, MarkedComposition):
        s = f"{_join(obj.base.parts)} | cells={_join(obj.marked_cells)}"
        return s + (f" | colors={_join(obj.base.colors)}" if obj.base.colors else "")
    if isinstance(obj, BinaryCompositionWord):
        s = obj.letters
        if obj.marked_positions:
            s += f" | marks={_join(obj.marked_positions)}"
        return s + (f" | colors={_join(obj.colors)}" if obj.colors else "")
    if isinstance(obj, DyckPath):
        return obj.steps + _path_colors(obj)
    if isinstance(obj, MarkedDyckPeak):
        return f"{obj.path.steps} | peak={obj.marked_peak}" + _path_colors(obj.path)
    if isinstance(obj, MarkedDyckSteps):
        return f"{obj.path.steps} | steps={_join(obj.marked_steps)}" + _path_colors(obj.path)
    if isinstance(obj, PlaneTree):
        s = tree_text(obj)
        if obj.is_colored:
            s += f" | colors={_join(v.color for v in obj.internal_nodes())}"
        return s
    if isinstance(obj, PolygonPartition):
        s = f"n={obj.n}; diag=" + ",".join(f"({a},{b})" for a, b in obj.diagonals)
        if obj.marked_sides:
            s += f"; sides={_join(obj.marked_sides)}"
        if obj.cell_colors:
            s += f"; colors={_join(obj.cell_colors)}"
        return s
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _path_colors(p: DyckPath) -> str:
    return f" | colors={p.color_system}:{_join(p.colors)}" if p.colors else ""


def kind_of(obj: Obj) -> str:
    if isinstance(obj, (Composition, MarkedComposition)):
        return "comp"
    if isinstance(obj, BinaryCompositionWord):
        return "word"
    if isinstance(obj, (DyckPath, MarkedDyckPeak, MarkedDyckSteps)):
        return "dyck"
    if isinstance(obj, PlaneTree):
        return "tree"
    if isinstance(obj, PolygonPartition):
        return "polygon"
    raise TypeError(type(obj).__name__)


def guess_kind(text: str) -> str:
    """Family of a text object. A bare 0/1 string starting with 10 reads as a word."""
    body = text.strip().split("|")[0].strip()
    if body.startswith("n="):
        return "polygon"
    if body[:1] in "(o*" and body:
        return "tree"
    if body[:1] in ("U", "D"):
        return "dyck"
    if re.fullmatch(r"10[01]*", body):
        return "word"
    return "comp"


# --------------------------------------------------------------------------
# JSON mirror


def _tree_dict(t: PlaneTree) -> dict:
    if t.is_leaf:
        return {"marked": t.marked}
    return {"children": [_tree_dict(c) for c in t.children], "color": t.color}


def _tree_from(d: dict) -> PlaneTree:
    if "children" in d:
        return PlaneTree(tuple(_tree_from(c) for c in d["children"]), False, d.get("color"))
    return PlaneTree(marked=bool(d.get("marked", False)))


def to_dict(obj: Obj) -> dict:
    if isinstance(obj, Composition):
        return {"type": "Composition", "parts": list(obj.parts),
                "colors": list(obj.colors) if obj.colors else None}
    if isinstance(obj, MarkedComposition):
        return {"type": "MarkedComposition", "base": to_dict(obj.base),
                "marked_cells": list(obj.marked_cells)}
    if isinstance(obj, BinaryCompositionWord):
        return {"type": "BinaryCompositionWord", "letters": obj.letters,
                "marked_positions": list(obj.marked_positions),
                "colors": list(obj.colors) if obj.colors else None}
    if isinstance(obj, DyckPath):
        return {"type": "DyckPath", "steps": obj.steps,
                "colors": list(obj.colors) if obj.colors else None,
                "color_system": obj.color_system}
    if isinstance(obj, MarkedDyckPeak):
        return {"type": "MarkedDyckPeak", "path": to_dict(obj.path), "marked_peak": obj.marked_peak}
    if isinstance(obj, MarkedDyckSteps):
        return {"type": "MarkedDyckSteps", "path": to_dict(obj.path),
                "marked_steps": list(obj.marked_steps)}
    if isinstance(obj, PlaneTree):
        return {"type": "PlaneTree", **_tree_dict(obj)}
    if isinstance(obj, PolygonPartition):
        return {"type": "PolygonPartition", "n": obj.n,
                "diagonals": [list(d) for d in obj.diagonals],
                "marked_sides": list(obj.marked_sides),
                "cell_colors": list(obj.cell_colors) if obj.cell_colors else None}
    raise TypeError(type(obj).__name__)


def from_dict(d: dict) -> Obj:
    t = d.get("type")
    if t == "Composition":
        return Composition(tuple(d["parts"]), d.get("colors"))
    if t == "MarkedComposition":
        return MarkedComposition(from_dict(d["base"]), tuple(d["marked_cells"]))
    if t == "BinaryCompositionWord":
        return BinaryCompositionWord(d["letters"], tuple(d.get("marked_positions", ())),
                                     d.get("colors"))
    if t == "DyckPath":
        return DyckPath(d["steps"], d.get("colors"), d.get("color_system"))
    if t == "MarkedDyckPeak":
        return MarkedDyckPeak(from_dict(d["path"]), d["marked_peak"])
    if t == "MarkedDyckSteps":
        return MarkedDyckSteps(from_dict(d["path"]), tuple(d["marked_steps"]))
    if t == "PlaneTree":
        return check_tree(_tree_from(d))
    if t == "PolygonPartition":
        return PolygonPartition(d["n"], tuple(tuple(x) for x in d["diagonals"]),
                                tuple(d.get("marked_sides", ())), d.get("cell_colors"))
    raise InvalidObject(f"unknown object type {t!r}")


def to_json(obj: Obj) -> str:
    return json.dumps(to_dict(obj), sort_keys=True)


def from_json(text: str) -> Obj:
    return from_dict(json.loads(text))
