"""NEWSUD walks on the simple cubic lattice.

Axis convention: E = +x, N = +y, U = +z. None of the geometric verdicts
depend on it.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

Vec = tuple[int, int, int]

MIN_KNOT_LENGTH = 24


class NewsudError(ValueError):
    pass


class Direction(Enum):
    N = (0, 1, 0)
    E = (1, 0, 0)
    W = (-1, 0, 0)
    S = (0, -1, 0)
    U = (0, 0, 1)
    D = (0, 0, -1)

    @property
    def letter(self) -> str:
        return self.name

    @property
    def step(self) -> Vec:
        return self.value

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]


_OPPOSITE = {
    Direction.N: Direction.S, Direction.S: Direction.N,
    Direction.E: Direction.W, Direction.W: Direction.E,
    Direction.U: Direction.D, Direction.D: Direction.U,
}

LETTERS = "NEWSUD"


@dataclass(frozen=True)
class DirectionSequence:
    directions: tuple[Direction, ...]

    @property
    def source_text(self) -> str:
        return "".join(d.name for d in self.directions)

    def __str__(self) -> str:
        return self.source_text

    def __len__(self) -> int:
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)

    def rotate(self, k: int) -> "DirectionSequence":
        k %= len(self.directions)
        return DirectionSequence(self.directions[k:] + self.directions[:k])

    def letter_counts(self) -> Counter:
        return Counter(d.name for d in self.directions)


def parse_newsud(text: str) -> DirectionSequence:
    """Parse a NEWSUD string; case-insensitive, whitespace ignored."""
    dirs = []
    for pos, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        up = ch.upper()
        if up not in LETTERS:
            raise NewsudError(f"illegal NEWSUD character {ch!r} at position {pos}")
        dirs.append(Direction[up])
    if not dirs:
        raise NewsudError("empty NEWSUD string")
    return DirectionSequence(tuple(dirs))


def path_vertices(seq: DirectionSequence) -> list[Vec]:
    x = y = z = 0
    out = [(0, 0, 0)]
    for d in seq:
        dx, dy, dz = d.step
        x, y, z = x + dx, y + dy, z + dz
        out.append((x, y, z))
    return out


@dataclass(frozen=True)
class ValidationReport:
    length: int
    closed: bool
    displacement: Vec
    self_avoiding: bool
    first_vertex_collision: tuple[int, int] | None
    repeated_edge: tuple[int, int] | None
    meets_min_knot_length: bool

    @property
    def ok(self) -> bool:
        return self.closed and self.self_avoiding

    def describe(self) -> str:
        if self.ok:
            return "OK"
        problems = []
        if not self.closed:
            problems.append("NOT CLOSED, displacement ({:+d},{:+d},{:+d})".format(*self.displacement))
        if self.first_vertex_collision is not None:
            problems.append("vertex revisited at steps {} and {}".format(*self.first_vertex_collision))
        if self.repeated_edge is not None:
            problems.append("edge repeated at steps {} and {}".format(*self.repeated_edge))
        return "; ".join(problems)


def validate_polygon(seq: DirectionSequence) -> ValidationReport:
    verts = path_vertices(seq)
    n = len(seq)
    disp = verts[-1]
    closed = disp == (0, 0, 0)

    # the shared start/end vertex of a closed walk is not a collision
    last = n if closed else n + 1
    seen: dict[Vec, int] = {}
    vertex_hit = None
    for i in range(last):
        v = verts[i]
        if v in seen:
            vertex_hit = (seen[v], i)
            break
        seen[v] = i

    edges: dict[frozenset, int] = {}
    edge_hit = None
    for i in range(n):
        e = frozenset((verts[i], verts[i + 1]))
        if e in edges:
            edge_hit = (edges[e], i)
            break
        edges[e] = i

    return ValidationReport(
        length=n,
        closed=closed,
        displacement=disp,
        self_avoiding=vertex_hit is None and edge_hit is None,
        first_vertex_collision=vertex_hit,
        repeated_edge=edge_hit,
        meets_min_knot_length=n >= MIN_KNOT_LENGTH,
    )
