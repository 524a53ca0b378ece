"""Genotype -> phenotype development.

Genome encoding, one-step mutation, recursive biomorph growth, and
deterministic SVG serialization. Everything here is pure integer
arithmetic: repeated calls are byte-identical, and drawings are safe
to hash.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .rng import RandomStream

SHAPE_MIN, SHAPE_MAX = -9, 9
DEPTH_MIN, DEPTH_MAX = 1, 8
COLOR_MIN, COLOR_MAX = 0, 255
THICKNESS_MIN, THICKNESS_MAX = 1, 8
PRICE_MIN, PRICE_MAX = 0, 15

# Flat gene layout: 8 shape genes, depth, r, g, b, thickness, price.
GENE_BOUNDS: tuple[tuple[int, int], ...] = (
    *([(SHAPE_MIN, SHAPE_MAX)] * 8),
    (DEPTH_MIN, DEPTH_MAX),
    *([(COLOR_MIN, COLOR_MAX)] * 3),
    (THICKNESS_MIN, THICKNESS_MAX),
    (PRICE_MIN, PRICE_MAX),
)
GENE_COUNT = len(GENE_BOUNDS)  # 14

GENE_NAMES: tuple[str, ...] = (
    "g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8",
    "depth", "r", "g", "b", "thickness", "price",
)


class MalformedGenome(ValueError):
    pass


class EmptyDrawing(ValueError):
    pass


@dataclass(frozen=True)
class Genome:
    """Heritable state of one agent: 14 bounded integer genes."""

    shape: tuple[int, int, int, int, int, int, int, int]
    depth: int
    color: tuple[int, int, int]
    thickness: int
    price_gene: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "shape", tuple(self.shape))
        object.__setattr__(self, "color", tuple(self.color))
        if len(self.shape) != 8:
            raise MalformedGenome(f"shape must have 8 genes, got {len(self.shape)}")
        if len(self.color) != 3:
            raise MalformedGenome(f"color must have 3 channels, got {len(self.color)}")
        for value, (lo, hi), name in zip(self.genes(), GENE_BOUNDS, GENE_NAMES):
            if not isinstance(value, int) or isinstance(value, bool):
                raise MalformedGenome(f"gene {name} must be an integer, got {value!r}")
            if not lo <= value <= hi:
                raise MalformedGenome(f"gene {name}={value} outside [{lo}, {hi}]")

    def genes(self) -> tuple[int, ...]:
        return (*self.shape, self.depth, *self.color, self.thickness, self.price_gene)

    def with_gene(self, index: int, value: int) -> "Genome":
        genes = list(self.genes())
        genes[index] = value
        return Genome(
            shape=tuple(genes[0:8]),
            depth=genes[8],
            color=tuple(genes[9:12]),
            thickness=genes[12],
            price_gene=genes[13],
        )


@dataclass(frozen=True)
class Segment:
    x1: int
    y1: int
    x2: int
    y2: int
    width: int
    color: tuple[int, int, int]


@dataclass(frozen=True)
class Drawing:
    segments: tuple[Segment, ...]


def _direction_tables(shape: tuple[int, ...]) -> tuple[list[int], list[int]]:
    g1, g2, g3, g4, g5, g6, g7, g8 = shape
    dx = [0, g1, g2, g3, 0, -g3, -g2, -g1]
    dy = [-g4, -g5, -g6, g7, g8, g7, -g6, -g5]
    return dx, dy


@lru_cache(maxsize=4096)
def develop(genome: Genome) -> Drawing:
    """Grow the recursive branching phenotype of a genome.

    Each call emits one segment and recurses twice at depth-1 until
    depth hits 1, so a depth-d genome yields exactly 2^d - 1 segments.
    Stroke width tapers from `thickness` at the root to 1 at the tips
    via a ceiling division, all in exact integer arithmetic.
    """
    dx, dy = _direction_tables(genome.shape)
    total_depth = genome.depth
    color = genome.color
    segments: list[Segment] = []

    def branch(x: int, y: int, direction: int, depth: int) -> None:
        d = direction % 8
        x2 = x + depth * dx[d]
        y2 = y + depth * dy[d]
        width = (genome.thickness * depth + total_depth - 1) // total_depth
        segments.append(Segment(x, y, x2, y2, width, color))
        if depth > 1:
            branch(x2, y2, direction - 1, depth - 1)
            branch(x2, y2, direction + 1, depth - 1)

    branch(0, 0, 0, total_depth)
    return Drawing(segments=tuple(segments))


def mutate(genome: Genome, rng: RandomStream) -> Genome:
    """One-gene, one-step mutation; always changes the genome.

    Consumes exactly 2 rng draws: gene index, then direction. A step
    that would leave a gene at its bound (no-op) is flipped to the
    opposite direction, so the child differs from the parent in exactly
    one gene by exactly 1.
    """
    index = rng.randrange(GENE_COUNT)
    step = 1 if rng.randrange(2) == 1 else -1
    lo, hi = GENE_BOUNDS[index]
    value = genome.genes()[index] + step
    if not lo <= value <= hi:
        value = genome.genes()[index] - step
    return genome.with_gene(index, value)


def mutation_fan(genome: Genome) -> list[Genome]:
    """All distinct one-step mutants of a genome.

    28 for a genome with no gene at a bound; fewer when boundary
    clamp-flips make the two directions coincide.
    """
    seen: set[tuple[int, ...]] = set()
    fan: list[Genome] = []
    for index in range(GENE_COUNT):
        for step in (-1, 1):
            lo, hi = GENE_BOUNDS[index]
            value = genome.genes()[index] + step
            if not lo <= value <= hi:
                value = genome.genes()[index] - step
            mutant = genome.with_gene(index, value)
            if mutant.genes() not in seen:
                seen.add(mutant.genes())
                fan.append(mutant)
    return fan


def bounding_box(drawing: Drawing) -> tuple[int, int, int, int]:
    """(min_x, min_y, max_x, max_y) over all segment endpoints."""
    xs = [c for s in drawing.segments for c in (s.x1, s.x2)]
    ys = [c for s in drawing.segments for c in (s.y1, s.y2)]
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(drawing: Drawing) -> str:
    """Serialize a drawing to byte-deterministic SVG text.

    The viewBox is the integer bounding box of all endpoints, padded on
    every side by ceil(5% of the larger box dimension), at least 1.
    Attribute order and number formatting are fixed; identical drawings
    render to identical bytes on every platform.
    """
    if not drawing.segments:
        raise EmptyDrawing("cannot render a drawing with no segments")
    min_x, min_y, max_x, max_y = bounding_box(drawing)
    span = max(max_x - min_x, max_y - min_y)
    margin = max(1, (5 * span + 99) // 100)
    vb_x = min_x - margin
    vb_y = min_y - margin
    vb_w = (max_x - min_x) + 2 * margin
    vb_h = (max_y - min_y) + 2 * margin
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb_x} {vb_y} {vb_w} {vb_h}">'
    ]
    for s in drawing.segments:
        r, g, b = s.color
        lines.append(
            f'<line x1="{s.x1}" y1="{s.y1}" x2="{s.x2}" y2="{s.y2}" '
            f'stroke="rgb({r},{g},{b})" stroke-width="{s.width}" '
            f'stroke-linecap="round"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def genome_to_json(genome: Genome) -> str:
    doc = {
        "shape": list(genome.shape),
        "depth": genome.depth,
        "color": list(genome.color),
        "thickness": genome.thickness,
        "price": genome.price_gene,
    }
    return json.dumps(doc, separators=(",", ":"))


def json_to_genome(text: str) -> Genome:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedGenome(f"invalid genome JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedGenome("genome document must be an object")
    missing = {"shape", "depth", "color", "thickness", "price"} - doc.keys()
    if missing:
        raise MalformedGenome(f"missing genome keys: {sorted(missing)}")
    shape = doc["shape"]
    color = doc["color"]
    if not isinstance(shape, list) or not isinstance(color, list):
        raise MalformedGenome("shape and color must be arrays")
    return Genome(
        shape=tuple(shape),
        depth=doc["depth"],
        color=tuple(color),
        thickness=doc["thickness"],
        price_gene=doc["price"],
    )
