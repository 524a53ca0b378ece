"""Development, mutation, and SVG serialization."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from ledgerlife.morphogen import (
    EmptyDrawing,
    GENE_BOUNDS,
    GENE_COUNT,
    Drawing,
    Genome,
    MalformedGenome,
    Segment,
    develop,
    genome_to_json,
    json_to_genome,
    mutate,
    mutation_fan,
    render_svg,
)
from ledgerlife.rng import RandomStream

from conftest import StubRng, make_genome

genomes = st.builds(
    Genome,
    shape=st.tuples(*[st.integers(-9, 9)] * 8),
    depth=st.integers(1, 8),
    color=st.tuples(*[st.integers(0, 255)] * 3),
    thickness=st.integers(1, 8),
    price_gene=st.integers(0, 15),
)


# -- genome validation -----------------------------------------------------

def test_bounds_validated_on_construction():
    with pytest.raises(MalformedGenome):
        make_genome(depth=9)
    with pytest.raises(MalformedGenome):
        make_genome(shape=(10, 0, 0, 0, 0, 0, 0, 0))
    with pytest.raises(MalformedGenome):
        make_genome(shape=(1, 2, 3, 4, 5, 6, 7))  # arity 7
    with pytest.raises(MalformedGenome):
        make_genome(color=(0, 0, 256))
    with pytest.raises(MalformedGenome):
        make_genome(price_gene=-1)


def test_gene_layout_has_14_slots():
    assert GENE_COUNT == 14
    assert len(make_genome().genes()) == 14


# -- develop ---------------------------------------------------------------

def test_depth_one_is_single_root_segment():
    g = make_genome(shape=(1, 2, 3, 6, 5, 4, 3, 2), depth=1, thickness=2)
    d = develop(g)
    assert d.segments == (Segment(0, 0, 0, -6, 2, g.color),)


def test_depth_two_hand_trace():
    # Root (0,0)->(0,-6) w2, then minus child to (-2,-7) and plus child
    # to (2,-7), both w1, in that emission order.
    g = Genome(
        shape=(2, 0, 0, 3, 1, 0, 0, 0),
        depth=2,
        color=(0, 0, 0),
        thickness=2,
        price_gene=0,
    )
    assert develop(g).segments == (
        Segment(0, 0, 0, -6, 2, (0, 0, 0)),
        Segment(0, -6, -2, -7, 1, (0, 0, 0)),
        Segment(0, -6, 2, -7, 1, (0, 0, 0)),
    )


@given(genomes)
@settings(max_examples=200, deadline=None)
def test_segment_count_is_2_pow_depth_minus_1(g):
    assert len(develop(g).segments) == 2 ** g.depth - 1


@given(genomes)
@settings(max_examples=200, deadline=None)
def test_bilateral_symmetry(g):
    segs = develop(g).segments
    mirrored = sorted((-s.x1, s.y1, -s.x2, s.y2) for s in segs)
    assert mirrored == sorted((s.x1, s.y1, s.x2, s.y2) for s in segs)


def test_develop_is_pure():
    g = make_genome()
    assert develop(g) == develop(g)


# -- mutate ----------------------------------------------------------------

def test_mutation_draw_protocol():
    # Draws: gene index, then direction (1 -> +1). Index 2 is g3.
    g = make_genome(shape=(0, 0, 2, 0, 0, 0, 0, 0))
    child = mutate(g, StubRng([2, 1]))
    assert child.shape[2] == 3
    assert sum(a != b for a, b in zip(child.genes(), g.genes())) == 1


def test_mutation_at_bound_flips_direction():
    g = make_genome(depth=8)
    child = mutate(g, StubRng([8, 1]))  # +1 on depth at max
    assert child.depth == 7


@given(st.integers(0, 2**64 - 1))
@settings(max_examples=300, deadline=None)
def test_mutation_always_one_gene_one_step(seed):
    rng = RandomStream(seed)
    g = make_genome()
    child = mutate(g, rng)
    diffs = [
        (a, b) for a, b in zip(g.genes(), child.genes()) if a != b
    ]
    assert len(diffs) == 1
    assert abs(diffs[0][0] - diffs[0][1]) == 1
    assert rng.counter == 2  # exactly two draws consumed


def test_mutation_fan_counts():
    interior = make_genome()
    fan = mutation_fan(interior)
    assert len(fan) == 2 * GENE_COUNT
    assert len({m.genes() for m in fan}) == len(fan)
    # All genes at a bound: each gene's two directions collapse to one.
    at_bounds = Genome(
        shape=(9,) * 8, depth=8, color=(255, 255, 255), thickness=8, price_gene=15
    )
    assert len(mutation_fan(at_bounds)) == GENE_COUNT
    for m in mutation_fan(at_bounds):
        assert m.genes() != at_bounds.genes()


@given(genomes.filter(lambda g: g.depth >= 5), st.integers(0, GENE_COUNT - 2), st.sampled_from([-1, 1]))
@settings(max_examples=200, deadline=None)
def test_non_price_mutation_changes_phenotype(g, index, step):
    # At depth >= 5 every direction-table entry is exercised, so any
    # non-price gene step moves geometry (or color/width). Shallower
    # genomes can carry silent shape genes.
    child = g.with_gene(index, _stepped(g, index, step))
    assert develop(child) != develop(g)


def test_price_mutation_leaves_phenotype_unchanged():
    g = make_genome()
    child = g.with_gene(GENE_COUNT - 1, g.price_gene + 1)
    assert develop(child) == develop(g)


def _stepped(g, index, step):
    lo, hi = GENE_BOUNDS[index]
    value = g.genes()[index] + step
    if not lo <= value <= hi:
        value = g.genes()[index] - step
    return value


# -- render_svg ------------------------------------------------------------

def test_single_segment_viewbox():
    doc = render_svg(Drawing(segments=(Segment(0, 0, 0, -6, 2, (0, 0, 0)),)))
    assert 'viewBox="-1 -7 2 8"' in doc
    assert doc.count("<line") == 1


def test_render_empty_drawing_rejected():
    with pytest.raises(EmptyDrawing):
        render_svg(Drawing(segments=()))


def test_render_byte_deterministic():
    g = make_genome()
    assert render_svg(develop(g)) == render_svg(develop(g))


@given(genomes)
@settings(max_examples=50, deadline=None)
def test_mirrored_rendering_negates_x_coordinates(g):
    doc = render_svg(develop(g))
    coords = []
    for line in doc.splitlines():
        if line.startswith("<line"):
            parts = dict(
                kv.split("=") for kv in line[6:-2].split(" ") if "=" in kv
            )
            coords.append(
                (
                    int(parts["x1"].strip('"')),
                    int(parts["y1"].strip('"')),
                    int(parts["x2"].strip('"')),
                    int(parts["y2"].strip('"')),
                )
            )
    assert sorted(coords) == sorted((-x1, y1, -x2, y2) for x1, y1, x2, y2 in coords)


# -- JSON ------------------------------------------------------------------

@given(genomes)
@settings(max_examples=100, deadline=None)
def test_json_round_trip(g):
    assert json_to_genome(genome_to_json(g)) == g


def test_json_canonical_text_round_trip():
    text = genome_to_json(make_genome())
    assert genome_to_json(json_to_genome(text)) == text


def test_json_rejects_bad_documents():
    with pytest.raises(MalformedGenome):
        json_to_genome("not json")
    with pytest.raises(MalformedGenome):
        json_to_genome(json.dumps({"shape": [0] * 8, "depth": 1}))  # missing keys
    with pytest.raises(MalformedGenome):
        json_to_genome(
            json.dumps(
                {"shape": [0] * 7, "depth": 1, "color": [0, 0, 0], "thickness": 1, "price": 0}
            )
        )
    with pytest.raises(MalformedGenome):
        json_to_genome(
            json.dumps(
                {"shape": [0] * 8, "depth": 9, "color": [0, 0, 0], "thickness": 1, "price": 0}
            )
        )
