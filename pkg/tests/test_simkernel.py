"""Run loop, exports, snapshot/restore, determinism."""

import re

import pytest

from ledgerlife.ledger import total_supply
from ledgerlife.simkernel import (
    ConfigInvalid,
    CorruptSnapshot,
    MultiRootForest,
    PhyloNode,
    PhyloTree,
    ScenarioConfig,
    Simulation,
    VersionMismatch,
    build_tree,
    export_tree_dot,
    export_tree_newick,
    run,
)

from conftest import make_config, make_genome


# -- config ----------------------------------------------------------------

def test_config_round_trip():
    config = make_config()
    assert ScenarioConfig.from_json(config.to_json()).to_json() == config.to_json()


def test_config_rejects_duplicates():
    config = make_config()
    config.buyers[1].profile.address = config.buyers[0].profile.address
    with pytest.raises(ConfigInvalid):
        config.validate()


def test_config_warns_on_unprofitable_keepers():
    from ledgerlife.ledger import EconomicsParams

    config = make_config(econ=EconomicsParams(poke_reward=1))
    warnings = config.validate()
    assert any("stall" in w for w in warnings)


def test_config_from_json_rejects_garbage():
    with pytest.raises(ConfigInvalid):
        ScenarioConfig.from_json("{")
    with pytest.raises(ConfigInvalid):
        ScenarioConfig.from_json("{}")


# -- run loop --------------------------------------------------------------

def test_zero_ticks_is_init_world():
    config = make_config(ticks=0)
    world, tree, stats = run(config)
    assert len(world.agents) == 1
    assert len(tree.nodes) == 1
    assert len(stats) == 0
    assert world.sold_count == 0


def test_no_buyers_population_stays_one():
    config = make_config(n_buyers=0, ticks=30)
    world, tree, _ = run(config)
    assert len(world.agents) == 1


def test_runs_are_bit_identical():
    hashes = {run(make_config(ticks=40))[0].state_hash() for _ in range(3)}
    assert len(hashes) == 1


def test_conservation_every_tick():
    config = make_config(ticks=40)
    sim = Simulation(config)
    for _ in range(config.ticks):
        sim.step()
        assert total_supply(sim.world) == sim.world.initial_supply


def test_population_is_monotone_and_stats_lengths_match():
    config = make_config(ticks=40)
    _, _, stats = run(config)
    assert len(stats) == 40
    assert all(a <= b for a, b in zip(stats.population, stats.population[1:]))


def test_tree_matches_world():
    world, tree, _ = run(make_config(ticks=40))
    assert {n.address for n in tree.nodes} == set(world.agents)
    roots = [n for n in tree.nodes if n.parent is None]
    assert len(tree.edges) == len(tree.nodes) - len(roots)
    for node in tree.nodes:
        if node.parent is not None:
            parent = world.agents[node.parent]
            assert node.address in parent.children
            assert node.generation == parent.generation + 1


# -- DOT export ------------------------------------------------------------

def test_dot_genesis_only():
    _, tree, _ = run(make_config(ticks=0))
    dot = export_tree_dot(tree)
    assert dot.count("[label=") == 1
    assert "->" not in dot


def test_dot_node_count_matches_registry():
    world, tree, _ = run(make_config(ticks=40))
    dot = export_tree_dot(tree)
    assert dot.count("[label=") == len(world.agents)
    assert dot.count("->") == len(world.agents) - 1


# -- Newick export ---------------------------------------------------------

def _node(addr, parent, gen, born):
    return PhyloNode(
        address=addr,
        parent=parent,
        generation=gen,
        born_at=born,
        genome=make_genome(),
        active=False,
    )


def _addr(tag):
    return "0x" + (tag * 40)[:40]


def test_newick_single_node():
    tree = PhyloTree(nodes=(_node(_addr("a"), None, 0, 0),), edges=())
    assert export_tree_newick(tree) == _addr("a")[2:10] + ";"


def test_newick_tiny_tree_hand_built():
    p, c1, c2 = _addr("a"), _addr("b"), _addr("c")
    tree = PhyloTree(
        nodes=(
            _node(p, None, 0, 0),
            _node(c1, p, 1, 5),
            _node(c2, p, 1, 9),
        ),
        edges=((p, c1), (p, c2)),
    )
    assert (
        export_tree_newick(tree)
        == f"({c1[2:10]}:5,{c2[2:10]}:9){p[2:10]};"
    )


def test_newick_rejects_forest():
    tree = PhyloTree(
        nodes=(_node(_addr("a"), None, 0, 0), _node(_addr("b"), None, 0, 0)),
        edges=(),
    )
    with pytest.raises(MultiRootForest):
        export_tree_newick(tree)


def parse_newick_node_count(text: str) -> int:
    """Independent minimal Newick parser: counts named nodes."""
    assert text.endswith(";")
    body = text[:-1]
    pos = 0

    def node() -> int:
        nonlocal pos
        count = 0
        if pos < len(body) and body[pos] == "(":
            pos += 1  # consume '('
            count += node()
            while body[pos] == ",":
                pos += 1
                count += node()
            assert body[pos] == ")"
            pos += 1
        match = re.match(r"[0-9a-f]+(:\d+)?", body[pos:])
        assert match, f"expected node label at {pos}"
        pos += match.end()
        return count + 1

    total = node()
    assert pos == len(body)
    return total


def test_newick_round_trip_count():
    world, tree, _ = run(make_config(ticks=40))
    text = export_tree_newick(tree)
    assert parse_newick_node_count(text) == len(world.agents)


# -- snapshot / restore ----------------------------------------------------

def test_snapshot_restore_identity():
    sim = Simulation(make_config(ticks=30))
    sim.run_until(30)
    snap = sim.snapshot()
    assert Simulation.restore(snap).snapshot() == snap


def test_resume_equivalence():
    full = Simulation(make_config(ticks=60))
    full.run_until(60)
    half = Simulation(make_config(ticks=60))
    half.run_until(30)
    resumed = Simulation.restore(half.snapshot())
    resumed.run_until(60)
    assert resumed.world.state_hash() == full.world.state_hash()
    assert resumed.snapshot() == full.snapshot()


def test_truncated_snapshot_rejected():
    sim = Simulation(make_config(ticks=5))
    sim.run_until(5)
    snap = sim.snapshot()
    with pytest.raises(CorruptSnapshot):
        Simulation.restore(snap[: len(snap) // 2])
    with pytest.raises(CorruptSnapshot):
        Simulation.restore(snap[:-20] + "0" * 18 + "\n")


def test_version_mismatch_rejected():
    import hashlib
    import json

    sim = Simulation(make_config(ticks=1))
    body = json.loads(sim.snapshot().split("\n")[0])
    body["version"] = 999
    line = json.dumps(body, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(line.encode()).hexdigest()
    with pytest.raises(VersionMismatch):
        Simulation.restore(f"{line}\nsha256:{digest}\n")


# -- CSV -------------------------------------------------------------------

def test_stats_csv_shape():
    _, _, stats = run(make_config(ticks=10))
    lines = stats.to_csv().strip().split("\n")
    assert lines[0].startswith("tick,population,ripe,nfts_sold,volume,")
    assert len(lines) == 11
    assert all(len(line.split(",")) == len(lines[0].split(",")) for line in lines)
