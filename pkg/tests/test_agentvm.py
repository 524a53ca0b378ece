"""Agent contract semantics: sales, pokes, lineage, token registry."""

import hashlib

import pytest
from hypothesis import given, settings, strategies as st

from ledgerlife.agentvm import (
    agent_price,
    derive_child_address,
    owner_of,
    phenotype_svg,
)
from ledgerlife.ledger import (
    AgentState,
    BUY_NFT,
    EconomicsParams,
    INSUFFICIENT_ENERGY,
    POKE,
    Transaction,
    UNKNOWN_AGENT,
    UNKNOWN_TOKEN,
    VALIDATOR_SINK,
    VmError,
    apply_transaction,
    total_supply,
)
from ledgerlife.rng import RandomStream

from conftest import BUYER, GENESIS, KEEPER, make_genome, make_world


def buy(world, value, rng=None, buyer=BUYER, agent=GENESIS):
    return apply_transaction(
        world, Transaction(origin=buyer, target=agent, value=value, call=BUY_NFT, tick=0), rng
    )


def poke(world, rng, keeper=KEEPER, agent=GENESIS):
    return apply_transaction(
        world, Transaction(origin=keeper, target=agent, value=0, call=POKE, tick=0), rng
    )


# -- pricing ---------------------------------------------------------------

@pytest.mark.parametrize("price_gene,expected", [(0, 100), (7, 800), (15, 1600)])
def test_agent_price(price_gene, expected):
    agent = AgentState(
        address=GENESIS,
        genome=make_genome(price_gene=price_gene),
        parent=None,
        generation=0,
        born_at=0,
    )
    assert agent_price(agent, EconomicsParams(base_price=100)) == expected


# -- buying ----------------------------------------------------------------

def test_buy_at_exact_price_succeeds():
    world = make_world(genome=make_genome(price_gene=0))
    price = world.econ.base_price
    receipt = buy(world, price)
    assert receipt.ok
    assert receipt.events[0]["type"] == "Sold"


def test_full_attached_value_credited_to_agent():
    world = make_world(genome=make_genome(price_gene=0))
    price = world.econ.base_price
    buy(world, price + 10)
    assert world.accounts[GENESIS].balance == price + 10


def test_repeat_buys_monotone_ids_same_art():
    world = make_world(genome=make_genome(price_gene=0))
    price = world.econ.base_price
    buy(world, price)
    buy(world, price)
    assert sorted(world.tokens) == [1, 2]
    assert world.tokens[1].svg_hash == world.tokens[2].svg_hash
    expected = hashlib.sha256(
        phenotype_svg(world.agents[GENESIS].genome).encode()
    ).hexdigest()
    assert world.tokens[1].svg_hash == expected


def test_buy_unknown_agent():
    world = make_world()
    receipt = buy(world, 500, agent=derive_child_address(GENESIS, 0))
    assert receipt.status == UNKNOWN_AGENT


def test_owner_of():
    world = make_world(genome=make_genome(price_gene=0))
    buy(world, world.econ.base_price)
    assert owner_of(world, 1) == BUYER
    with pytest.raises(VmError) as exc:
        owner_of(world, 99)
    assert exc.value.code == UNKNOWN_TOKEN


def test_every_token_has_one_owner():
    world = make_world(genome=make_genome(price_gene=0), buyer_balance=50_000)
    for _ in range(10):
        buy(world, world.econ.base_price)
    assert len(world.tokens) == 10
    for token in world.tokens.values():
        assert world.accounts[token.owner].kind == "eoa"


# -- poking / replication --------------------------------------------------

def test_poke_below_threshold_no_child():
    world = make_world()
    threshold = world.econ.replication_threshold
    world.accounts[GENESIS].balance = threshold - 1
    world.initial_supply = total_supply(world)
    receipt = poke(world, RandomStream(1))
    assert receipt.status == INSUFFICIENT_ENERGY
    assert len(world.agents) == 1


def test_poke_at_threshold_replicates_to_zero():
    world = make_world()
    threshold = world.econ.replication_threshold
    world.accounts[GENESIS].balance = threshold
    world.initial_supply = total_supply(world)
    keeper_before = world.accounts[KEEPER].balance
    sink_before = world.accounts[VALIDATOR_SINK].balance
    receipt = poke(world, RandomStream(1))
    assert receipt.ok
    assert world.accounts[GENESIS].balance == 0
    assert len(world.agents) == 2
    assert total_supply(world) == world.initial_supply
    assert (
        world.accounts[KEEPER].balance
        == keeper_before + world.econ.poke_reward - world.gas.gas_poke
    )
    assert (
        world.accounts[VALIDATOR_SINK].balance
        == sink_before + world.econ.gas_clone + world.gas.gas_poke
    )
    types = [e["type"] for e in receipt.events]
    assert types == ["Replicated", "RewardPaid"]


def test_child_lineage_and_clone_semantics():
    world = make_world()
    world.accounts[GENESIS].balance = world.econ.replication_threshold
    world.initial_supply = total_supply(world)
    poke(world, RandomStream(7))
    parent = world.agents[GENESIS]
    (child_addr,) = parent.children
    child = world.agents[child_addr]
    assert child.parent == GENESIS
    assert child.generation == 1
    assert child.logic_ref == parent.logic_ref
    diffs = [a != b for a, b in zip(child.genome.genes(), parent.genome.genes())]
    assert sum(diffs) == 1
    assert world.accounts[child_addr].balance == world.econ.child_endowment


def test_replication_gate_matches_brute_force_oracle():
    econ = EconomicsParams(base_price=100, poke_reward=9, child_endowment=3, gas_clone=17)
    threshold = econ.replication_threshold
    for balance in range(0, 2 * threshold + 1):
        world = make_world(econ=econ)
        world.accounts[GENESIS].balance = balance
        world.initial_supply = total_supply(world)
        receipt = poke(world, RandomStream(balance))
        assert receipt.ok == (balance >= threshold)


def test_poke_unknown_agent():
    world = make_world()
    receipt = poke(world, RandomStream(1), agent=derive_child_address(GENESIS, 5))
    assert receipt.status == UNKNOWN_AGENT


# -- address derivation ----------------------------------------------------

def test_derive_child_address_pure():
    assert derive_child_address(GENESIS, 3) == derive_child_address(GENESIS, 3)


@given(st.integers(0, 10_000), st.integers(0, 10_000))
@settings(max_examples=200, deadline=None)
def test_derive_child_address_injective_in_nonce(a, b):
    if a != b:
        assert derive_child_address(GENESIS, a) != derive_child_address(GENESIS, b)


@given(st.text(min_size=1, max_size=12), st.text(min_size=1, max_size=12), st.integers(0, 100))
@settings(max_examples=200, deadline=None)
def test_derive_child_address_distinct_parents(la, lb, nonce):
    from ledgerlife.ledger import address_from_label

    pa, pb = address_from_label(la), address_from_label(lb)
    if pa != pb:
        assert derive_child_address(pa, nonce) != derive_child_address(pb, nonce)
