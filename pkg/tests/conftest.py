from fractions import Fraction

import pytest

from ledgerlife.ledger import (
    EconomicsParams,
    GasSchedule,
    address_from_label,
    init_world,
)
from ledgerlife.market import BuyerProfile, KeeperProfile
from ledgerlife.morphogen import Genome
from ledgerlife.simkernel import BuyerSetup, KeeperSetup, ScenarioConfig


def make_genome(**overrides) -> Genome:
    """Interior genome (no gene at a bound) unless overridden."""
    fields = dict(
        shape=(2, -3, 4, 5, 1, -2, 3, 0),
        depth=4,
        color=(120, 60, 200),
        thickness=3,
        price_gene=2,
    )
    fields.update(overrides)
    return Genome(**fields)


GENESIS = address_from_label("genesis-agent")
BUYER = address_from_label("test-buyer")
KEEPER = address_from_label("test-keeper")


def make_world(
    genesis_balance=0,
    buyer_balance=10_000,
    keeper_balance=1_000,
    econ=None,
    gas=None,
    genome=None,
):
    return init_world(
        gas or GasSchedule(),
        econ or EconomicsParams(),
        {BUYER: buyer_balance, KEEPER: keeper_balance},
        [(GENESIS, genome or make_genome(), genesis_balance)],
    )


def make_config(
    seed=7,
    ticks=50,
    n_buyers=3,
    n_keepers=2,
    buyer_balance=20_000,
    policy="utility",
    **overrides,
):
    buyers = [
        BuyerSetup(
            BuyerProfile(
                address=address_from_label(f"buyer-{i}"),
                budget_per_tick=300,
                w_size=Fraction(1),
                utility_threshold=Fraction(-3),
                sample_size=5,
                policy=policy,
            ),
            balance=buyer_balance,
        )
        for i in range(n_buyers)
    ]
    keepers = [
        KeeperSetup(
            KeeperProfile(address=address_from_label(f"keeper-{i}"), max_pokes_per_tick=2),
            balance=2_000,
        )
        for i in range(n_keepers)
    ]
    fields = dict(
        seed=seed,
        ticks=ticks,
        econ=EconomicsParams(base_price=60, poke_reward=10, child_endowment=0, gas_clone=20),
        genesis_balance=0,
        genesis_genome=make_genome(price_gene=0),
        buyers=buyers,
        keepers=keepers,
    )
    fields.update(overrides)
    return ScenarioConfig(**fields)


class StubRng:
    """Replays a fixed draw sequence; for pinning the mutation protocol."""

    def __init__(self, draws):
        self.draws = list(draws)

    def randrange(self, n):
        value = self.draws.pop(0)
        assert 0 <= value < n
        return value


@pytest.fixture
def world():
    return make_world()
