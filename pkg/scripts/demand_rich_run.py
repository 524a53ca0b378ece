#!/usr/bin/env python3
"""Demand-rich scenario: 10 buyers, 2 keepers, 1000 ticks.

Writes the full export bundle (snapshot, DOT/Newick tree, stats CSV,
per-agent SVGs) so the resulting phylogeny can be rendered with
graphviz: `dot -Tsvg out/tree.dot -o tree.svg`.
"""

import argparse
from fractions import Fraction

from ledgerlife.gateway.cli import write_run_outputs
from ledgerlife.ledger import EconomicsParams, address_from_label
from ledgerlife.market import BuyerProfile, KeeperProfile
from ledgerlife.simkernel import BuyerSetup, KeeperSetup, ScenarioConfig, Simulation


def demand_rich_config(seed: int, ticks: int) -> ScenarioConfig:
    buyers = [
        BuyerSetup(
            BuyerProfile(
                address=address_from_label(f"buyer-{i}"),
                budget_per_tick=300,
                w_size=Fraction(1),
                utility_threshold=Fraction(-3),
                sample_size=5,
            ),
            balance=20_000,
        )
        for i in range(10)
    ]
    keepers = [
        KeeperSetup(
            KeeperProfile(address=address_from_label(f"keeper-{i}"), max_pokes_per_tick=2),
            balance=2_000,
        )
        for i in range(2)
    ]
    return ScenarioConfig(
        seed=seed,
        ticks=ticks,
        econ=EconomicsParams(base_price=60, poke_reward=10, child_endowment=0, gas_clone=20),
        buyers=buyers,
        keepers=keepers,
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=3)
    parser.add_argument("--ticks", type=int, default=1000)
    parser.add_argument("--out", default="out/demand_rich")
    args = parser.parse_args()

    sim = Simulation(demand_rich_config(args.seed, args.ticks))
    sim.run_until(args.ticks)
    write_run_outputs(args.out, sim)
    world = sim.world
    print(
        f"{len(world.agents)} agents, max generation {world.generation_max}, "
        f"{world.sold_count} NFTs sold for {world.sold_volume} Wei"
    )
    print(f"outputs in {args.out}")


if __name__ == "__main__":
    main()
