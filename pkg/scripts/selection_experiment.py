#!/usr/bin/env python3
"""Selection-pressure experiment: taste-driven vs random buyers.

For each seed, runs a 500-tick economy with size-loving buyers and a
neutral control where buyers purchase uniformly at random, then
compares the population mean of the depth gene between first-quartile
and last-quartile births.
"""

import argparse
from fractions import Fraction

from ledgerlife.ledger import EconomicsParams, address_from_label
from ledgerlife.market import BuyerProfile, KeeperProfile
from ledgerlife.simkernel import BuyerSetup, KeeperSetup, ScenarioConfig, run


def selection_config(seed: int, ticks: int, policy: str) -> ScenarioConfig:
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
            balance=40_000,
        )
        for i in range(3)
    ]
    keepers = [
        KeeperSetup(
            KeeperProfile(address=address_from_label(f"keeper-{i}"), max_pokes_per_tick=1),
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


def quartile_depth_means(world, ticks):
    first = [a.genome.depth for a in world.agents.values() if a.born_at < ticks // 4]
    last = [a.genome.depth for a in world.agents.values() if a.born_at >= 3 * ticks // 4]
    return sum(first) / len(first), sum(last) / len(last)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--ticks", type=int, default=500)
    args = parser.parse_args()

    for policy in ("utility", "random"):
        upward = 0
        print(f"== {policy} buyers ==")
        for seed in range(args.seeds):
            world, _, _ = run(selection_config(seed, args.ticks, policy))
            first_mean, last_mean = quartile_depth_means(world, args.ticks)
            trend = "up" if last_mean >= first_mean else "down"
            upward += trend == "up"
            print(
                f"seed {seed}: {len(world.agents)} agents, depth mean "
                f"{first_mean:.3f} -> {last_mean:.3f} ({trend})"
            )
        print(f"{upward}/{args.seeds} seeds trend upward\n")


if __name__ == "__main__":
    main()
