"""Scripted EOA behavior: buyers and keepers.

Buyers stand in for the human selectors of an interactive-evolution
market; keepers run the withdraw pattern for profit. Both are pure
decision functions over a read-only world snapshot; the simulation
loop applies the transactions they emit.

Config-level numbers (taste weights, thresholds, the price penalty)
are exact rationals so scenario documents stay float-free; utility is
evaluated in float, which is fine because it never enters world state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .agentvm import agent_price
from .ledger import Address, BUY_NFT, POKE, Transaction, Wei, WorldState
from .morphogen import Drawing, Genome, bounding_box, develop
from .rng import RandomStream

UTILITY_POLICY = "utility"
RANDOM_POLICY = "random"

_COLOR_NORM = math.sqrt(3 * 255 * 255)


@dataclass
class BuyerProfile:
    address: Address
    budget_per_tick: Wei
    w_size: Fraction = Fraction(1)
    w_fill: Fraction = Fraction(0)
    w_color: Fraction = Fraction(0)
    preferred_color: tuple[int, int, int] = (0, 0, 0)
    utility_threshold: Fraction = Fraction(0)
    sample_size: int = 1
    price_penalty: Fraction = Fraction(1)
    policy: str = UTILITY_POLICY  # UTILITY_POLICY | RANDOM_POLICY

    def __post_init__(self) -> None:
        if self.sample_size < 1:
            raise ValueError("sample_size must be >= 1")
        if self.policy not in (UTILITY_POLICY, RANDOM_POLICY):
            raise ValueError(f"unknown buyer policy {self.policy!r}")


@dataclass
class KeeperProfile:
    address: Address
    max_pokes_per_tick: int = 1

    def __post_init__(self) -> None:
        if self.max_pokes_per_tick < 1:
            raise ValueError("max_pokes_per_tick must be >= 1")


@dataclass(frozen=True)
class FeatureVector:
    size: float
    fill: float
    color_dist: float


def _bbox_area(drawing: Drawing) -> int:
    min_x, min_y, max_x, max_y = bounding_box(drawing)
    return (max_x - min_x) * (max_y - min_y)


@lru_cache(maxsize=1)
def max_fill_area() -> int:
    """Bounding-box area of the extreme reference phenotype.

    The reference is the depth-8 genome with every shape gene at +9;
    fill values are normalized by this constant and clamped to [0, 1].
    """
    extreme = Genome(
        shape=(9,) * 8, depth=8, color=(0, 0, 0), thickness=1, price_gene=0
    )
    return _bbox_area(develop(extreme))


def phenotype_features(
    drawing: Drawing, genome: Genome, preferred_color: tuple[int, int, int]
) -> FeatureVector:
    size = (2 ** genome.depth - 1) / 255
    fill = min(1.0, _bbox_area(drawing) / max_fill_area())
    dr = genome.color[0] - preferred_color[0]
    dg = genome.color[1] - preferred_color[1]
    db = genome.color[2] - preferred_color[2]
    color_dist = math.sqrt(dr * dr + dg * dg + db * db) / _COLOR_NORM
    return FeatureVector(size=size, fill=fill, color_dist=color_dist)


@lru_cache(maxsize=65536)
def _cached_features(
    genome: Genome, preferred_color: tuple[int, int, int]
) -> FeatureVector:
    return phenotype_features(develop(genome), genome, preferred_color)


def _utility(world: WorldState, profile: BuyerProfile, agent_addr: Address) -> float:
    agent = world.agents[agent_addr]
    f = _cached_features(agent.genome, profile.preferred_color)
    price = agent_price(agent, world.econ)
    return (
        float(profile.w_size) * f.size
        + float(profile.w_fill) * f.fill
        - float(profile.w_color) * f.color_dist
        - float(profile.price_penalty) * price / world.econ.base_price
    )


def _sample_agents(
    world: WorldState, sample_size: int, rng: RandomStream
) -> list[Address]:
    """Uniform sample of distinct agents, in the drawn order.

    Agents are indexed in address order. When the population is not
    larger than the sample size all agents are taken and no rng draws
    are consumed; otherwise exactly sample_size draws are consumed.
    """
    addresses = sorted(world.agents)
    if len(addresses) <= sample_size:
        return addresses
    return [addresses[i] for i in rng.sample_indices(len(addresses), sample_size)]


def buyer_act(
    world: WorldState, profile: BuyerProfile, rng: RandomStream
) -> list[Transaction]:
    """Emit at most one affordable BuyNft for the buyer's pick of a sample.

    The utility policy buys the argmax-utility agent if its utility
    clears the threshold; the random policy (neutral control) picks one
    sampled agent uniformly, consuming one extra draw. Affordability:
    price + gas_buy within both current balance and budget_per_tick,
    with the attached value equal to the exact price.
    """
    candidates = _sample_agents(world, profile.sample_size, rng)
    if not candidates:
        return []

    if profile.policy == RANDOM_POLICY:
        pick = candidates[rng.randrange(len(candidates))]
    else:
        best = None
        best_u = -math.inf
        for addr in sorted(candidates):
            u = _utility(world, profile, addr)
            if u > best_u:
                best, best_u = addr, u
        if best_u < float(profile.utility_threshold):
            return []
        pick = best

    price = agent_price(world.agents[pick], world.econ)
    cost = price + world.gas.gas_buy
    balance = world.accounts[profile.address].balance
    if cost > min(balance, profile.budget_per_tick):
        return []
    return [
        Transaction(
            origin=profile.address,
            target=pick,
            value=price,
            call=BUY_NFT,
            tick=world.tick,
        )
    ]


def keeper_act(world: WorldState, profile: KeeperProfile) -> list[Transaction]:
    """Poke up to max_pokes_per_tick ripe agents, scanning address order.

    A rational keeper only acts when poke_reward exceeds gas_poke;
    otherwise the withdraw pattern pays nothing and the economy stalls.
    """
    if world.econ.poke_reward <= world.gas.gas_poke:
        return []
    threshold = world.econ.replication_threshold
    txs: list[Transaction] = []
    for addr in sorted(world.agents):
        if len(txs) >= profile.max_pokes_per_tick:
            break
        if world.accounts[addr].balance >= threshold:
            txs.append(
                Transaction(
                    origin=profile.address,
                    target=addr,
                    value=0,
                    call=POKE,
                    tick=world.tick,
                )
            )
    return txs
