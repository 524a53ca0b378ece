"""Agent contract semantics.

Price-gated lazy-mint NFT sales, the withdraw-pattern poke trigger,
and minimal-proxy style replication: every agent carries its own
genome storage but shares one logic_ref, and children are cloned at
deterministically derived addresses.

Dispatch handlers obey the ledger's atomicity contract: all VmError
raises happen before the first state mutation.
"""

from __future__ import annotations

import hashlib
from typing import Optional

from .ledger import (
    AgentState,
    Address,
    EconomicsParams,
    INSUFFICIENT_ENERGY,
    INSUFFICIENT_FUNDS,
    NftToken,
    PRICE_TOO_LOW,
    UNKNOWN_AGENT,
    UNKNOWN_TOKEN,
    VALIDATOR_SINK,
    VmError,
    Wei,
    WorldState,
)
from .morphogen import Genome, develop, mutate, render_svg
from .rng import RandomStream


def agent_price(agent: AgentState, econ: EconomicsParams) -> Wei:
    """Sale price encoded by the price gene: base_price * (1 + gene)."""
    return econ.base_price * (1 + agent.genome.price_gene)


def phenotype_svg(genome: Genome) -> str:
    return render_svg(develop(genome))


def phenotype_svg_hash(genome: Genome) -> str:
    return hashlib.sha256(phenotype_svg(genome).encode()).hexdigest()


def derive_child_address(parent: Address, nonce: int) -> Address:
    """Deterministic child address from (parent bytes, deploy nonce)."""
    payload = bytes.fromhex(parent[2:]) + nonce.to_bytes(8, "big")
    return "0x" + hashlib.sha256(payload).digest()[:20].hex()


def buy_nft(world: WorldState, buyer: Address, agent_addr: Address, value: Wei) -> list[dict]:
    """Mint-on-purchase sale: full attached value goes to the agent."""
    agent = world.agents.get(agent_addr)
    if agent is None:
        raise VmError(UNKNOWN_AGENT)
    price = agent_price(agent, world.econ)
    if value < price:
        raise VmError(PRICE_TOO_LOW)
    if world.accounts[buyer].balance < value:
        raise VmError(INSUFFICIENT_FUNDS)

    world.debit(buyer, value)
    world.credit(agent_addr, value)
    token = NftToken(
        token_id=world.next_token_id,
        minter=agent_addr,
        owner=buyer,
        genome_snapshot=agent.genome,
        svg_hash=phenotype_svg_hash(agent.genome),
    )
    world.next_token_id += 1
    world.tokens[token.token_id] = token
    world.sold_count += 1
    world.sold_volume += value
    event = world.emit(
        {
            "type": "Sold",
            "token_id": token.token_id,
            "price": value,
            "minter": agent_addr,
            "buyer": buyer,
        }
    )
    return [event]


def poke(
    world: WorldState,
    keeper: Address,
    agent_addr: Address,
    rng: Optional[RandomStream],
) -> list[dict]:
    """Withdraw-pattern trigger: replicate if the agent can afford it.

    The replication threshold is gas_clone + poke_reward +
    child_endowment; a ripe agent pays the keeper's reward, the clone
    gas, and the child's endowment out of its own balance, then deploys
    one mutated child at a derived address. Consumes exactly the two
    rng draws of mutate(), and only on success.
    """
    agent = world.agents.get(agent_addr)
    if agent is None:
        raise VmError(UNKNOWN_AGENT)
    econ = world.econ
    threshold = econ.replication_threshold
    agent_account = world.accounts[agent_addr]
    if agent_account.balance < threshold:
        raise VmError(INSUFFICIENT_ENERGY)
    if rng is None:
        raise ValueError("poke requires a random stream for mutation")

    world.debit(agent_addr, threshold)
    world.credit(keeper, econ.poke_reward)
    world.credit(VALIDATOR_SINK, econ.gas_clone)

    child_addr = derive_child_address(agent_addr, agent_account.nonce)
    child = AgentState(
        address=child_addr,
        genome=mutate(agent.genome, rng),
        parent=agent_addr,
        generation=agent.generation + 1,
        born_at=world.tick,
        logic_ref=agent.logic_ref,
    )
    world.register_agent(child, econ.child_endowment)
    agent.children.append(child_addr)
    agent_account.nonce += 1

    replicated = world.emit(
        {"type": "Replicated", "child": child_addr, "parent": agent_addr}
    )
    rewarded = world.emit(
        {"type": "RewardPaid", "keeper": keeper, "amount": econ.poke_reward}
    )
    return [replicated, rewarded]


def owner_of(world: WorldState, token_id: int) -> Address:
    token = world.tokens.get(token_id)
    if token is None:
        raise VmError(UNKNOWN_TOKEN)
    return token.owner


def tokens_of_minter(world: WorldState, minter: Address) -> list[NftToken]:
    return [t for _, t in sorted(world.tokens.items()) if t.minter == minter]
