"""Minimal account-model ledger state machine.

Two account kinds, integer currency ("Wei"), flat per-call gas fees,
and strictly EOA-originated transactions. Gas is paid to a validator
sink account instead of being burned, so total supply is exactly
conserved (modulo explicit faucet events) and conservation can be
asserted with integer equality.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .morphogen import GENE_COUNT, Genome, genome_to_json
from .rng import RandomStream

Wei = int
Address = str

VALIDATOR_SINK: Address = "0x" + "00" * 20

EOA = "eoa"
AGENT_CONTRACT = "agent"

# Receipt / dispatch error codes.
OK = "ok"
ORIGIN_NOT_EOA = "OriginNotEoa"
INSUFFICIENT_GAS_FUNDS = "InsufficientGasFunds"
INSUFFICIENT_FUNDS = "InsufficientFunds"
PRICE_TOO_LOW = "PriceTooLow"
UNKNOWN_AGENT = "UnknownAgent"
UNKNOWN_TOKEN = "UnknownToken"
INSUFFICIENT_ENERGY = "InsufficientEnergy"

# Call kinds.
BUY_NFT = "buy_nft"
POKE = "poke"
TRANSFER = "transfer"


class LedgerError(Exception):
    """Hard error: malformed world construction (not a receipt error)."""


class DuplicateAddress(LedgerError):
    pass


class VmError(Exception):
    """Dispatch failure; caught by apply_transaction and rolled back."""

    def __init__(self, code: str):
        super().__init__(code)
        self.code = code


def address_from_label(label: str) -> Address:
    """Deterministic pseudo-address for config-declared accounts."""
    digest = hashlib.sha256(b"ledgerlife:addr:" + label.encode()).digest()
    return "0x" + digest[:20].hex()


def is_address(value: Any) -> bool:
    return (
        isinstance(value, str)
        and len(value) == 42
        and value.startswith("0x")
        and all(c in "0123456789abcdef" for c in value[2:])
    )


@dataclass
class Account:
    address: Address
    kind: str  # EOA | AGENT_CONTRACT
    balance: Wei
    nonce: int = 0


@dataclass(frozen=True)
class Transaction:
    origin: Address
    target: Address
    value: Wei
    call: str  # BUY_NFT | POKE | TRANSFER
    tick: int


@dataclass
class Receipt:
    status: str  # OK or an error code
    gas_charged: Wei
    events: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == OK

    def to_json_obj(self) -> dict:
        return {
            "status": self.status,
            "gas_charged": self.gas_charged,
            "events": self.events,
        }


@dataclass(frozen=True)
class GasSchedule:
    gas_buy: Wei = 5
    gas_poke: Wei = 7
    gas_transfer: Wei = 1

    def fee_for(self, call: str) -> Wei:
        return {BUY_NFT: self.gas_buy, POKE: self.gas_poke, TRANSFER: self.gas_transfer}[call]


@dataclass(frozen=True)
class EconomicsParams:
    base_price: Wei = 100
    poke_reward: Wei = 10
    child_endowment: Wei = 0
    gas_clone: Wei = 50

    @property
    def replication_threshold(self) -> Wei:
        return self.gas_clone + self.poke_reward + self.child_endowment


@dataclass
class AgentState:
    address: Address
    genome: Genome
    parent: Optional[Address]  # None only for genesis
    generation: int
    born_at: int
    children: list[Address] = field(default_factory=list)
    logic_ref: str = "biomorph-logic-v1"


@dataclass
class NftToken:
    token_id: int
    minter: Address
    owner: Address
    genome_snapshot: Genome
    svg_hash: str


class WorldState:
    """Full ledger state: the unit of determinism and snapshotting.

    Single-writer: exactly one logical thread mutates a world at a
    time. Read-only snapshots (clone()) may be shared freely.
    """

    def __init__(self, gas: GasSchedule, econ: EconomicsParams):
        self.gas = gas
        self.econ = econ
        self.tick: int = 0
        self.accounts: dict[Address, Account] = {}
        self.agents: dict[Address, AgentState] = {}
        self.tokens: dict[int, NftToken] = {}
        self.next_token_id: int = 1
        self.event_log: list[dict] = []
        self.next_seq: int = 0
        self.initial_supply: Wei = 0
        self.faucet_total: Wei = 0
        self.sold_count: int = 0
        self.sold_volume: Wei = 0
        # Incremental stats accumulators (genomes are immutable, agents
        # are never deleted, so these only ever grow).
        self.gene_sums: list[int] = [0] * GENE_COUNT
        self.generation_sum: int = 0
        self.generation_max: int = 0

    # -- construction -----------------------------------------------------

    def _add_account(self, account: Account) -> None:
        if account.address in self.accounts:
            raise DuplicateAddress(account.address)
        if account.balance < 0:
            raise LedgerError(f"negative balance for {account.address}")
        self.accounts[account.address] = account

    def register_agent(self, agent: AgentState, balance: Wei) -> None:
        self._add_account(Account(agent.address, AGENT_CONTRACT, balance))
        self.agents[agent.address] = agent
        self.gene_sums = [a + b for a, b in zip(self.gene_sums, agent.genome.genes())]
        self.generation_sum += agent.generation
        self.generation_max = max(self.generation_max, agent.generation)

    def create_eoa(self, address: Address, balance: Wei) -> None:
        self._add_account(Account(address, EOA, balance))

    # -- balance arithmetic (checked) -------------------------------------

    def credit(self, address: Address, amount: Wei) -> None:
        if amount < 0:
            raise LedgerError("credit amount must be non-negative")
        self.accounts[address].balance += amount

    def debit(self, address: Address, amount: Wei, code: str = INSUFFICIENT_FUNDS) -> None:
        if amount < 0:
            raise LedgerError("debit amount must be non-negative")
        account = self.accounts[address]
        if account.balance < amount:
            raise VmError(code)
        account.balance -= amount

    # -- events ------------------------------------------------------------

    def emit(self, event: dict) -> dict:
        record = {"seq": self.next_seq, "tick": self.tick, **event}
        self.next_seq += 1
        self.event_log.append(record)
        return record

    def faucet(self, address: Address, amount: Wei) -> None:
        """The one sanctioned supply change; recorded as a distinct event."""
        if address not in self.accounts:
            self.create_eoa(address, 0)
        self.credit(address, amount)
        self.faucet_total += amount
        self.emit({"type": "Faucet", "to": address, "amount": amount})

    # -- snapshots ---------------------------------------------------------

    def clone(self) -> "WorldState":
        return copy.deepcopy(self)

    def restore_from(self, other: "WorldState") -> None:
        self.__dict__.update(copy.deepcopy(other.__dict__))

    def accounts_doc(self) -> list[dict]:
        """Canonical account listing, sorted by address, integers only."""
        return [
            {
                "address": a.address,
                "balance": a.balance,
                "kind": a.kind,
                "nonce": a.nonce,
            }
            for a in sorted(self.accounts.values(), key=lambda a: a.address)
        ]

    def to_doc(self) -> dict:
        return {
            "accounts": self.accounts_doc(),
            "agents": [
                {
                    "address": ag.address,
                    "born_at": ag.born_at,
                    "children": list(ag.children),
                    "generation": ag.generation,
                    "genome": json.loads(genome_to_json(ag.genome)),
                    "logic_ref": ag.logic_ref,
                    "parent": ag.parent,
                }
                for ag in sorted(self.agents.values(), key=lambda a: a.address)
            ],
            "econ": {
                "base_price": self.econ.base_price,
                "child_endowment": self.econ.child_endowment,
                "gas_clone": self.econ.gas_clone,
                "poke_reward": self.econ.poke_reward,
            },
            "event_log": self.event_log,
            "faucet_total": self.faucet_total,
            "gas": {
                "buy": self.gas.gas_buy,
                "poke": self.gas.gas_poke,
                "transfer": self.gas.gas_transfer,
            },
            "initial_supply": self.initial_supply,
            "next_seq": self.next_seq,
            "next_token_id": self.next_token_id,
            "sold_count": self.sold_count,
            "sold_volume": self.sold_volume,
            "tick": self.tick,
            "tokens": [
                {
                    "genome_snapshot": json.loads(genome_to_json(t.genome_snapshot)),
                    "minter": t.minter,
                    "owner": t.owner,
                    "svg_hash": t.svg_hash,
                    "token_id": t.token_id,
                }
                for _, t in sorted(self.tokens.items())
            ],
        }

    def state_hash(self) -> str:
        canonical = json.dumps(self.to_doc(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def init_world(
    gas: GasSchedule,
    econ: EconomicsParams,
    eoas: dict[Address, Wei],
    genesis_agents: list[tuple[Address, Genome, Wei]],
) -> WorldState:
    """Create a world: validator sink, funded EOAs, genesis agents, tick 0."""
    world = WorldState(gas, econ)
    world.create_eoa(VALIDATOR_SINK, 0)
    for address, balance in eoas.items():
        world.create_eoa(address, balance)
    for address, genome, balance in genesis_agents:
        agent = AgentState(
            address=address, genome=genome, parent=None, generation=0, born_at=0
        )
        world.register_agent(agent, balance)
    world.initial_supply = total_supply(world)
    return world


def total_supply(world: WorldState) -> Wei:
    return sum(a.balance for a in world.accounts.values())


def apply_transaction(
    world: WorldState, tx: Transaction, rng: Optional[RandomStream] = None
) -> Receipt:
    """Apply one EOA-originated transaction, mutating the world in place.

    Gas is charged up front and kept even when the dispatched call
    fails, so an Err receipt leaves the world changed only by
    (origin -gas, sink +gas, origin nonce +1). An origin that is
    unknown, not an EOA, or unable to cover gas changes nothing at
    all. Atomicity contract for dispatch handlers: they raise VmError
    only before their first state mutation, so a failed call needs no
    rollback.
    """
    from . import agentvm  # local import: agentvm builds on this module

    origin = world.accounts.get(tx.origin)
    if origin is None or origin.kind != EOA:
        return Receipt(status=ORIGIN_NOT_EOA, gas_charged=0)
    fee = world.gas.fee_for(tx.call)
    if origin.balance < fee:
        return Receipt(status=INSUFFICIENT_GAS_FUNDS, gas_charged=0)

    origin.balance -= fee
    world.accounts[VALIDATOR_SINK].balance += fee
    origin.nonce += 1

    try:
        if tx.call == TRANSFER:
            world.debit(tx.origin, tx.value)
            if tx.target not in world.accounts:
                world.create_eoa(tx.target, 0)
            world.credit(tx.target, tx.value)
            events: list[dict] = []
        elif tx.call == BUY_NFT:
            events = agentvm.buy_nft(world, tx.origin, tx.target, tx.value)
        elif tx.call == POKE:
            events = agentvm.poke(world, tx.origin, tx.target, rng)
        else:
            raise LedgerError(f"unknown call kind {tx.call!r}")
    except VmError as err:
        return Receipt(status=err.code, gas_charged=fee)

    return Receipt(status=OK, gas_charged=fee, events=events)
