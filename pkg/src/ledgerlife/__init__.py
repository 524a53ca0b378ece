"""Self-replicating, self-funding biomorph agents on a minimal account ledger."""

from .ledger import (
    Account,
    Address,
    AgentState,
    EconomicsParams,
    GasSchedule,
    NftToken,
    Receipt,
    Transaction,
    VALIDATOR_SINK,
    Wei,
    WorldState,
    address_from_label,
    apply_transaction,
    init_world,
    total_supply,
)
from .morphogen import Drawing, Genome, Segment, develop, mutate, render_svg
from .rng import RandomStream
from .simkernel import RunStats, PhyloTree, ScenarioConfig, Simulation, run

__all__ = [
    "Account",
    "Address",
    "AgentState",
    "Drawing",
    "EconomicsParams",
    "GasSchedule",
    "Genome",
    "NftToken",
    "PhyloTree",
    "RandomStream",
    "Receipt",
    "RunStats",
    "ScenarioConfig",
    "Segment",
    "Simulation",
    "Transaction",
    "VALIDATOR_SINK",
    "Wei",
    "WorldState",
    "address_from_label",
    "apply_transaction",
    "develop",
    "init_world",
    "mutate",
    "render_svg",
    "run",
    "total_supply",
]

__version__ = "0.1.0"
