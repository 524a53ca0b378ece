"""Deterministic discrete-time driver.

Scenario configuration, the per-tick schedule (all buyers act in
config order, then all keepers, then stats are sampled), phylogeny
and snapshot export. One tick is one buyers+keepers round; a single
rng stream seeded from the config drives the whole run, with a frozen
draw order: buyer sampling draws first, then mutation draws inside
applied pokes. Identical configs produce bit-identical outputs.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import ledger
from .ledger import (
    Address,
    EconomicsParams,
    GasSchedule,
    Transaction,
    Wei,
    WorldState,
    address_from_label,
    apply_transaction,
    init_world,
    is_address,
)
from .market import (
    BuyerProfile,
    KeeperProfile,
    RANDOM_POLICY,
    UTILITY_POLICY,
    buyer_act,
    keeper_act,
)
from .morphogen import GENE_NAMES, Genome, genome_to_json, json_to_genome
from .rng import RandomStream

SCENARIO_FORMAT = "ledgerlife-scenario"
SNAPSHOT_FORMAT = "ledgerlife-snapshot"
FORMAT_VERSION = 1


class ConfigInvalid(ValueError):
    pass


class SnapshotError(ValueError):
    pass


class VersionMismatch(SnapshotError):
    pass


class CorruptSnapshot(SnapshotError):
    pass


class MultiRootForest(ValueError):
    pass


# -- rational config values ----------------------------------------------


def _frac_to_doc(value: Fraction):
    if value.denominator == 1:
        return int(value)
    return [value.numerator, value.denominator]


def _frac_from_doc(doc) -> Fraction:
    if isinstance(doc, int):
        return Fraction(doc)
    if isinstance(doc, list) and len(doc) == 2:
        return Fraction(doc[0], doc[1])
    raise ConfigInvalid(f"expected integer or [num, den] rational, got {doc!r}")


# -- scenario configuration ----------------------------------------------


@dataclass
class BuyerSetup:
    profile: BuyerProfile
    balance: Wei


@dataclass
class KeeperSetup:
    profile: KeeperProfile
    balance: Wei


@dataclass
class ScenarioConfig:
    seed: int
    ticks: int
    gas: GasSchedule = field(default_factory=GasSchedule)
    econ: EconomicsParams = field(default_factory=EconomicsParams)
    genesis_address: Address = field(
        default_factory=lambda: address_from_label("genesis-agent")
    )
    genesis_genome: Genome = field(
        default_factory=lambda: Genome(
            shape=(2, 3, 4, 5, 4, 3, 2, 1),
            depth=4,
            color=(20, 90, 40),
            thickness=3,
            price_gene=0,
        )
    )
    genesis_balance: Wei = 0
    buyers: list[BuyerSetup] = field(default_factory=list)
    keepers: list[KeeperSetup] = field(default_factory=list)
    faucet_cap: Wei = 100_000

    def validate(self) -> list[str]:
        """Raise ConfigInvalid on errors; return non-fatal warnings."""
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ConfigInvalid("seed must fit in 64 unsigned bits")
        if self.ticks < 0:
            raise ConfigInvalid("ticks must be non-negative")
        addresses = [self.genesis_address]
        addresses += [b.profile.address for b in self.buyers]
        addresses += [k.profile.address for k in self.keepers]
        for addr in addresses:
            if not is_address(addr):
                raise ConfigInvalid(f"malformed address {addr!r}")
        if len(set(addresses)) != len(addresses):
            raise ConfigInvalid("duplicate address in scenario")
        if ledger.VALIDATOR_SINK in addresses:
            raise ConfigInvalid("validator sink address is reserved")
        balances = [self.genesis_balance, self.faucet_cap]
        balances += [b.balance for b in self.buyers]
        balances += [k.balance for k in self.keepers]
        if any(b < 0 for b in balances):
            raise ConfigInvalid("balances must be non-negative")
        warnings: list[str] = []
        if self.econ.poke_reward <= self.gas.gas_poke:
            warnings.append(
                "poke_reward <= gas_poke: keepers have no incentive and the "
                "economy will stall"
            )
        return warnings

    def to_doc(self) -> dict:
        return {
            "format": SCENARIO_FORMAT,
            "version": FORMAT_VERSION,
            "seed": self.seed,
            "ticks": self.ticks,
            "gas": {
                "buy": self.gas.gas_buy,
                "poke": self.gas.gas_poke,
                "transfer": self.gas.gas_transfer,
            },
            "economics": {
                "base_price": self.econ.base_price,
                "poke_reward": self.econ.poke_reward,
                "child_endowment": self.econ.child_endowment,
                "gas_clone": self.econ.gas_clone,
            },
            "genesis": {
                "address": self.genesis_address,
                "balance": self.genesis_balance,
                "genome": json.loads(genome_to_json(self.genesis_genome)),
            },
            "buyers": [
                {
                    "address": b.profile.address,
                    "balance": b.balance,
                    "budget_per_tick": b.profile.budget_per_tick,
                    "taste": {
                        "size": _frac_to_doc(b.profile.w_size),
                        "fill": _frac_to_doc(b.profile.w_fill),
                        "color": _frac_to_doc(b.profile.w_color),
                    },
                    "preferred_color": list(b.profile.preferred_color),
                    "utility_threshold": _frac_to_doc(b.profile.utility_threshold),
                    "sample_size": b.profile.sample_size,
                    "price_penalty": _frac_to_doc(b.profile.price_penalty),
                    "policy": b.profile.policy,
                }
                for b in self.buyers
            ],
            "keepers": [
                {
                    "address": k.profile.address,
                    "balance": k.balance,
                    "max_pokes_per_tick": k.profile.max_pokes_per_tick,
                }
                for k in self.keepers
            ],
            "faucet_cap": self.faucet_cap,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ScenarioConfig":
        try:
            if doc.get("format") != SCENARIO_FORMAT:
                raise ConfigInvalid(f"not a scenario document: {doc.get('format')!r}")
            if doc.get("version") != FORMAT_VERSION:
                raise ConfigInvalid(f"unsupported scenario version {doc.get('version')!r}")
            gas_doc = doc.get("gas", {})
            econ_doc = doc.get("economics", {})
            genesis = doc["genesis"]
            config = cls(
                seed=doc["seed"],
                ticks=doc["ticks"],
                gas=GasSchedule(
                    gas_buy=gas_doc.get("buy", 5),
                    gas_poke=gas_doc.get("poke", 7),
                    gas_transfer=gas_doc.get("transfer", 1),
                ),
                econ=EconomicsParams(
                    base_price=econ_doc.get("base_price", 100),
                    poke_reward=econ_doc.get("poke_reward", 10),
                    child_endowment=econ_doc.get("child_endowment", 0),
                    gas_clone=econ_doc.get("gas_clone", 50),
                ),
                genesis_address=genesis["address"],
                genesis_genome=json_to_genome(json.dumps(genesis["genome"])),
                genesis_balance=genesis["balance"],
                buyers=[
                    BuyerSetup(
                        profile=BuyerProfile(
                            address=b["address"],
                            budget_per_tick=b["budget_per_tick"],
                            w_size=_frac_from_doc(b["taste"]["size"]),
                            w_fill=_frac_from_doc(b["taste"]["fill"]),
                            w_color=_frac_from_doc(b["taste"]["color"]),
                            preferred_color=tuple(b["preferred_color"]),
                            utility_threshold=_frac_from_doc(b["utility_threshold"]),
                            sample_size=b["sample_size"],
                            price_penalty=_frac_from_doc(b.get("price_penalty", 1)),
                            policy=b.get("policy", UTILITY_POLICY),
                        ),
                        balance=b["balance"],
                    )
                    for b in doc.get("buyers", [])
                ],
                keepers=[
                    KeeperSetup(
                        profile=KeeperProfile(
                            address=k["address"],
                            max_pokes_per_tick=k["max_pokes_per_tick"],
                        ),
                        balance=k["balance"],
                    )
                    for k in doc.get("keepers", [])
                ],
                faucet_cap=doc.get("faucet_cap", 100_000),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigInvalid):
                raise
            raise ConfigInvalid(f"malformed scenario document: {exc}") from exc
        config.validate()
        return config

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigInvalid("scenario document must be an object")
        return cls.from_doc(doc)


# -- run statistics -------------------------------------------------------


@dataclass
class RunStats:
    """Per-tick series; sums are kept instead of means so everything
    in the snapshot stays an exact integer."""

    population: list[int] = field(default_factory=list)
    ripe: list[int] = field(default_factory=list)
    nfts_sold: list[int] = field(default_factory=list)
    volume: list[int] = field(default_factory=list)
    generation_sum: list[int] = field(default_factory=list)
    generation_max: list[int] = field(default_factory=list)
    gene_sums: list[list[int]] = field(default_factory=list)

    def sample(self, world: WorldState) -> None:
        threshold = world.econ.replication_threshold
        self.population.append(len(world.agents))
        self.ripe.append(
            sum(1 for a in world.agents if world.accounts[a].balance >= threshold)
        )
        self.nfts_sold.append(world.sold_count)
        self.volume.append(world.sold_volume)
        self.generation_sum.append(world.generation_sum)
        self.generation_max.append(world.generation_max)
        self.gene_sums.append(list(world.gene_sums))

    def __len__(self) -> int:
        return len(self.population)

    def to_doc(self) -> dict:
        return {
            "population": self.population,
            "ripe": self.ripe,
            "nfts_sold": self.nfts_sold,
            "volume": self.volume,
            "generation_sum": self.generation_sum,
            "generation_max": self.generation_max,
            "gene_sums": self.gene_sums,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "RunStats":
        return cls(
            population=list(doc["population"]),
            ripe=list(doc["ripe"]),
            nfts_sold=list(doc["nfts_sold"]),
            volume=list(doc["volume"]),
            generation_sum=list(doc["generation_sum"]),
            generation_max=list(doc["generation_max"]),
            gene_sums=[list(row) for row in doc["gene_sums"]],
        )

    def to_csv(self) -> str:
        """One row per tick; gene means are fixed 6-decimal strings."""
        out = io.StringIO()
        mean_cols = ",".join(f"mean_{name}" for name in GENE_NAMES)
        out.write(
            "tick,population,ripe,nfts_sold,volume,mean_generation,"
            f"max_generation,{mean_cols}\n"
        )
        for t in range(len(self.population)):
            pop = self.population[t]
            mean_gen = f"{self.generation_sum[t] / pop:.6f}" if pop else "0.000000"
            means = ",".join(
                f"{s / pop:.6f}" if pop else "0.000000" for s in self.gene_sums[t]
            )
            out.write(
                f"{t},{pop},{self.ripe[t]},{self.nfts_sold[t]},{self.volume[t]},"
                f"{mean_gen},{self.generation_max[t]},{means}\n"
            )
        return out.getvalue()


# -- phylogeny ------------------------------------------------------------


@dataclass(frozen=True)
class PhyloNode:
    address: Address
    parent: Optional[Address]
    generation: int
    born_at: int
    genome: Genome
    active: bool


@dataclass(frozen=True)
class PhyloTree:
    nodes: tuple[PhyloNode, ...]  # sorted by (born_at, address)
    edges: tuple[tuple[Address, Address], ...]  # parent -> child, child birth order


def build_tree(world: WorldState) -> PhyloTree:
    threshold = world.econ.replication_threshold
    nodes = tuple(
        PhyloNode(
            address=a.address,
            parent=a.parent,
            generation=a.generation,
            born_at=a.born_at,
            genome=a.genome,
            active=world.accounts[a.address].balance >= threshold,
        )
        for a in sorted(world.agents.values(), key=lambda a: (a.born_at, a.address))
    )
    edges = tuple(
        (node.parent, node.address) for node in nodes if node.parent is not None
    )
    return PhyloTree(nodes=nodes, edges=edges)


def _short(address: Address) -> str:
    return address[2:10]


def export_tree_dot(tree: PhyloTree) -> str:
    lines = ["digraph phylogeny {"]
    for node in tree.nodes:
        lines.append(
            f'  "{_short(node.address)}" '
            f'[label="gen {node.generation} @tick {node.born_at}"];'
        )
    for parent, child in tree.edges:
        lines.append(f'  "{_short(parent)}" -> "{_short(child)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_tree_newick(tree: PhyloTree) -> str:
    """Newick text for a single-root tree; branch lengths are birth-tick
    deltas and children are ordered by birth."""
    roots = [n for n in tree.nodes if n.parent is None]
    if len(roots) != 1:
        raise MultiRootForest(f"expected exactly 1 root, found {len(roots)}")
    by_addr = {n.address: n for n in tree.nodes}
    children: dict[Address, list[PhyloNode]] = {n.address: [] for n in tree.nodes}
    for n in tree.nodes:
        if n.parent is not None:
            children[n.parent].append(n)
    for kids in children.values():
        kids.sort(key=lambda n: (n.born_at, n.address))

    def render(node: PhyloNode) -> str:
        kids = children[node.address]
        label = _short(node.address)
        if node.parent is not None:
            parent = by_addr[node.parent]
            label += f":{node.born_at - parent.born_at}"
        if not kids:
            return label
        return "(" + ",".join(render(k) for k in kids) + ")" + label

    return render(roots[0]) + ";"


# -- the simulation loop --------------------------------------------------


class Simulation:
    """Owns one world, one rng stream, and one stats series."""

    def __init__(
        self,
        config: ScenarioConfig,
        world: Optional[WorldState] = None,
        rng: Optional[RandomStream] = None,
        stats: Optional[RunStats] = None,
    ):
        self.warnings = config.validate()
        self.config = config
        if world is None:
            eoas = {b.profile.address: b.balance for b in config.buyers}
            eoas.update({k.profile.address: k.balance for k in config.keepers})
            world = init_world(
                config.gas,
                config.econ,
                eoas,
                [(config.genesis_address, config.genesis_genome, config.genesis_balance)],
            )
        self.world = world
        self.rng = rng if rng is not None else RandomStream(config.seed)
        self.stats = stats if stats is not None else RunStats()

    def apply(self, tx: Transaction) -> ledger.Receipt:
        return apply_transaction(self.world, tx, self.rng)

    def step(self) -> None:
        """One tick: buyers act in config order (transactions applied
        immediately in emission order), then keepers, then stats."""
        for buyer in self.config.buyers:
            for tx in buyer_act(self.world, buyer.profile, self.rng):
                self.apply(tx)
        for keeper in self.config.keepers:
            for tx in keeper_act(self.world, keeper.profile):
                self.apply(tx)
        self.stats.sample(self.world)
        self.world.tick += 1

    def run_until(self, tick: int) -> None:
        while self.world.tick < tick:
            self.step()

    # -- snapshot / restore ------------------------------------------------

    def snapshot(self) -> str:
        body = {
            "format": SNAPSHOT_FORMAT,
            "version": FORMAT_VERSION,
            "config": self.config.to_doc(),
            "rng": self.rng.state(),
            "stats": self.stats.to_doc(),
            "world": self.world.to_doc(),
        }
        line = json.dumps(body, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(line.encode()).hexdigest()
        return f"{line}\nsha256:{digest}\n"

    @classmethod
    def restore(cls, text: str) -> "Simulation":
        lines = text.strip("\n").split("\n")
        if len(lines) != 2 or not lines[1].startswith("sha256:"):
            raise CorruptSnapshot("snapshot must be one JSON line plus a hash footer")
        line, footer = lines
        if hashlib.sha256(line.encode()).hexdigest() != footer[len("sha256:"):]:
            raise CorruptSnapshot("content hash mismatch")
        body = json.loads(line)
        if body.get("format") != SNAPSHOT_FORMAT:
            raise CorruptSnapshot(f"not a snapshot document: {body.get('format')!r}")
        if body.get("version") != FORMAT_VERSION:
            raise VersionMismatch(f"unsupported snapshot version {body.get('version')!r}")
        config = ScenarioConfig.from_doc(body["config"])
        world = _world_from_doc(body["world"])
        rng = RandomStream.from_state(body["rng"])
        stats = RunStats.from_doc(body["stats"])
        return cls(config, world=world, rng=rng, stats=stats)


def _world_from_doc(doc: dict) -> WorldState:
    gas = GasSchedule(
        gas_buy=doc["gas"]["buy"],
        gas_poke=doc["gas"]["poke"],
        gas_transfer=doc["gas"]["transfer"],
    )
    econ = EconomicsParams(
        base_price=doc["econ"]["base_price"],
        poke_reward=doc["econ"]["poke_reward"],
        child_endowment=doc["econ"]["child_endowment"],
        gas_clone=doc["econ"]["gas_clone"],
    )
    world = WorldState(gas, econ)
    for a in doc["accounts"]:
        world.accounts[a["address"]] = ledger.Account(
            address=a["address"], kind=a["kind"], balance=a["balance"], nonce=a["nonce"]
        )
    for ag in doc["agents"]:
        agent = ledger.AgentState(
            address=ag["address"],
            genome=json_to_genome(json.dumps(ag["genome"])),
            parent=ag["parent"],
            generation=ag["generation"],
            born_at=ag["born_at"],
            children=list(ag["children"]),
            logic_ref=ag["logic_ref"],
        )
        world.agents[agent.address] = agent
        world.gene_sums = [
            x + y for x, y in zip(world.gene_sums, agent.genome.genes())
        ]
        world.generation_sum += agent.generation
        world.generation_max = max(world.generation_max, agent.generation)
    for t in doc["tokens"]:
        world.tokens[t["token_id"]] = ledger.NftToken(
            token_id=t["token_id"],
            minter=t["minter"],
            owner=t["owner"],
            genome_snapshot=json_to_genome(json.dumps(t["genome_snapshot"])),
            svg_hash=t["svg_hash"],
        )
    world.tick = doc["tick"]
    world.next_token_id = doc["next_token_id"]
    world.next_seq = doc["next_seq"]
    world.event_log = [dict(e) for e in doc["event_log"]]
    world.initial_supply = doc["initial_supply"]
    world.faucet_total = doc["faucet_total"]
    world.sold_count = doc["sold_count"]
    world.sold_volume = doc["sold_volume"]
    return world


def run(config: ScenarioConfig) -> tuple[WorldState, PhyloTree, RunStats]:
    """Execute a full scripted scenario from genesis."""
    sim = Simulation(config)
    sim.run_until(config.ticks)
    return sim.world, build_tree(sim.world), sim.stats
