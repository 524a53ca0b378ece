"""HTTP/JSON service exposing a live world to human participants.

All mutations funnel through one lock (single-writer); reads see a
state in which any previously acknowledged mutation is applied.
Humans get simulated EOAs from a faucet: no keys, no signatures, a
session token stands in for key ownership. Faucet issuance is the one
sanctioned supply change and is logged as a distinguished event.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import agentvm
from ..ledger import (
    BUY_NFT,
    INSUFFICIENT_ENERGY,
    INSUFFICIENT_FUNDS,
    INSUFFICIENT_GAS_FUNDS,
    POKE,
    PRICE_TOO_LOW,
    Receipt,
    Transaction,
    UNKNOWN_AGENT,
    address_from_label,
)
from ..morphogen import genome_to_json
from ..simkernel import ScenarioConfig, Simulation, build_tree, export_tree_dot

_STATUS_FOR_ERROR = {
    PRICE_TOO_LOW: 409,
    INSUFFICIENT_ENERGY: 409,
    INSUFFICIENT_FUNDS: 402,
    INSUFFICIENT_GAS_FUNDS: 402,
    UNKNOWN_AGENT: 404,
}


class Gateway:
    def __init__(self, config: ScenarioConfig, scripted: bool = True):
        self.sim = Simulation(config)
        self.scripted = scripted
        self.lock = threading.Lock()
        self.sessions: dict[str, dict] = {}

    # -- views -------------------------------------------------------------

    def _sold_by_minter(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for token in self.sim.world.tokens.values():
            counts[token.minter] = counts.get(token.minter, 0) + 1
        return counts

    def agent_summary(self, address: str, sold_counts: dict[str, int]) -> dict:
        world = self.sim.world
        agent = world.agents[address]
        balance = world.accounts[address].balance
        return {
            "address": address,
            "generation": agent.generation,
            "balance": balance,
            "price": agentvm.agent_price(agent, world.econ),
            "born_at": agent.born_at,
            "children_count": len(agent.children),
            "nfts_sold": sold_counts.get(address, 0),
            "ripe": balance >= world.econ.replication_threshold,
        }

    def list_agents(self) -> list[dict]:
        sold = self._sold_by_minter()
        world = self.sim.world
        ordered = sorted(
            world.agents, key=lambda a: (world.agents[a].generation, a)
        )
        return [self.agent_summary(addr, sold) for addr in ordered]

    # -- mutations ---------------------------------------------------------

    def open_session(self, faucet_amount: int) -> dict:
        with self.lock:
            token = secrets.token_hex(16)
            eoa = address_from_label(f"session:{token}")
            self.sim.world.faucet(eoa, faucet_amount)
            session = {
                "session_id": token,
                "bound_eoa": eoa,
                "created_at": int(time.time()),
            }
            self.sessions[token] = session
            return session

    def submit(self, origin: str, target: str, value: int, call: str) -> Receipt:
        with self.lock:
            tx = Transaction(
                origin=origin,
                target=target,
                value=value,
                call=call,
                tick=self.sim.world.tick,
            )
            return self.sim.apply(tx)

    def advance(self, count: int) -> int:
        with self.lock:
            for _ in range(count):
                if self.scripted:
                    self.sim.step()
                else:
                    # Time passes without scripted actors.
                    self.sim.stats.sample(self.sim.world)
                    self.sim.world.tick += 1
            return self.sim.world.tick


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": message})


def _receipt_response(receipt: Receipt) -> JSONResponse:
    if receipt.ok:
        return JSONResponse(status_code=200, content=receipt.to_json_obj())
    status = _STATUS_FOR_ERROR.get(receipt.status, 409)
    return JSONResponse(
        status_code=status,
        content={"error": receipt.status, "receipt": receipt.to_json_obj()},
    )


async def _json_body(request: Request) -> Optional[dict]:
    try:
        body = json.loads(await request.body() or b"{}")
    except json.JSONDecodeError:
        return None
    return body if isinstance(body, dict) else None


def create_app(config: ScenarioConfig, scripted: bool = True) -> FastAPI:
    gateway = Gateway(config, scripted=scripted)
    app = FastAPI(title="ledgerlife gateway")
    app.state.gateway = gateway
    # The gallery UI is served separately; sessions are toy tokens, so
    # a permissive CORS policy costs nothing.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/agents")
    def get_agents():
        with gateway.lock:
            return gateway.list_agents()

    @app.get("/api/agents/{addr}")
    def get_agent(addr: str):
        with gateway.lock:
            world = gateway.sim.world
            if addr not in world.agents:
                return JSONResponse(status_code=404, content={"error": UNKNOWN_AGENT})
            agent = world.agents[addr]
            detail = gateway.agent_summary(addr, gateway._sold_by_minter())
            detail.update(
                {
                    "parent": agent.parent,
                    "children": list(agent.children),
                    "logic_ref": agent.logic_ref,
                    "genome": json.loads(genome_to_json(agent.genome)),
                }
            )
            return detail

    @app.get("/api/agents/{addr}/phenotype.svg")
    def get_phenotype(addr: str):
        with gateway.lock:
            world = gateway.sim.world
            if addr not in world.agents:
                return JSONResponse(status_code=404, content={"error": UNKNOWN_AGENT})
            svg = agentvm.phenotype_svg(world.agents[addr].genome)
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/api/session")
    async def post_session(request: Request):
        body = await _json_body(request)
        if body is None:
            return _bad_request("malformed JSON body")
        amount = body.get("faucet_amount")
        if not isinstance(amount, int) or isinstance(amount, bool) or amount < 0:
            return _bad_request("faucet_amount must be a non-negative integer")
        if amount > gateway.sim.config.faucet_cap:
            return _bad_request(
                f"faucet_amount exceeds cap {gateway.sim.config.faucet_cap}"
            )
        return gateway.open_session(amount)

    def _session_eoa(body: dict) -> Optional[str]:
        session = gateway.sessions.get(body.get("session_id"))
        return None if session is None else session["bound_eoa"]

    @app.post("/api/agents/{addr}/buy")
    async def post_buy(addr: str, request: Request):
        body = await _json_body(request)
        if body is None:
            return _bad_request("malformed JSON body")
        origin = _session_eoa(body)
        if origin is None:
            return _bad_request("unknown session")
        value = body.get("value")
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            return _bad_request("value must be a non-negative integer")
        return _receipt_response(gateway.submit(origin, addr, value, BUY_NFT))

    @app.post("/api/agents/{addr}/poke")
    async def post_poke(addr: str, request: Request):
        body = await _json_body(request)
        if body is None:
            return _bad_request("malformed JSON body")
        origin = _session_eoa(body)
        if origin is None:
            return _bad_request("unknown session")
        return _receipt_response(gateway.submit(origin, addr, 0, POKE))

    @app.post("/api/tick")
    async def post_tick(request: Request):
        body = await _json_body(request)
        if body is None:
            return _bad_request("malformed JSON body")
        count = body.get("count", 1)
        if not isinstance(count, int) or isinstance(count, bool) or count < 0:
            return _bad_request("count must be a non-negative integer")
        return {"tick": gateway.advance(count)}

    @app.get("/api/tree.dot")
    def get_tree():
        with gateway.lock:
            dot = export_tree_dot(build_tree(gateway.sim.world))
        return PlainTextResponse(dot)

    @app.get("/api/stats")
    def get_stats():
        with gateway.lock:
            return gateway.sim.stats.to_doc()

    @app.get("/api/events")
    def get_events(since: int = 0, limit: int = 500):
        with gateway.lock:
            log = gateway.sim.world.event_log
            page = [e for e in log if e["seq"] >= since][:limit]
            next_seq = page[-1]["seq"] + 1 if page else gateway.sim.world.next_seq
        return {"events": page, "next": next_seq}

    return app
