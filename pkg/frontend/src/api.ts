/**
 * Typed client for the gateway HTTP/JSON API.
 *
 * The UI is stateless with respect to economics: every balance, price
 * and ripeness shown on screen comes out of these responses, never
 * from client-side math.
 */

export interface AgentCard {
  address: string;
  generation: number;
  balance: number;
  price: number;
  born_at: number;
  children_count: number;
  nfts_sold: number;
  ripe: boolean;
}

export interface AgentDetail extends AgentCard {
  parent: string | null;
  children: string[];
  logic_ref: string;
  genome: unknown;
}

export interface ReceiptEvent {
  seq: number;
  tick: number;
  type: string;
  [key: string]: unknown;
}

export interface Receipt {
  status: string;
  gas_charged: number;
  events: ReceiptEvent[];
}

export interface Session {
  session_id: string;
  bound_eoa: string;
  created_at: number;
}

export interface EventPage {
  events: ReceiptEvent[];
  next: number;
}

/** API failure carrying the server's verbatim error code. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    public readonly receipt?: Receipt,
  ) {
    super(code);
  }
}

/** Subset of fetch the client needs; tests substitute a fake. */
export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  phenotypeUrl(address: string): string {
    return `${this.baseUrl}/api/agents/${address}/phenotype.svg`;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      const code = typeof body?.error === "string" ? body.error : `HTTP ${response.status}`;
      throw new ApiError(response.status, code, body?.receipt);
    }
    return body as T;
  }

  listAgents(): Promise<AgentCard[]> {
    return this.request<AgentCard[]>("/api/agents");
  }

  agentDetail(address: string): Promise<AgentDetail> {
    return this.request<AgentDetail>(`/api/agents/${address}`);
  }

  openSession(faucetAmount: number): Promise<Session> {
    return this.request<Session>("/api/session", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ faucet_amount: faucetAmount }),
    });
  }

  buy(address: string, sessionId: string, value: number): Promise<Receipt> {
    return this.request<Receipt>(`/api/agents/${address}/buy`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, value }),
    });
  }

  poke(address: string, sessionId: string): Promise<Receipt> {
    return this.request<Receipt>(`/api/agents/${address}/poke`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session_id: sessionId }),
    });
  }

  events(since: number): Promise<EventPage> {
    return this.request<EventPage>(`/api/events?since=${since}`);
  }

  async treeDot(): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/tree.dot`);
    if (!response.ok) {
      throw new ApiError(response.status, `HTTP ${response.status}`);
    }
    return response.text();
  }
}
