/**
 * DOM-free state machine behind the gallery page.
 *
 * Holds the cards, the pagination cursor, the session, and the event
 * cursor; every number it exposes came from an API response. At most
 * one mutation is in flight at a time; there is no optimistic update,
 * the grid only changes after a refresh.
 */

import { AgentCard, ApiError, GatewayClient, Receipt, Session } from "./api";
import { PAGE_SIZE, pageCount } from "./cards";

export interface StatusMessage {
  kind: "info" | "success" | "error";
  text: string;
}

export class GalleryController {
  cards: AgentCard[] = [];
  page = 0;
  session: Session | null = null;
  treeDot = "";
  status: StatusMessage | null = null;
  unreachable = false;
  mutationPending = false;
  private eventCursor = 0;

  constructor(
    private readonly client: GatewayClient,
    private readonly onChange: () => void = () => {},
  ) {}

  private notify(): void {
    this.onChange();
  }

  private setStatus(kind: StatusMessage["kind"], text: string): void {
    this.status = { kind, text };
    this.notify();
  }

  async connect(faucetAmount: number): Promise<void> {
    try {
      this.session = await this.client.openSession(faucetAmount);
      await this.refresh();
      this.setStatus("info", `session funded with ${faucetAmount} Wei`);
    } catch (error) {
      this.fail(error);
    }
  }

  async refresh(): Promise<void> {
    try {
      this.cards = await this.client.listAgents();
      this.treeDot = await this.client.treeDot();
      this.unreachable = false;
      this.page = Math.min(this.page, pageCount(this.cards.length, PAGE_SIZE) - 1);
      this.notify();
    } catch (error) {
      this.fail(error);
    }
  }

  /** Event-feed poll: refresh only when something actually happened. */
  async poll(): Promise<void> {
    try {
      const page = await this.client.events(this.eventCursor);
      this.unreachable = false;
      if (page.events.length > 0) {
        this.eventCursor = page.next;
        await this.refresh();
      }
    } catch (error) {
      this.fail(error);
    }
  }

  nextPage(): void {
    this.page = Math.min(this.page + 1, pageCount(this.cards.length, PAGE_SIZE) - 1);
    this.notify();
  }

  prevPage(): void {
    this.page = Math.max(this.page - 1, 0);
    this.notify();
  }

  /** Buy at the given value; the server is the authority on price. */
  async buy(address: string, value: number): Promise<Receipt | null> {
    return this.mutate(async () => {
      const receipt = await this.client.buy(address, this.requireSession(), value);
      const sold = receipt.events.find((event) => event.type === "Sold");
      this.setStatus("success", `bought token #${sold ? sold["token_id"] : "?"}`);
      return receipt;
    });
  }

  async poke(address: string): Promise<Receipt | null> {
    return this.mutate(async () => {
      const receipt = await this.client.poke(address, this.requireSession());
      const child = receipt.events.find((event) => event.type === "Replicated");
      this.setStatus("success", `replicated: child ${child ? child["child"] : "?"}`);
      return receipt;
    });
  }

  private requireSession(): string {
    if (!this.session) {
      throw new ApiError(400, "NoSession");
    }
    return this.session.session_id;
  }

  private async mutate(action: () => Promise<Receipt>): Promise<Receipt | null> {
    if (this.mutationPending) {
      return null;
    }
    this.mutationPending = true;
    this.notify();
    try {
      const receipt = await action();
      await this.refresh();
      return receipt;
    } catch (error) {
      this.fail(error);
      return null;
    } finally {
      this.mutationPending = false;
      this.notify();
    }
  }

  private fail(error: unknown): void {
    if (error instanceof ApiError) {
      // Surface the server's error code verbatim.
      this.setStatus("error", error.code);
    } else {
      this.unreachable = true;
      this.setStatus("error", "service unreachable");
    }
  }
}
