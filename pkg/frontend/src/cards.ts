/**
 * Gallery grid: sorting, pagination, and HTML rendering of agent cards.
 *
 * Rendering returns HTML strings so the grid logic is testable without
 * a DOM; app.ts owns attaching them to the document.
 */

import { AgentCard } from "./api";

export const PAGE_SIZE = 24;

/** Generation first, address second: stable across polls. */
export function sortCards(cards: AgentCard[]): AgentCard[] {
  return [...cards].sort((a, b) => {
    if (a.generation !== b.generation) {
      return a.generation - b.generation;
    }
    return a.address < b.address ? -1 : a.address > b.address ? 1 : 0;
  });
}

export function pageCount(total: number, pageSize: number = PAGE_SIZE): number {
  return Math.max(1, Math.ceil(total / pageSize));
}

export function pageOf(
  cards: AgentCard[],
  page: number,
  pageSize: number = PAGE_SIZE,
): AgentCard[] {
  const pages = pageCount(cards.length, pageSize);
  const clamped = Math.min(Math.max(page, 0), pages - 1);
  return cards.slice(clamped * pageSize, (clamped + 1) * pageSize);
}

export function shortAddress(address: string): string {
  return address.slice(2, 10);
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderCard(card: AgentCard, phenotypeUrl: string): string {
  const poke = card.ripe
    ? `<button class="poke" data-action="poke" data-address="${card.address}">Poke</button>`
    : "";
  return [
    `<div class="card${card.ripe ? " ripe" : ""}" data-address="${card.address}">`,
    `<img src="${escapeHtml(phenotypeUrl)}" alt="phenotype ${shortAddress(card.address)}">`,
    `<div class="meta">`,
    `<span class="addr">${shortAddress(card.address)}</span>`,
    `<span class="gen">gen ${card.generation}</span>`,
    `<span class="price">${card.price} Wei</span>`,
    `<span class="balance">balance ${card.balance}</span>`,
    `<span class="sold">${card.nfts_sold} sold</span>`,
    `</div>`,
    `<input class="value" type="number" min="${card.price}" value="${card.price}">`,
    `<button class="buy" data-action="buy" data-address="${card.address}">Buy</button>`,
    poke,
    `</div>`,
  ].join("");
}

export function renderGrid(
  cards: AgentCard[],
  page: number,
  phenotypeUrl: (address: string) => string,
  pageSize: number = PAGE_SIZE,
): string {
  const sorted = sortCards(cards);
  const visible = pageOf(sorted, page, pageSize);
  const pages = pageCount(sorted.length, pageSize);
  const grid = visible.map((card) => renderCard(card, phenotypeUrl(card.address))).join("\n");
  const pager =
    pages > 1
      ? `<div class="pager"><button data-action="prev-page">&#8592;</button>` +
        `<span>page ${Math.min(page, pages - 1) + 1} / ${pages}</span>` +
        `<button data-action="next-page">&#8594;</button></div>`
      : "";
  return `<div class="grid">${grid}</div>${pager}`;
}
