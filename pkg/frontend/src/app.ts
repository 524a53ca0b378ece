/**
 * Browser bootstrap: wires the controller to the page and polls the
 * event feed (default every 2 s).
 */

import { GatewayClient } from "./api";
import { renderGrid } from "./cards";
import { GalleryController } from "./controller";
import { parseDot, renderTreeSvg } from "./tree";

const POLL_INTERVAL_MS = 2000;
const FAUCET_AMOUNT = 10_000;

function baseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://127.0.0.1:8000";
}

function main(): void {
  const client = new GatewayClient(baseUrl());
  const gridEl = document.getElementById("gallery")!;
  const treeEl = document.getElementById("tree")!;
  const bannerEl = document.getElementById("banner")!;
  const sessionEl = document.getElementById("session")!;

  const controller = new GalleryController(client, () => {
    gridEl.innerHTML = renderGrid(controller.cards, controller.page, (address) =>
      client.phenotypeUrl(address),
    );
    try {
      treeEl.innerHTML = controller.treeDot
        ? renderTreeSvg(parseDot(controller.treeDot))
        : "";
    } catch (error) {
      treeEl.innerHTML = `<div class="banner error">tree parse failure</div>`;
    }
    bannerEl.className = controller.status ? `banner ${controller.status.kind}` : "banner";
    bannerEl.textContent = controller.unreachable
      ? "service unreachable"
      : controller.status?.text ?? "";
    sessionEl.textContent = controller.session
      ? `EOA ${controller.session.bound_eoa.slice(0, 10)}…`
      : "no session";
    for (const button of gridEl.querySelectorAll("button")) {
      (button as HTMLButtonElement).disabled = controller.mutationPending;
    }
  });

  gridEl.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (action === "next-page") {
      controller.nextPage();
      return;
    }
    if (action === "prev-page") {
      controller.prevPage();
      return;
    }
    const address = target.dataset.address;
    if (!address) {
      return;
    }
    if (action === "buy") {
      const card = target.closest(".card")!;
      const input = card.querySelector<HTMLInputElement>("input.value")!;
      const value = parseInt(input.value, 10);
      const listed = parseInt(input.min, 10);
      if (value < listed) {
        // Warn, but still send: the server is the authority.
        bannerEl.className = "banner info";
        bannerEl.textContent = `value below listed price ${listed}; sending anyway`;
      }
      void controller.buy(address, value);
    } else if (action === "poke") {
      void controller.poke(address);
    }
  });

  treeEl.addEventListener("click", (event) => {
    const node = (event.target as HTMLElement).closest(".tree-node");
    if (!node) {
      return;
    }
    const id = (node as HTMLElement).dataset.id!;
    const card = controller.cards.find((c) => c.address.slice(2, 10) === id);
    if (card) {
      void client.agentDetail(card.address).then((detail) => {
        bannerEl.className = "banner info";
        bannerEl.textContent =
          `${detail.address} gen ${detail.generation}, price ${detail.price}, ` +
          `${detail.nfts_sold} sold, ${detail.children_count} children`;
      });
    }
  });

  void controller.connect(FAUCET_AMOUNT);
  window.setInterval(() => void controller.poll(), POLL_INTERVAL_MS);
}

main();
