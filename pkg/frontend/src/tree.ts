/**
 * Lineage tree view: parse the gateway's DOT export and lay the forest
 * out as generation layers rendered to inline SVG.
 */

export interface TreeNode {
  id: string;
  generation: number;
  bornAt: number;
}

export interface TreeGraph {
  nodes: TreeNode[];
  edges: Array<[string, string]>;
}

const NODE_RE = /^\s*"([0-9a-f]+)"\s+\[label="gen (\d+) @tick (\d+)"\];$/;
const EDGE_RE = /^\s*"([0-9a-f]+)"\s*->\s*"([0-9a-f]+)";$/;

/** Parse the exporter's DOT dialect; throws on lines it cannot read. */
export function parseDot(text: string): TreeGraph {
  const nodes: TreeNode[] = [];
  const edges: Array<[string, string]> = [];
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (line === "" || line.startsWith("digraph") || line === "}") {
      continue;
    }
    const nodeMatch = raw.match(NODE_RE);
    if (nodeMatch) {
      nodes.push({
        id: nodeMatch[1],
        generation: parseInt(nodeMatch[2], 10),
        bornAt: parseInt(nodeMatch[3], 10),
      });
      continue;
    }
    const edgeMatch = raw.match(EDGE_RE);
    if (edgeMatch) {
      edges.push([edgeMatch[1], edgeMatch[2]]);
      continue;
    }
    throw new Error(`unparseable DOT line: ${line}`);
  }
  return { nodes, edges };
}

/** Nodes grouped by generation, birth order within a layer. */
export function layers(graph: TreeGraph): TreeNode[][] {
  const byGeneration = new Map<number, TreeNode[]>();
  for (const node of graph.nodes) {
    const layer = byGeneration.get(node.generation) ?? [];
    layer.push(node);
    byGeneration.set(node.generation, layer);
  }
  const generations = [...byGeneration.keys()].sort((a, b) => a - b);
  return generations.map((generation) => {
    const layer = byGeneration.get(generation)!;
    layer.sort((a, b) => a.bornAt - b.bornAt || (a.id < b.id ? -1 : 1));
    return layer;
  });
}

const CELL_W = 90;
const CELL_H = 60;

export function renderTreeSvg(graph: TreeGraph): string {
  const rows = layers(graph);
  const positions = new Map<string, { x: number; y: number }>();
  let maxCols = 1;
  rows.forEach((row, rowIndex) => {
    maxCols = Math.max(maxCols, row.length);
    row.forEach((node, colIndex) => {
      positions.set(node.id, {
        x: colIndex * CELL_W + CELL_W / 2,
        y: rowIndex * CELL_H + CELL_H / 2,
      });
    });
  });
  const width = maxCols * CELL_W;
  const height = Math.max(rows.length, 1) * CELL_H;
  const lines = graph.edges.map(([parent, child]) => {
    const from = positions.get(parent)!;
    const to = positions.get(child)!;
    return `<line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" stroke="#999"/>`;
  });
  const boxes = graph.nodes.map((node) => {
    const at = positions.get(node.id)!;
    return (
      `<g class="tree-node" data-id="${node.id}">` +
      `<rect x="${at.x - 36}" y="${at.y - 14}" width="72" height="28" rx="4" fill="#eef" stroke="#447"/>` +
      `<text x="${at.x}" y="${at.y + 4}" text-anchor="middle" font-size="10">${node.id}</text>` +
      `</g>`
    );
  });
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}">` +
    lines.join("") +
    boxes.join("") +
    `</svg>`
  );
}
