/** Pure scene computation: which circles to draw where, how big, what color.
 * Every value comes verbatim from the bundle; the viewer adds no statistics. */

import { Bundle, EdgeRecord, InstitutionNode, edgesOf, institutionById } from "./types.js";
import { ViewState } from "./state.js";

export const WHITE_DOT_RADIUS = 2;
export const WHITE = "#ffffff";

export interface SceneNode {
  id: string;
  name: string;
  country: string;
  x: number;
  y: number;
  r: number;
  fill: string;
  white: boolean;      // inactive institution drawn as a white dot
  clickable: boolean;  // only reference institutions navigate
}

export interface SceneEdge {
  from: string;
  to: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
}

export interface LegendStrip {
  domain: [number, number, number];
  anchors: [string, string, string];
  marks: number[]; // reference rates on the strip, as fractions of the domain
}

export interface Scene {
  mode: "overview" | "selection";
  subject: string;
  nodes: SceneNode[];
  edges: SceneEdge[];
  legend: LegendStrip;
  selection: string | null;
}

function pos(node: InstitutionNode, state: ViewState): [number, number] {
  return state.layout === "network" ? node.pos_net : node.pos_geo;
}

function legendFor(bundle: Bundle): LegendStrip {
  const [lo, , hi] = bundle.color_scale.domain;
  const span = hi - lo || 1;
  const marks = bundle.institutions
    .filter((n) => n.is_reference && n.rate !== null)
    .map((n) => Math.min(Math.max(((n.rate as { mean: number }).mean - lo) / span, 0), 1));
  return {
    domain: bundle.color_scale.domain,
    anchors: bundle.color_scale.anchors,
    marks,
  };
}

export function buildOverviewScene(bundle: Bundle, state: ViewState): Scene {
  const nodes: SceneNode[] = bundle.institutions.map((n) => {
    const [x, y] = pos(n, state);
    if (!n.is_reference) {
      return {
        id: n.id, name: n.name, country: n.country, x, y,
        r: WHITE_DOT_RADIUS, fill: WHITE, white: true, clickable: false,
      };
    }
    const fill = state.color === "country" ? n.color_country : n.color_rate ?? WHITE;
    return {
      id: n.id, name: n.name, country: n.country, x, y,
      r: n.radius_overview, fill, white: false, clickable: true,
    };
  });
  return {
    mode: "overview",
    subject: bundle.subject,
    nodes,
    edges: [],
    legend: legendFor(bundle),
    selection: null,
  };
}

export function buildSelectionScene(bundle: Bundle, state: ViewState): Scene | null {
  if (!state.selection) return null;
  const byId = institutionById(bundle);
  const selected = byId.get(state.selection);
  if (!selected || !selected.is_reference) return null;

  const ego = edgesOf(bundle, selected.id);
  const partners = new Map<string, EdgeRecord>(ego.map((e) => [e.net, e]));

  const nodes: SceneNode[] = [];
  const edges: SceneEdge[] = [];
  const [sx, sy] = pos(selected, state);
  nodes.push({
    id: selected.id, name: selected.name, country: selected.country,
    x: sx, y: sy, r: selected.radius_selected,
    fill: state.color === "country" ? selected.color_country : selected.color_rate ?? WHITE,
    white: false, clickable: false,
  });
  for (const n of bundle.institutions) {
    if (n.id === selected.id) continue;
    const edge = partners.get(n.id);
    const [x, y] = pos(n, state);
    if (!edge) {
      nodes.push({
        id: n.id, name: n.name, country: n.country, x, y,
        r: WHITE_DOT_RADIUS, fill: WHITE, white: true, clickable: false,
      });
      continue;
    }
    // highlighted partner: sized by collaboration total, colored by joint rate
    const fill = state.color === "country" ? n.color_country : edge.color_rate;
    nodes.push({
      id: n.id, name: n.name, country: n.country, x, y,
      r: n.radius_selected, fill, white: false, clickable: n.is_reference,
    });
    edges.push({
      from: selected.id, to: n.id,
      x1: sx, y1: sy, x2: x, y2: y, color: edge.color_rate,
    });
  }
  return {
    mode: "selection",
    subject: bundle.subject,
    nodes,
    edges,
    legend: legendFor(bundle),
    selection: selected.id,
  };
}

export function buildScene(bundle: Bundle, state: ViewState): Scene {
  return buildSelectionScene(bundle, state) ?? buildOverviewScene(bundle, state);
}

export interface Viewport {
  width: number;
  height: number;
  scale: number;
  offsetX: number;
  offsetY: number;
}

/** Fit transform keeping every node (plus its radius) inside the viewport. */
export function fitViewport(scene: Scene, width: number, height: number, pad = 8): Viewport {
  const active = scene.nodes;
  if (!active.length) return { width, height, scale: 1, offsetX: width / 2, offsetY: height / 2 };
  const maxR = Math.max(...active.map((n) => n.r));
  const xs = active.map((n) => n.x);
  const ys = active.map((n) => n.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min(
    (width - 2 * (pad + maxR)) / spanX,
    (height - 2 * (pad + maxR)) / spanY,
  );
  return {
    width,
    height,
    scale,
    offsetX: width / 2 - scale * (minX + maxX) / 2,
    offsetY: height / 2 + scale * (minY + maxY) / 2,
  };
}

/** Map layout coordinates to screen (y axis flipped). */
export function toScreen(vp: Viewport, x: number, y: number): [number, number] {
  return [vp.offsetX + vp.scale * x, vp.offsetY - vp.scale * y];
}
