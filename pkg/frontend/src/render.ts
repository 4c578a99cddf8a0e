/** Graph painting: SVG for small scenes, canvas above the node threshold. */

import { Scene, SceneNode, Viewport, fitViewport, toScreen } from "./scene.js";

export const CANVAS_THRESHOLD = 500; // nodes; above this, canvas rendering
const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderCallbacks {
  onHover: (id: string | null, clientX: number, clientY: number) => void;
  onClick: (id: string) => void;
}

export function renderScene(
  container: HTMLElement,
  scene: Scene,
  callbacks: RenderCallbacks,
  width = 900,
  height = 560,
): Viewport {
  const vp = fitViewport(scene, width, height);
  container.replaceChildren();
  if (scene.nodes.length > CANVAS_THRESHOLD && typeof HTMLCanvasElement !== "undefined") {
    renderCanvas(container, scene, vp, callbacks);
  } else {
    renderSvg(container, scene, vp, callbacks);
  }
  return vp;
}

function renderSvg(
  container: HTMLElement,
  scene: Scene,
  vp: Viewport,
  callbacks: RenderCallbacks,
): void {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(vp.width));
  svg.setAttribute("height", String(vp.height));
  svg.setAttribute("class", "graph-svg");

  for (const e of scene.edges) {
    const [x1, y1] = toScreen(vp, e.x1, e.y1);
    const [x2, y2] = toScreen(vp, e.x2, e.y2);
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(x1));
    line.setAttribute("y1", String(y1));
    line.setAttribute("x2", String(x2));
    line.setAttribute("y2", String(y2));
    line.setAttribute("stroke", e.color);
    line.setAttribute("stroke-opacity", "0.45");
    svg.appendChild(line);
  }

  // white dots underneath, active circles on top
  const ordered = [...scene.nodes].sort((a, b) => Number(b.white) - Number(a.white));
  for (const n of ordered) {
    const [cx, cy] = toScreen(vp, n.x, n.y);
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(cx));
    circle.setAttribute("cy", String(cy));
    circle.setAttribute("r", String(n.r));
    circle.setAttribute("fill", n.fill);
    circle.setAttribute("data-inst", n.id);
    circle.setAttribute("class", n.white ? "node white-dot" : "node");
    if (n.id === scene.selection) circle.classList.add("selected");
    if (n.clickable) circle.classList.add("clickable");
    circle.addEventListener("mouseenter", (ev) =>
      callbacks.onHover(n.id, (ev as MouseEvent).clientX, (ev as MouseEvent).clientY));
    circle.addEventListener("mouseleave", () => callbacks.onHover(null, 0, 0));
    if (n.clickable) {
      circle.addEventListener("click", () => callbacks.onClick(n.id));
    }
    svg.appendChild(circle);
  }
  container.appendChild(svg);
}

function renderCanvas(
  container: HTMLElement,
  scene: Scene,
  vp: Viewport,
  callbacks: RenderCallbacks,
): void {
  const canvas = document.createElement("canvas");
  canvas.width = vp.width;
  canvas.height = vp.height;
  canvas.className = "graph-canvas";
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    renderSvg(container, scene, vp, callbacks);
    return;
  }
  ctx.clearRect(0, 0, vp.width, vp.height);
  for (const e of scene.edges) {
    const [x1, y1] = toScreen(vp, e.x1, e.y1);
    const [x2, y2] = toScreen(vp, e.x2, e.y2);
    ctx.strokeStyle = e.color;
    ctx.globalAlpha = 0.45;
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
  }
  ctx.globalAlpha = 1.0;
  const ordered = [...scene.nodes].sort((a, b) => Number(b.white) - Number(a.white));
  for (const n of ordered) {
    const [cx, cy] = toScreen(vp, n.x, n.y);
    ctx.beginPath();
    ctx.arc(cx, cy, n.r, 0, 2 * Math.PI);
    ctx.fillStyle = n.fill;
    ctx.fill();
    ctx.strokeStyle = "#666666";
    ctx.lineWidth = n.white ? 0.5 : 1.0;
    ctx.stroke();
  }
  // hit testing for hover/click (topmost first: non-white, larger on top)
  const hit = (px: number, py: number): SceneNode | null => {
    for (let i = ordered.length - 1; i >= 0; i--) {
      const n = ordered[i];
      const [cx, cy] = toScreen(vp, n.x, n.y);
      const d2 = (px - cx) ** 2 + (py - cy) ** 2;
      if (d2 <= n.r * n.r) return n;
    }
    return null;
  };
  canvas.addEventListener("mousemove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const n = hit(ev.clientX - rect.left, ev.clientY - rect.top);
    callbacks.onHover(n ? n.id : null, ev.clientX, ev.clientY);
  });
  canvas.addEventListener("click", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const n = hit(ev.clientX - rect.left, ev.clientY - rect.top);
    if (n && n.clickable) callbacks.onClick(n.id);
  });
  container.appendChild(canvas);
}

/** The min/average/max color strip shown above the color toggle. */
export function renderLegend(container: HTMLElement, scene: Scene): void {
  container.replaceChildren();
  const [lo, mid, hi] = scene.legend.domain;
  const strip = document.createElement("div");
  strip.className = "legend-strip";
  strip.style.background = `linear-gradient(to right, ${scene.legend.anchors[0]}, ` +
    `${scene.legend.anchors[1]} ${hi > lo ? (((mid - lo) / (hi - lo)) * 100).toFixed(1) : 50}%, ` +
    `${scene.legend.anchors[2]})`;
  for (const mark of scene.legend.marks) {
    const tick = document.createElement("span");
    tick.className = "legend-mark";
    tick.style.left = `${(mark * 100).toFixed(2)}%`;
    strip.appendChild(tick);
  }
  const labels = document.createElement("div");
  labels.className = "legend-labels";
  for (const [cls, value] of [["lo", lo], ["mid", mid], ["hi", hi]] as const) {
    const span = document.createElement("span");
    span.className = `legend-${cls}`;
    span.setAttribute("data-source", `color_scale.domain.${cls}`);
    span.textContent = `${(value * 100).toFixed(1)}%`;
    labels.appendChild(span);
  }
  container.appendChild(strip);
  container.appendChild(labels);
}
