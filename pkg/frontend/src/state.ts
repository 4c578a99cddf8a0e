/** View state, serialized into the URL fragment so navigation is linkable
 * and the browser's back button restores scenes exactly. */

export type LayoutMode = "network" | "geographic";
export type ColorMode = "country" | "rate";
export type SortColumn = "name" | "country" | "papers" | "rate";

export interface ViewState {
  subject: string | null;
  layout: LayoutMode;
  color: ColorMode;
  selection: string | null;
  sortColumn: SortColumn;
  sortDir: "asc" | "desc";
}

export const DEFAULT_STATE: ViewState = {
  subject: null,
  layout: "network",
  color: "rate",
  selection: null,
  sortColumn: "papers",
  sortDir: "desc",
};

export function encodeState(state: ViewState): string {
  const parts: string[] = [];
  if (state.subject) parts.push(`subject=${encodeURIComponent(state.subject)}`);
  if (state.layout !== DEFAULT_STATE.layout) parts.push(`layout=${state.layout}`);
  if (state.color !== DEFAULT_STATE.color) parts.push(`color=${state.color}`);
  if (state.selection) parts.push(`sel=${encodeURIComponent(state.selection)}`);
  if (state.sortColumn !== DEFAULT_STATE.sortColumn || state.sortDir !== DEFAULT_STATE.sortDir) {
    parts.push(`sort=${state.sortColumn}:${state.sortDir}`);
  }
  return parts.length ? `#${parts.join("&")}` : "";
}

export function decodeState(fragment: string): ViewState {
  const state: ViewState = { ...DEFAULT_STATE };
  const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  if (!raw) return state;
  for (const part of raw.split("&")) {
    const eq = part.indexOf("=");
    if (eq < 0) continue;
    const key = part.slice(0, eq);
    const value = decodeURIComponent(part.slice(eq + 1));
    switch (key) {
      case "subject":
        state.subject = value;
        break;
      case "layout":
        if (value === "network" || value === "geographic") state.layout = value;
        break;
      case "color":
        if (value === "country" || value === "rate") state.color = value;
        break;
      case "sel":
        state.selection = value;
        break;
      case "sort": {
        const [col, dir] = value.split(":");
        if (col === "name" || col === "country" || col === "papers" || col === "rate") {
          state.sortColumn = col;
        }
        if (dir === "asc" || dir === "desc") state.sortDir = dir;
        break;
      }
    }
  }
  return state;
}
