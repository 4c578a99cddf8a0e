/** Hover window content. In selection mode up to three best paper rates are
 * shown: the selected institution's average, the hovered institution's
 * average as a reference institution (omitted when it is not one), and the
 * rate of the papers the pair produced jointly. */

import { formatPercent } from "./format.js";
import { ViewState } from "./state.js";
import { Bundle, findEdge, institutionById } from "./types.js";

export interface TooltipRow {
  label: string;
  value: string;
  /** bundle path backing the number, e.g. "institutions.ucl.rate.mean" */
  source: string;
}

export interface TooltipPayload {
  title: string;
  country: string;
  rows: TooltipRow[];
}

export function tooltipPayload(
  bundle: Bundle,
  state: ViewState,
  instId: string,
): TooltipPayload | null {
  const byId = institutionById(bundle);
  const inst = byId.get(instId);
  if (!inst) return null;
  const rows: TooltipRow[] = [];

  const selected = state.selection ? byId.get(state.selection) : undefined;
  if (!selected || selected.id === inst.id) {
    // overview (or hovering the selected institution itself)
    if (inst.rate) {
      rows.push({
        label: "Average best paper rate",
        value: formatPercent(inst.rate.mean),
        source: `institutions.${inst.id}.rate.mean`,
      });
    }
    return { title: inst.name, country: inst.country, rows };
  }

  if (selected.rate) {
    rows.push({
      label: `${selected.name} average best paper rate`,
      value: formatPercent(selected.rate.mean),
      source: `institutions.${selected.id}.rate.mean`,
    });
  }
  if (inst.is_reference && inst.rate) {
    rows.push({
      label: `${inst.name} average best paper rate`,
      value: formatPercent(inst.rate.mean),
      source: `institutions.${inst.id}.rate.mean`,
    });
  }
  const edge = findEdge(bundle, selected.id, inst.id);
  if (edge) {
    rows.push({
      label: "Best paper rate in joint papers",
      value: formatPercent(edge.rate.mean),
      source: `edges.${selected.id}|${inst.id}.rate.mean`,
    });
  }
  return { title: inst.name, country: inst.country, rows };
}
