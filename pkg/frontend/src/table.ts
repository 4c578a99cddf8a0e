/** Sortable credible-interval tables below the graph.
 *
 * Overview lists the reference institutions; selection lists the network
 * institutions of the selected reference. Interval columns sort by their
 * mean; the sort is stable so equal keys keep their bundle order. */

import { ViewState, SortColumn } from "./state.js";
import { Bundle, edgesOf, institutionById } from "./types.js";

export interface TableRow {
  id: string;
  name: string;
  country: string;
  papers: number;
  rateMean: number | null;
  rateLower: number | null;
  rateUpper: number | null;
  clickable: boolean;
  /** bundle paths backing the numeric cells */
  papersSource: string;
  rateSource: string | null;
}

export function overviewRows(bundle: Bundle): TableRow[] {
  return bundle.institutions
    .filter((n) => n.is_reference)
    .map((n) => ({
      id: n.id,
      name: n.name,
      country: n.country,
      papers: n.collab_total,
      rateMean: n.rate ? n.rate.mean : null,
      rateLower: n.rate ? n.rate.goldstein[0] : null,
      rateUpper: n.rate ? n.rate.goldstein[1] : null,
      clickable: true,
      papersSource: `institutions.${n.id}.collab_total`,
      rateSource: n.rate ? `institutions.${n.id}.rate` : null,
    }));
}

export function selectionRows(bundle: Bundle, selectionId: string): TableRow[] {
  const byId = institutionById(bundle);
  return edgesOf(bundle, selectionId).map((e) => {
    const n = byId.get(e.net);
    return {
      id: e.net,
      name: n ? n.name : e.net,
      country: n ? n.country : "",
      papers: e.n_papers,
      rateMean: e.rate.mean,
      rateLower: e.rate.goldstein[0],
      rateUpper: e.rate.goldstein[1],
      clickable: n ? n.is_reference : false,
      papersSource: `edges.${e.ref}|${e.net}.n_papers`,
      rateSource: `edges.${e.ref}|${e.net}.rate`,
    };
  });
}

export function tableRows(bundle: Bundle, state: ViewState): TableRow[] {
  const rows = state.selection
    ? selectionRows(bundle, state.selection)
    : overviewRows(bundle);
  return sortRows(rows, state.sortColumn, state.sortDir);
}

export function sortRows(
  rows: TableRow[],
  column: SortColumn,
  dir: "asc" | "desc",
): TableRow[] {
  const keyed = rows.map((row, index) => ({ row, index }));
  const sign = dir === "asc" ? 1 : -1;
  keyed.sort((a, b) => {
    let cmp: number;
    switch (column) {
      case "name":
        cmp = a.row.name.localeCompare(b.row.name);
        break;
      case "country":
        cmp = a.row.country.localeCompare(b.row.country);
        break;
      case "papers":
        cmp = a.row.papers - b.row.papers;
        break;
      case "rate": {
        const am = a.row.rateMean ?? -Infinity;
        const bm = b.row.rateMean ?? -Infinity;
        cmp = am - bm;
        break;
      }
    }
    if (cmp !== 0) return sign * cmp;
    return a.index - b.index; // stability
  });
  return keyed.map((k) => k.row);
}
