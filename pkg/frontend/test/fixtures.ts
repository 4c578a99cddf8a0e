/** Hand-built bundles for tests. The three-institution fixture carries the
 * rate constellation used in the tooltip checks: selected institution
 * average 30.8%, partner average 31.5%, joint rates 31.5% and 39.3%. */

import { Bundle, InstitutionNode, EdgeRecord, SubjectIndex } from "../src/types.js";

function inst(partial: Partial<InstitutionNode> & { id: string }): InstitutionNode {
  return {
    name: partial.id.toUpperCase(),
    country: "GBR",
    lat: 51.5,
    lon: -0.1,
    is_reference: true,
    rate: null,
    betweenness: 0,
    degree: 1,
    collab_total: 10,
    radius_overview: 5,
    radius_selected: 5,
    color_rate: "#999999",
    color_country: "#336699",
    pos_net: [0, 0],
    pos_geo: [0, 0],
    ...partial,
  };
}

function edge(partial: Partial<EdgeRecord> & { ref: string; net: string }): EdgeRecord {
  return {
    n_papers: 20,
    n_top: 6,
    rate: { mean: 0.3, goldstein: [0.25, 0.35], hpd: [0.24, 0.36] },
    color_rate: "#777777",
    ...partial,
  };
}

export function threeInstitutionBundle(): Bundle {
  const institutions = [
    inst({
      id: "cop", name: "University of Copenhagen", country: "DNK",
      lat: 55.7, lon: 12.6,
      rate: { mean: 0.315, sd: 0.02, goldstein: [0.2872, 0.3428], hpd: [0.277, 0.355] },
      betweenness: 4.0, degree: 2, collab_total: 61,
      radius_overview: 18, radius_selected: 14, color_rate: "#9a9a9c",
      pos_net: [40, 12], pos_geo: [35, 60],
    }),
    inst({
      id: "nih", name: "National Institutes of Health", country: "USA",
      lat: 39.0, lon: -77.1,
      rate: { mean: 0.335, sd: 0.015, goldstein: [0.3142, 0.3558], hpd: [0.305, 0.363] },
      betweenness: 9.0, degree: 2, collab_total: 104,
      radius_overview: 30, radius_selected: 30, color_rate: "#7f8cc0",
      pos_net: [-55, -8], pos_geo: [-240, 42],
    }),
    inst({
      id: "ucl", name: "University College London", country: "GBR",
      lat: 51.52, lon: -0.13,
      rate: { mean: 0.308, sd: 0.018, goldstein: [0.283, 0.333], hpd: [0.273, 0.342] },
      betweenness: 6.5, degree: 2, collab_total: 77,
      radius_overview: 24, radius_selected: 22, color_rate: "#97999e",
      pos_net: [5, 30], pos_geo: [-2, 56],
    }),
  ];
  const edges = [
    edge({
      ref: "cop", net: "ucl", n_papers: 36, n_top: 11,
      rate: { mean: 0.315, goldstein: [0.24, 0.39], hpd: [0.23, 0.4] },
      color_rate: "#9a9a9c",
    }),
    edge({
      ref: "nih", net: "ucl", n_papers: 52, n_top: 20,
      rate: { mean: 0.393, goldstein: [0.32, 0.466], hpd: [0.31, 0.47] },
      color_rate: "#586ec2",
    }),
    edge({
      ref: "ucl", net: "cop", n_papers: 36, n_top: 11,
      rate: { mean: 0.315, goldstein: [0.24, 0.39], hpd: [0.23, 0.4] },
      color_rate: "#9a9a9c",
    }),
    edge({
      ref: "ucl", net: "nih", n_papers: 52, n_top: 20,
      rate: { mean: 0.393, goldstein: [0.32, 0.466], hpd: [0.31, 0.47] },
      color_rate: "#586ec2",
    }),
  ];
  return {
    schema_version: 1,
    subject: "Pharmacology Analog",
    overall_rate: 0.237,
    counts: { institutions: 3, references: 3, edges: edges.length },
    color_scale: { domain: [0.2, 0.237, 0.45], anchors: ["#d73030", "#999999", "#3068d7"] },
    institutions,
    edges,
  };
}

/** Adds a non-reference partner of ucl, for the tooltip omission rule. */
export function withNonReferencePartner(): Bundle {
  const bundle = threeInstitutionBundle();
  bundle.institutions.push(
    inst({
      id: "lab", name: "Plain Lab", country: "FRA", is_reference: false,
      rate: null, color_rate: null, collab_total: 12,
      radius_overview: 2, radius_selected: 8,
      pos_net: [-20, -40], pos_geo: [8, 47],
    }),
  );
  bundle.edges.push(
    edge({
      ref: "ucl", net: "lab", n_papers: 12, n_top: 3,
      rate: { mean: 0.25, goldstein: [0.14, 0.36], hpd: [0.12, 0.38] },
      color_rate: "#b08a85",
    }),
  );
  bundle.counts = { institutions: 4, references: 3, edges: bundle.edges.length };
  return bundle;
}

export function fixtureIndex(): SubjectIndex {
  return {
    schema_version: 1,
    subjects: [{ subject: "Pharmacology Analog", bundle: "pharmacology-analog.bundle.json" }],
  };
}

/** Loader resolving the fixture index and bundle from memory. */
export function fixtureLoader(bundle: Bundle) {
  return async (path: string): Promise<unknown> => {
    if (path === "index.json") return fixtureIndex();
    if (path.endsWith(".bundle.json")) return bundle;
    throw new Error(`unexpected path: ${path}`);
  };
}
