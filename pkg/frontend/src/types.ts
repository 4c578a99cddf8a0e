/** Bundle schema as exported by the pipeline (consumed verbatim). */

export interface RateSummary {
  mean: number;
  sd?: number;
  goldstein: [number, number];
  hpd?: [number, number];
}

export interface InstitutionNode {
  id: string;
  name: string;
  country: string;
  lat: number | null;
  lon: number | null;
  is_reference: boolean;
  rate: RateSummary | null;
  betweenness: number;
  degree: number;
  collab_total: number;
  radius_overview: number;
  radius_selected: number;
  color_rate: string | null;
  color_country: string;
  pos_net: [number, number];
  pos_geo: [number, number];
}

export interface EdgeRecord {
  ref: string;
  net: string;
  n_papers: number;
  n_top: number;
  rate: RateSummary;
  color_rate: string;
}

export interface Bundle {
  schema_version: number;
  subject: string;
  overall_rate: number;
  counts: { institutions: number; references: number; edges: number };
  color_scale: { domain: [number, number, number]; anchors: [string, string, string] };
  institutions: InstitutionNode[];
  edges: EdgeRecord[];
}

export interface SubjectIndex {
  schema_version: number;
  subjects: { subject: string; bundle: string }[];
}

export function institutionById(bundle: Bundle): Map<string, InstitutionNode> {
  return new Map(bundle.institutions.map((n) => [n.id, n]));
}

export function edgesOf(bundle: Bundle, refId: string): EdgeRecord[] {
  return bundle.edges.filter((e) => e.ref === refId);
}

export function findEdge(bundle: Bundle, refId: string, netId: string): EdgeRecord | null {
  return bundle.edges.find((e) => e.ref === refId && e.net === netId) ?? null;
}
