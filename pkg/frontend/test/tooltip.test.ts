import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, ViewState } from "../src/state.js";
import { tooltipPayload } from "../src/tooltip.js";
import { threeInstitutionBundle, withNonReferencePartner } from "./fixtures.js";

const base: ViewState = { ...DEFAULT_STATE, subject: "Pharmacology Analog" };

describe("overview tooltip", () => {
  it("shows name, country and the average best paper rate", () => {
    const payload = tooltipPayload(threeInstitutionBundle(), base, "ucl")!;
    expect(payload.title).toBe("University College London");
    expect(payload.country).toBe("GBR");
    expect(payload.rows).toHaveLength(1);
    expect(payload.rows[0].value).toBe("30.8%");
  });
});

describe("selection tooltip: the three-rate window", () => {
  const selected: ViewState = { ...base, selection: "ucl" };

  it("renders 30.8% / 31.5% / 31.5% for the Copenhagen pairing", () => {
    const payload = tooltipPayload(threeInstitutionBundle(), selected, "cop")!;
    expect(payload.rows.map((r) => r.value)).toEqual(["30.8%", "31.5%", "31.5%"]);
    expect(payload.rows[0].label).toContain("University College London");
    expect(payload.rows[1].label).toContain("University of Copenhagen");
    expect(payload.rows[2].label).toContain("joint");
  });

  it("renders the 39.3% joint rate beside the 30.8% average without judgment", () => {
    const payload = tooltipPayload(threeInstitutionBundle(), selected, "nih")!;
    expect(payload.rows.map((r) => r.value)).toEqual(["30.8%", "33.5%", "39.3%"]);
  });

  it("omits the reference-average row for a non-reference partner", () => {
    const payload = tooltipPayload(withNonReferencePartner(), selected, "lab")!;
    expect(payload.rows).toHaveLength(2);
    expect(payload.rows.map((r) => r.value)).toEqual(["30.8%", "25.0%"]);
  });

  it("hovering the selected institution itself shows its own average", () => {
    const payload = tooltipPayload(threeInstitutionBundle(), selected, "ucl")!;
    expect(payload.rows.map((r) => r.value)).toEqual(["30.8%"]);
  });

  it("every row names its bundle source", () => {
    const payload = tooltipPayload(threeInstitutionBundle(), selected, "nih")!;
    expect(payload.rows.map((r) => r.source)).toEqual([
      "institutions.ucl.rate.mean",
      "institutions.nih.rate.mean",
      "edges.ucl|nih.rate.mean",
    ]);
  });

  it("unknown institution yields no payload", () => {
    expect(tooltipPayload(threeInstitutionBundle(), base, "nope")).toBeNull();
  });
});
