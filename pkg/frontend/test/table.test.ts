import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, ViewState } from "../src/state.js";
import { TableRow, overviewRows, selectionRows, sortRows, tableRows } from "../src/table.js";
import { threeInstitutionBundle, withNonReferencePartner } from "./fixtures.js";

const base: ViewState = { ...DEFAULT_STATE, subject: "Pharmacology Analog" };

function row(id: string, papers: number, rate: number | null, country = "GBR"): TableRow {
  return {
    id, name: id, country, papers,
    rateMean: rate,
    rateLower: rate, rateUpper: rate,
    clickable: true,
    papersSource: `x.${id}`, rateSource: rate === null ? null : `r.${id}`,
  };
}

describe("table rows", () => {
  it("overview lists only reference institutions", () => {
    const rows = overviewRows(withNonReferencePartner());
    expect(rows.map((r) => r.id).sort()).toEqual(["cop", "nih", "ucl"]);
  });

  it("selection lists the partners with joint counts and joint rates", () => {
    const rows = selectionRows(withNonReferencePartner(), "ucl");
    expect(rows.map((r) => r.id).sort()).toEqual(["cop", "lab", "nih"]);
    const nih = rows.find((r) => r.id === "nih")!;
    expect(nih.papers).toBe(52);
    expect(nih.rateMean).toBe(0.393);
    const lab = rows.find((r) => r.id === "lab")!;
    expect(lab.clickable).toBe(false);
  });

  it("default sorting is by papers, descending", () => {
    const rows = tableRows(threeInstitutionBundle(), { ...base, selection: "ucl" });
    expect(rows.map((r) => r.papers)).toEqual([52, 36]);
  });
});

describe("stable sorting", () => {
  it("leaves an already-sorted list unchanged", () => {
    const rows = [row("a", 1, 0.1), row("b", 2, 0.2), row("c", 3, 0.3)];
    expect(sortRows(rows, "papers", "asc").map((r) => r.id)).toEqual(["a", "b", "c"]);
  });

  it("preserves original relative order on equal keys", () => {
    const rows = [row("first", 5, 0.25), row("second", 5, 0.25), row("third", 5, 0.25)];
    expect(sortRows(rows, "rate", "desc").map((r) => r.id)).toEqual(["first", "second", "third"]);
    expect(sortRows(rows, "papers", "asc").map((r) => r.id)).toEqual(["first", "second", "third"]);
  });

  it("interval columns sort by their mean", () => {
    const rows = [row("wide", 1, 0.30), row("narrow", 2, 0.31)];
    expect(sortRows(rows, "rate", "desc")[0].id).toBe("narrow");
  });

  it("matches an independent comparison-sort oracle on 100 random rows", () => {
    // deterministic LCG so the test is reproducible
    let s = 123456789;
    const rand = () => ((s = (1103515245 * s + 12345) % 2147483648) / 2147483648);
    const rows: TableRow[] = [];
    for (let i = 0; i < 100; i++) {
      rows.push(row(`r${i}`, Math.floor(rand() * 20), Math.round(rand() * 10) / 10,
                    ["GBR", "USA", "DNK"][Math.floor(rand() * 3)]));
    }
    for (const column of ["name", "country", "papers", "rate"] as const) {
      for (const dir of ["asc", "desc"] as const) {
        const ours = sortRows(rows, column, dir).map((r) => r.id);
        // oracle: decorate with original index, plain comparison sort
        const oracle = rows
          .map((r, i) => ({ r, i }))
          .sort((a, b) => {
            const key = (x: TableRow) =>
              column === "papers" ? x.papers
              : column === "rate" ? (x.rateMean ?? -Infinity)
              : column === "name" ? x.name : x.country;
            const ka = key(a.r);
            const kb = key(b.r);
            let cmp = typeof ka === "string"
              ? ka.localeCompare(kb as string)
              : (ka as number) - (kb as number);
            if (dir === "desc") cmp = -cmp;
            return cmp !== 0 ? cmp : a.i - b.i;
          })
          .map((x) => x.r.id);
        expect(ours).toEqual(oracle);
      }
    }
  });
});
