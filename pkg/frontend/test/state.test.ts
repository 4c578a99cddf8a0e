import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, ViewState, decodeState, encodeState } from "../src/state.js";

describe("view state in the URL fragment", () => {
  it("round-trips every field", () => {
    const state: ViewState = {
      subject: "Pharmacology Analog",
      layout: "geographic",
      color: "country",
      selection: "ucl",
      sortColumn: "rate",
      sortDir: "asc",
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("encodes the default state as an empty fragment", () => {
    expect(encodeState({ ...DEFAULT_STATE })).toBe("");
    expect(decodeState("")).toEqual(DEFAULT_STATE);
    expect(decodeState("#")).toEqual(DEFAULT_STATE);
  });

  it("omits default-valued fields from the fragment", () => {
    const fragment = encodeState({ ...DEFAULT_STATE, subject: "X" });
    expect(fragment).toBe("#subject=X");
  });

  it("ignores unknown keys and bad values", () => {
    const state = decodeState("#subject=X&layout=martian&bogus=1&sort=up");
    expect(state.subject).toBe("X");
    expect(state.layout).toBe(DEFAULT_STATE.layout);
    expect(state.sortColumn).toBe(DEFAULT_STATE.sortColumn);
  });

  it("escapes subject names and selections", () => {
    const state: ViewState = {
      ...DEFAULT_STATE,
      subject: "Earth & Planetary #1",
      selection: "inst id/7",
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });
});
