import { describe, expect, it } from "vitest";
import { initialState } from "../src/state.js";
import type { SubgroupRow } from "../src/types.js";
import {
  attributePickerHtml,
  bannerHtml,
  describeSubgroup,
  detailHtml,
  fieldErrorsHtml,
  lagTabsHtml,
  runTableHtml,
  subgroupTableHtml,
} from "../src/views.js";

const row: SubgroupRow = {
  pattern: "mean__variance=low AND std__variance=high",
  selectors: [["mean__variance", "low"], ["std__variance", "high"]],
  size: 24,
  subgroup_mean: 0.8125,
  population_mean: 0.1,
  quality: 3.4904,
};

describe("views", () => {
  it("lists runs with their digests and marks the selection", () => {
    const html = runTableHtml(
      [
        { run_id: "ab12cd34ef567890", status: "done", input: "corpus.csv", lags: [0, 1], instances: 36 },
        { run_id: "1234567890abcdef", status: "running" },
      ],
      "ab12cd34ef567890",
    );
    expect(html).toContain("ab12cd34ef567890");
    expect(html).toContain("1234567890abcdef");
    expect(html).toContain(`class="selected" data-run="ab12cd34ef567890"`);
    expect(html).toContain("running");
  });

  it("renders lag tabs with the active one highlighted", () => {
    const html = lagTabsHtml([0, 1, 2], 1);
    expect(html.match(/data-lag=/g)).toHaveLength(3);
    expect(html).toContain(`class="active" data-lag="1"`);
  });

  it("renders subgroup rows with pin checkboxes", () => {
    const html = subgroupTableHtml([row], [row.pattern], null);
    expect(html).toContain(row.pattern);
    expect(html).toContain("checked");
    expect(html).toContain("24");
  });

  it("notes when a lag produced no subgroups", () => {
    expect(subgroupTableHtml([], [], null)).toContain("No subgroups");
  });

  it("glosses a pattern in plain language", () => {
    const text = describeSubgroup(row, 36);
    expect(text).toContain("mean__variance is low and std__variance is high");
    expect(text).toContain("24 of 36 instances");
    expect(text).toContain("above the population mean");
  });

  it("shows pattern, gloss and coverage in the detail pane", () => {
    const html = detailHtml(row, 36);
    expect(html).toContain(row.pattern);
    expect(html).toContain("covers 24 instances");
    expect(detailHtml(null, 36)).toContain("Select a subgroup");
  });

  it("renders the attribute picker with current choices", () => {
    const html = attributePickerHtml(["a1", "a2"], ["a2"]);
    expect(html).toContain(`data-attr="a1"`);
    expect(html).toContain(`data-attr="a2" checked`);
  });

  it("renders inline field errors keyed by field", () => {
    const html = fieldErrorsHtml({ min_size: "min_size must be at least 1" });
    expect(html).toContain(`data-field="min_size"`);
    expect(html).toContain("at least 1");
  });

  it("renders the banner with a retry control only when set", () => {
    expect(bannerHtml(initialState())).toBe("");
    const html = bannerHtml({ ...initialState(), banner: "service unreachable" });
    expect(html).toContain("service unreachable");
    expect(html).toContain(`data-action="retry"`);
  });
});
