import { describe, expect, it } from "vitest";
import { ExplorerClient } from "../src/api.js";
import { ExplorerController } from "../src/controller.js";
import { qualityRadar, radarSvg } from "../src/radar.js";
import { defaultDraft } from "../src/state.js";
import type { RunConfig } from "../src/types.js";
import { runTableHtml, subgroupTableHtml } from "../src/views.js";
import { FixtureService } from "./fixture.js";

// End-to-end explorer behavior against a fixture speaking the service's
// wire contract.  No DOM: assertions run on the controller state and on
// the HTML/SVG fragments the page would show.

function makeController(fixture: FixtureService): ExplorerController {
  return new ExplorerController({
    client: new ExplorerClient("", fixture.fetch),
    onChange: () => {},
    pollInterval: 0,
    sleep: () => Promise.resolve(),
  });
}

function config(overrides: Partial<RunConfig> = {}): RunConfig {
  return { ...defaultDraft(), input: "corpus.csv", lags: [0], ...overrides };
}

describe("explorer flow", () => {
  it("shows an empty-state prompt before any run exists", async () => {
    const controller = makeController(new FixtureService());
    await controller.refreshRuns();
    expect(controller.state.runs).toEqual([]);
    expect(runTableHtml(controller.state.runs, null)).toContain("No runs yet");
  });

  it("submits a run, polls it to completion and selects it", async () => {
    const fixture = new FixtureService();
    fixture.pollsUntilDone = 2;
    const controller = makeController(fixture);
    controller.setDraft(config());

    const runId = await controller.submitDraft();
    expect(runId).not.toBeNull();
    expect(controller.state.selectedRun).toBe(runId);
    expect(controller.state.selectedLag).toBe(0);
    expect(controller.state.pollStatus).toBe("done");
    expect(controller.state.runs).toHaveLength(1);
    expect(controller.state.subgroups).toHaveLength(3);
  });

  it("renders the quality radar with exactly the three ranked-list axes", async () => {
    const fixture = new FixtureService();
    const controller = makeController(fixture);
    controller.setDraft(config());
    await controller.submitDraft();

    const radar = controller.state.radar;
    expect(radar).not.toBeNull();
    expect(radar!.axes).toEqual(["quality", "size", "subgroup_mean"]);

    const top = controller.state.subgroups![0].pattern;
    const svg = radarSvg(qualityRadar(radar!, [top]));
    expect(svg.match(/class="radar-axis"/g)).toHaveLength(3);
    for (const label of ["quality", "size", "subgroup_mean"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });

  it("changing lag 0 to 1 and resubmitting surfaces a new run with lag-1 results", async () => {
    const fixture = new FixtureService();
    const controller = makeController(fixture);
    controller.setDraft(config({ lags: [0] }));
    const first = await controller.submitDraft();

    controller.setDraft(config({ lags: [1] }));
    const second = await controller.submitDraft();

    expect(second).not.toBeNull();
    expect(second).not.toBe(first);
    expect(controller.state.runs).toHaveLength(2);
    expect(controller.state.selectedRun).toBe(second);
    expect(controller.state.selectedLag).toBe(1);
    expect(controller.state.radar!.lag).toBe(1);

    const table = runTableHtml(controller.state.runs, controller.state.selectedRun);
    expect(table).toContain(first!);
    expect(table).toContain(second!);
    expect(table).toContain(`class="selected" data-run="${second}"`);

    const rows = subgroupTableHtml(controller.state.subgroups!, [], null);
    expect(rows).toContain("mean__variance=low AND std__variance=high");
  });

  it("rejects min_size 0 inline without sending a request", async () => {
    const fixture = new FixtureService();
    const controller = makeController(fixture);
    controller.setDraft(config());
    await controller.submitDraft();
    const posts = fixture.posts;

    controller.setDraft(config({ min_size: 0 }));
    const out = await controller.submitDraft();
    expect(out).toBeNull();
    expect(controller.state.draftErrors.min_size).toBe("min_size must be at least 1");
    expect(fixture.posts).toBe(posts);
  });

  it("navigates to the existing run when the config is a duplicate", async () => {
    const fixture = new FixtureService();
    const controller = makeController(fixture);
    controller.setDraft(config());
    const first = await controller.submitDraft();

    controller.setDraft(config());
    const again = await controller.submitDraft();
    expect(again).toBe(first);
    expect(controller.state.runs).toHaveLength(1);
    expect(controller.state.selectedRun).toBe(first);
    expect(controller.state.banner).toContain(first!);
    expect(fixture.posts).toBe(2);
  });

  it("surfaces service rejections verbatim", async () => {
    const fixture = new FixtureService();
    const controller = makeController(fixture);
    controller.setDraft(config({ input: "missing.csv" }));
    const out = await controller.submitDraft();
    expect(out).toBeNull();
    expect(controller.state.banner).toBe("input file 'missing.csv' does not exist");
    expect(controller.state.submitting).toBe(false);
  });

  it("shows an unreachable banner when the service is down", async () => {
    const controller = new ExplorerController({
      client: new ExplorerClient("", () => Promise.reject(new Error("refused"))),
      onChange: () => {},
      pollInterval: 0,
      sleep: () => Promise.resolve(),
    });
    await controller.refreshRuns();
    expect(controller.state.banner).toMatch(/unreachable/);
  });

  it("keeps one submission in flight and abandons its poll on navigation", async () => {
    const fixture = new FixtureService();
    fixture.pollsUntilDone = 0;
    let release: (() => void) | null = null;
    const controller = new ExplorerController({
      client: new ExplorerClient("", fixture.fetch),
      onChange: () => {},
      pollInterval: 0,
      sleep: () => new Promise<void>((resolve) => {
        release = resolve;
      }),
    });

    controller.setDraft(config());
    const first = await controller.submitDraft();
    expect(first).not.toBeNull();

    // this run stays "running" long enough to park the poll on the gate
    fixture.pollsUntilDone = 50;
    controller.setDraft(config({ lags: [2] }));
    const pending = controller.submitDraft();
    for (let i = 0; i < 20 && release === null; i += 1) {
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
    expect(release).not.toBeNull();
    expect(controller.state.submitting).toBe(true);

    // a second submit while one is in flight is refused outright
    const posts = fixture.posts;
    expect(await controller.submitDraft()).toBeNull();
    expect(fixture.posts).toBe(posts);

    // navigating away bumps the poll token; the parked loop exits quietly
    await controller.select(first!);
    expect(controller.state.selectedRun).toBe(first);
    release!();
    await pending;
    expect(controller.state.selectedRun).toBe(first);
    expect(controller.state.submitting).toBe(false);
  });
});
