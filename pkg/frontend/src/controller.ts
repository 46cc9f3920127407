import { ApiError, ExplorerClient } from "./api.js";
import {
  chooseAttributes,
  initialState,
  prunePinned,
  togglePin,
  toggleSort,
  withLag,
  withRuns,
  withSelection,
} from "./state.js";
import type { RunConfig, RadarMode, SessionState, SortColumn } from "./types.js";
import { validateConfig } from "./validate.js";

export interface ControllerOptions {
  client: ExplorerClient;
  onChange: (state: SessionState) => void;
  pollInterval?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

// Session controller: owns the state, talks to the service, and calls
// onChange after every transition so the DOM layer can re-render.  At
// most one discovery submission is in flight, and selecting a different
// run abandons any poll loop that is still waiting (stale loops notice
// the bumped token and stop quietly).
export class ExplorerController {
  state: SessionState;
  private readonly client: ExplorerClient;
  private readonly onChange: (state: SessionState) => void;
  private readonly pollInterval: number;
  private readonly sleep: (ms: number) => Promise<void>;
  private pollToken = 0;

  constructor(options: ControllerOptions) {
    this.client = options.client;
    this.onChange = options.onChange;
    this.pollInterval = options.pollInterval ?? 500;
    this.sleep = options.sleep ?? defaultSleep;
    this.state = initialState();
  }

  private update(state: SessionState): void {
    this.state = state;
    this.onChange(state);
  }

  private fail(error: unknown): void {
    const message =
      error instanceof ApiError
        ? error.message
        : "service unreachable, check that it is still running";
    this.update({ ...this.state, banner: message, submitting: false });
  }

  async refreshRuns(): Promise<void> {
    try {
      const runs = await this.client.listRuns();
      this.update(withRuns(this.state, runs));
    } catch (error) {
      this.fail(error);
    }
  }

  // Select a run; if it is still executing, poll until it finishes.
  async select(runId: string): Promise<void> {
    const token = ++this.pollToken;
    try {
      let doc = await this.client.getRun(runId);
      while (doc.status === "pending" || doc.status === "running") {
        this.update({ ...this.state, selectedRun: runId, pollStatus: doc.status });
        await this.sleep(this.pollInterval);
        if (token !== this.pollToken) {
          return;
        }
        doc = await this.client.getRun(runId);
      }
      if (token !== this.pollToken) {
        return;
      }
      if (doc.status === "error") {
        this.update({
          ...this.state,
          selectedRun: runId,
          pollStatus: "error",
          banner: doc.error ?? "run failed",
        });
        return;
      }
      const lags = (doc.lags ?? []).map((b) => b.lag);
      this.update({ ...withSelection(this.state, runId, lags), pollStatus: "done" });
      if (this.state.selectedLag !== null) {
        await this.loadLag(this.state.selectedLag, token);
      }
    } catch (error) {
      this.fail(error);
    }
  }

  async selectLag(lag: number): Promise<void> {
    const token = ++this.pollToken;
    this.update(withLag(this.state, lag));
    await this.loadLag(lag, token);
  }

  private async loadLag(lag: number, token: number): Promise<void> {
    const runId = this.state.selectedRun;
    if (runId === null) {
      return;
    }
    try {
      const [subgroups, radar] = await Promise.all([
        this.client.getSubgroups(runId, lag),
        this.client.getRadar(runId, lag),
      ]);
      if (token !== this.pollToken) {
        return;
      }
      this.update(
        prunePinned({ ...this.state, subgroups: subgroups.subgroups, radar }),
      );
    } catch (error) {
      this.fail(error);
    }
  }

  // Validate the draft locally first; an invalid draft produces inline
  // field errors and no request.  A duplicate config comes back with
  // created=false and we simply navigate to the existing run.
  async submitDraft(): Promise<string | null> {
    if (this.state.submitting) {
      return null;
    }
    const errors = validateConfig(this.state.draft);
    if (Object.keys(errors).length > 0) {
      this.update({ ...this.state, draftErrors: errors });
      return null;
    }
    this.update({ ...this.state, draftErrors: {}, submitting: true, banner: null });
    try {
      const receipt = await this.client.submitRun(this.state.draft);
      if (!receipt.created) {
        this.update({ ...this.state, submitting: false });
        await this.refreshRuns();
        await this.select(receipt.run_id);
        this.update({
          ...this.state,
          banner: `config already computed as run ${receipt.run_id}`,
        });
        return receipt.run_id;
      }
      await this.waitForRun(receipt.run_id);
      return receipt.run_id;
    } catch (error) {
      this.fail(error);
      return null;
    }
  }

  private async waitForRun(runId: string): Promise<void> {
    const token = ++this.pollToken;
    try {
      let doc = await this.client.getRun(runId);
      while (doc.status === "pending" || doc.status === "running") {
        this.update({ ...this.state, pollStatus: doc.status });
        await this.sleep(this.pollInterval);
        if (token !== this.pollToken) {
          this.update({ ...this.state, submitting: false });
          return;
        }
        doc = await this.client.getRun(runId);
      }
      this.update({ ...this.state, submitting: false });
      await this.refreshRuns();
      if (token === this.pollToken) {
        await this.select(runId);
      }
    } catch (error) {
      this.fail(error);
    }
  }

  setDraft(draft: RunConfig): void {
    this.update({ ...this.state, draft });
  }

  pin(pattern: string): void {
    this.update(togglePin(this.state, pattern));
  }

  setRadarMode(mode: RadarMode): void {
    this.update({ ...this.state, radarMode: mode });
  }

  setChosenAttributes(attributes: string[]): void {
    this.update(chooseAttributes(this.state, attributes));
  }

  setSort(column: SortColumn): void {
    this.update({ ...this.state, sort: toggleSort(this.state.sort, column) });
  }

  showDetail(pattern: string | null): void {
    this.update({ ...this.state, detail: pattern });
  }
}
