// Wire shapes returned by the discovery service, plus the session state
// the explorer keeps between interactions.  Every number shown in the UI
// comes from these payloads; the client never recomputes results.

export type RunStatus = "pending" | "running" | "done" | "error";

export interface RunConfig {
  input: string;
  slice_seconds: number;
  energy_block_seconds: number;
  feature_role: string;
  target_role: string;
  features: string[] | null;
  aggregators: string[];
  target_kind: string;
  dyncomp_window: number;
  dyncomp_step: number;
  dyncomp_domain: "auto" | number[];
  lags: number[];
  min_size: number;
  max_depth: number;
  top_k: number;
  quality_a: number;
  direction: string;
  pruning: boolean;
}

export interface RunSummary {
  run_id: string;
  status: RunStatus;
  input?: string;
  lags?: number[];
  instances?: number;
  error?: string;
}

export interface SubgroupRow {
  pattern: string;
  selectors: [string, string][];
  size: number;
  subgroup_mean: number;
  population_mean: number;
  quality: number;
}

export interface LagBlock {
  lag: number;
  instances: number;
  population_mean: number;
  subgroups: SubgroupRow[];
}

export interface RunDocument {
  run_id: string;
  status: RunStatus;
  error?: string;
  config?: RunConfig;
  input_digest?: string;
  population?: {
    instances: number;
    slices: number;
    target_mean: number;
    target_std: number;
    degenerate_target: boolean;
  };
  lags?: LagBlock[];
  warnings?: string[];
}

export interface AxisRange {
  min: number;
  max: number;
}

export interface RadarSubgroup {
  pattern: string;
  axes: { quality: number; size: number; subgroup_mean: number };
  selectors: Record<string, string>;
}

export interface RadarPayload {
  run_id: string;
  lag: number;
  axes: string[];
  attributes: string[];
  population_mean: number;
  instances: number;
  ranges: Record<string, AxisRange>;
  subgroups: RadarSubgroup[];
}

export type RadarMode = "quality" | "selectors";

export type SortColumn = "pattern" | "size" | "subgroup_mean" | "quality";

export interface SortOrder {
  column: SortColumn;
  descending: boolean;
}

// What the explorer remembers for one browser session.  The pinned set
// always refers to patterns present in the currently selected run+lag.
export interface SessionState {
  runs: RunSummary[];
  selectedRun: string | null;
  selectedLags: number[];
  selectedLag: number | null;
  subgroups: SubgroupRow[] | null;
  radar: RadarPayload | null;
  pinned: string[];
  detail: string | null;
  sort: SortOrder | null;
  radarMode: RadarMode;
  chosenAttributes: string[];
  draft: RunConfig;
  draftErrors: Record<string, string>;
  submitting: boolean;
  pollStatus: RunStatus | null;
  banner: string | null;
}
