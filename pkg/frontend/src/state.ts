import type {
  RunConfig,
  RunSummary,
  SessionState,
  SortColumn,
  SortOrder,
  SubgroupRow,
} from "./types.js";

// Pure session-state transitions.  The controller applies these and the
// DOM layer re-renders from the result; nothing here touches the network.

export function defaultDraft(): RunConfig {
  return {
    input: "",
    slice_seconds: 60,
    energy_block_seconds: 1,
    feature_role: "movement",
    target_role: "speech",
    features: null,
    aggregators: ["mean", "std"],
    target_kind: "mean_z",
    dyncomp_window: 30,
    dyncomp_step: 1,
    dyncomp_domain: "auto",
    lags: [0, 1],
    min_size: 20,
    max_depth: 3,
    top_k: 20,
    quality_a: 0.5,
    direction: "high",
    pruning: true,
  };
}

export function initialState(draft: RunConfig = defaultDraft()): SessionState {
  return {
    runs: [],
    selectedRun: null,
    selectedLags: [],
    selectedLag: null,
    subgroups: null,
    radar: null,
    pinned: [],
    detail: null,
    sort: null,
    radarMode: "quality",
    chosenAttributes: [],
    draft,
    draftErrors: {},
    submitting: false,
    pollStatus: null,
    banner: null,
  };
}

// Replace the run list; if the selection disappeared (store wiped or run
// deleted) drop it and surface a not-found banner.
export function withRuns(state: SessionState, runs: RunSummary[]): SessionState {
  const next = { ...state, runs, banner: null };
  if (state.selectedRun !== null && !runs.some((r) => r.run_id === state.selectedRun)) {
    return {
      ...next,
      selectedRun: null,
      selectedLags: [],
      selectedLag: null,
      subgroups: null,
      radar: null,
      pinned: [],
      detail: null,
      banner: `run ${state.selectedRun} no longer exists`,
    };
  }
  return next;
}

export function withSelection(state: SessionState, runId: string, lags: number[]): SessionState {
  return {
    ...state,
    selectedRun: runId,
    selectedLags: lags,
    selectedLag: lags.length > 0 ? lags[0] : null,
    subgroups: null,
    radar: null,
    pinned: [],
    detail: null,
    banner: null,
  };
}

export function withLag(state: SessionState, lag: number): SessionState {
  // pins refer to the current run+lag, so changing lag clears them
  return { ...state, selectedLag: lag, subgroups: null, radar: null, pinned: [], detail: null };
}

function availablePatterns(state: SessionState): Set<string> {
  return new Set((state.subgroups ?? []).map((row) => row.pattern));
}

export function togglePin(state: SessionState, pattern: string): SessionState {
  if (!availablePatterns(state).has(pattern)) {
    return state;
  }
  const pinned = state.pinned.includes(pattern)
    ? state.pinned.filter((p) => p !== pattern)
    : [...state.pinned, pattern];
  return { ...state, pinned };
}

// Enforce the invariant pinned ⊆ subgroups of the selected run+lag after
// new result data arrives.
export function prunePinned(state: SessionState): SessionState {
  const available = availablePatterns(state);
  const pinned = state.pinned.filter((p) => available.has(p));
  const detail = state.detail !== null && available.has(state.detail) ? state.detail : null;
  return { ...state, pinned, detail };
}

export function chooseAttributes(state: SessionState, attributes: string[]): SessionState {
  return { ...state, chosenAttributes: attributes.slice(0, 5) };
}

// Stable sort of the subgroup table.  Rows arrive in service order
// (quality descending with its declared tie-break), so a null sort keeps
// that order and sorting by quality descending reproduces it.
export function sortRows(rows: SubgroupRow[], order: SortOrder | null): SubgroupRow[] {
  if (order === null) {
    return rows.slice();
  }
  const column: SortColumn = order.column;
  const sign = order.descending ? -1 : 1;
  return rows.slice().sort((a, b) => {
    const va = a[column];
    const vb = b[column];
    if (va < vb) {
      return -sign;
    }
    if (va > vb) {
      return sign;
    }
    return 0;
  });
}

export function toggleSort(order: SortOrder | null, column: SortColumn): SortOrder {
  if (order !== null && order.column === column) {
    return { column, descending: !order.descending };
  }
  // numeric columns open descending, the pattern column ascending
  return { column, descending: column !== "pattern" };
}
