import { ExplorerClient } from "./api.js";
import { ExplorerController } from "./controller.js";
import { qualityRadar, radarSvg, selectorRadar } from "./radar.js";
import { sortRows } from "./state.js";
import type { RunConfig, SessionState, SortColumn } from "./types.js";
import { parseDomain, parseIntegerList, parseNameList } from "./validate.js";
import {
  attributePickerHtml,
  bannerHtml,
  detailHtml,
  fieldErrorsHtml,
  lagTabsHtml,
  runTableHtml,
  subgroupTableHtml,
} from "./views.js";

// DOM glue: reads the static shell, renders every state change from the
// controller, and translates clicks back into controller calls.

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function field(form: HTMLFormElement, name: string): HTMLInputElement | HTMLSelectElement {
  const node = form.elements.namedItem(name);
  if (node === null) {
    throw new Error(`missing form field ${name}`);
  }
  return node as HTMLInputElement | HTMLSelectElement;
}

function numberValue(form: HTMLFormElement, name: string): number {
  return Number(field(form, name).value);
}

// Assemble a draft config from the form.  Unparseable values become
// sentinels the validator rejects, so the user sees a field error rather
// than a thrown exception.
function readDraft(form: HTMLFormElement): RunConfig {
  const features = parseNameList(field(form, "features").value);
  const lags = parseIntegerList(field(form, "lags").value);
  const domain = parseDomain(field(form, "dyncomp_domain").value);
  return {
    input: field(form, "input").value.trim(),
    slice_seconds: numberValue(form, "slice_seconds"),
    energy_block_seconds: numberValue(form, "energy_block_seconds"),
    feature_role: field(form, "feature_role").value,
    target_role: field(form, "target_role").value,
    features,
    aggregators: parseNameList(field(form, "aggregators").value) ?? [],
    target_kind: field(form, "target_kind").value,
    dyncomp_window: numberValue(form, "dyncomp_window"),
    dyncomp_step: numberValue(form, "dyncomp_step"),
    dyncomp_domain: domain ?? [Number.NaN],
    lags: lags ?? [],
    min_size: numberValue(form, "min_size"),
    max_depth: numberValue(form, "max_depth"),
    top_k: numberValue(form, "top_k"),
    quality_a: numberValue(form, "quality_a"),
    direction: field(form, "direction").value,
    pruning: (field(form, "pruning") as HTMLInputElement).checked,
  };
}

function radarPatterns(state: SessionState): string[] {
  if (state.pinned.length > 0) {
    return state.pinned;
  }
  if (state.detail !== null) {
    return [state.detail];
  }
  // default overview: the top-ranked subgroup
  return state.subgroups !== null && state.subgroups.length > 0
    ? [state.subgroups[0].pattern]
    : [];
}

function render(state: SessionState): void {
  el("banner-slot").innerHTML = bannerHtml(state);
  el("run-table").innerHTML = runTableHtml(state.runs, state.selectedRun);
  el("lag-tabs").innerHTML = lagTabsHtml(state.selectedLags, state.selectedLag);

  const rows = state.subgroups !== null ? sortRows(state.subgroups, state.sort) : [];
  el("subgroup-table").innerHTML =
    state.subgroups !== null
      ? subgroupTableHtml(rows, state.pinned, state.detail)
      : state.selectedRun !== null && state.pollStatus !== "done"
        ? `<p class="empty-state">run is ${state.pollStatus ?? "loading"}...</p>`
        : "";

  const patterns = radarPatterns(state);
  if (state.radar !== null && patterns.length > 0) {
    const views =
      state.radarMode === "selectors"
        ? selectorRadar(state.radar, patterns, state.chosenAttributes)
        : qualityRadar(state.radar, patterns);
    el("radar-pane").innerHTML = radarSvg(views);
  } else {
    el("radar-pane").innerHTML = `<p class="empty-state">Pin a subgroup to compare.</p>`;
  }
  el("attr-picker").innerHTML =
    state.radar !== null && state.radarMode === "selectors"
      ? attributePickerHtml(state.radar.attributes, state.chosenAttributes)
      : "";

  const detailRow =
    state.subgroups !== null
      ? (state.subgroups.find((r) => r.pattern === state.detail) ?? null)
      : null;
  el("detail-pane").innerHTML = detailHtml(detailRow, state.radar?.instances ?? 0);

  el("field-errors").innerHTML = fieldErrorsHtml(state.draftErrors);
  (el<HTMLButtonElement>("submit-btn")).disabled = state.submitting;
  el("submit-status").textContent = state.submitting
    ? `run is ${state.pollStatus ?? "queued"}...`
    : "";
}

export function boot(baseUrl = ""): ExplorerController {
  const controller = new ExplorerController({
    client: new ExplorerClient(baseUrl, (url, init) => fetch(url, init)),
    onChange: render,
  });

  el("run-table").addEventListener("click", (event) => {
    const row = (event.target as HTMLElement).closest("tr[data-run]");
    if (row !== null) {
      void controller.select(row.getAttribute("data-run") ?? "");
    }
  });

  el("lag-tabs").addEventListener("click", (event) => {
    const btn = (event.target as HTMLElement).closest("button[data-lag]");
    if (btn !== null) {
      void controller.selectLag(Number(btn.getAttribute("data-lag")));
    }
  });

  el("subgroup-table").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const pin = target.closest("input[data-pin]");
    if (pin !== null) {
      controller.pin(pin.getAttribute("data-pin") ?? "");
      return;
    }
    const header = target.closest("th[data-sort]");
    if (header !== null) {
      controller.setSort(header.getAttribute("data-sort") as SortColumn);
      return;
    }
    const row = target.closest("tr[data-pattern]");
    if (row !== null) {
      controller.showDetail(row.getAttribute("data-pattern"));
    }
  });

  el("attr-picker").addEventListener("change", () => {
    const chosen = Array.from(
      el("attr-picker").querySelectorAll<HTMLInputElement>("input[data-attr]:checked"),
    ).map((box) => box.getAttribute("data-attr") ?? "");
    controller.setChosenAttributes(chosen);
  });

  for (const mode of ["quality", "selectors"] as const) {
    el(`mode-${mode}`).addEventListener("change", () => controller.setRadarMode(mode));
  }

  el("banner-slot").addEventListener("click", (event) => {
    if ((event.target as HTMLElement).matches("button[data-action='retry']")) {
      void controller.refreshRuns();
    }
  });

  el<HTMLButtonElement>("refresh-btn").addEventListener("click", () => {
    void controller.refreshRuns();
  });

  const form = el<HTMLFormElement>("config-form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    controller.setDraft(readDraft(form));
    void controller.submitDraft();
  });

  void controller.refreshRuns();
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("config-form") !== null) {
  boot();
}
