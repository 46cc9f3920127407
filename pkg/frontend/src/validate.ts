import type { RunConfig } from "./types.js";

// Client-side mirror of the service's config validation.  A draft that
// fails here is never sent; the messages match the service's wording so
// inline errors and 400 responses read the same.

export const ROLES = ["movement", "speech", "other"];
export const AGGREGATORS = ["mean", "std", "none"];
export const TARGET_KINDS = ["mean_z", "slope", "delta"];
export const DIRECTIONS = ["high", "low"];

function isNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isInt(v: unknown): v is number {
  return isNumber(v) && Number.isInteger(v);
}

export function validateConfig(config: RunConfig): Record<string, string> {
  const errors: Record<string, string> = {};
  const need = (field: string, ok: boolean, message: string) => {
    if (!ok && !(field in errors)) {
      errors[field] = message;
    }
  };

  need("input", typeof config.input === "string" && config.input.length > 0,
    "input path is required");
  need("slice_seconds", isNumber(config.slice_seconds) && config.slice_seconds > 0,
    "slice_seconds must be positive");
  need("energy_block_seconds",
    isNumber(config.energy_block_seconds) && config.energy_block_seconds > 0,
    "energy_block_seconds must be positive");
  need("feature_role", ROLES.includes(config.feature_role),
    `feature_role must be one of ${ROLES.join("/")}`);
  need("target_role", ROLES.includes(config.target_role),
    `target_role must be one of ${ROLES.join("/")}`);
  if (config.features !== null) {
    need("features",
      Array.isArray(config.features) && config.features.length > 0 &&
        config.features.every((s) => typeof s === "string" && s.length > 0),
      "features must be a non-empty list or omitted");
  }
  need("aggregators",
    Array.isArray(config.aggregators) && config.aggregators.length > 0 &&
      config.aggregators.every((a) => AGGREGATORS.includes(a)),
    `aggregators must be a non-empty list drawn from ${AGGREGATORS.join("/")}`);
  need("target_kind", TARGET_KINDS.includes(config.target_kind),
    `target_kind must be one of ${TARGET_KINDS.join("/")}`);
  need("dyncomp_window", isInt(config.dyncomp_window) && config.dyncomp_window >= 4,
    "dyncomp_window must be at least 4");
  need("dyncomp_step", isInt(config.dyncomp_step) && config.dyncomp_step >= 1,
    "dyncomp_step must be at least 1");
  if (config.dyncomp_domain !== "auto") {
    const d = config.dyncomp_domain;
    const pair = Array.isArray(d) && d.length === 2 && d.every(isNumber);
    need("dyncomp_domain", pair, "dyncomp_domain must be 'auto' or [lo, hi]");
    if (pair) {
      need("dyncomp_domain", (d as number[])[0] <= (d as number[])[1],
        "dyncomp_domain low end exceeds high end");
    }
  }
  const lagsOk = Array.isArray(config.lags) && config.lags.length > 0 &&
    config.lags.every((v) => isInt(v) && v >= 0);
  need("lags", lagsOk, "lags must be a non-empty list of non-negative integers");
  if (lagsOk) {
    need("lags", new Set(config.lags).size === config.lags.length, "lags must be unique");
  }
  need("min_size", isInt(config.min_size) && config.min_size >= 1,
    "min_size must be at least 1");
  need("max_depth", isInt(config.max_depth) && config.max_depth >= 1,
    "max_depth must be at least 1");
  need("top_k", isInt(config.top_k) && config.top_k >= 1,
    "top_k must be at least 1");
  need("quality_a", isNumber(config.quality_a) && config.quality_a >= 0 && config.quality_a <= 1,
    "quality_a must lie in [0, 1]");
  need("direction", DIRECTIONS.includes(config.direction),
    "direction must be 'high' or 'low'");
  need("pruning", typeof config.pruning === "boolean",
    "pruning must be true or false");
  return errors;
}

// Small parsers for free-text form fields.

export function parseIntegerList(text: string): number[] | null {
  const parts = text.split(",").map((p) => p.trim()).filter((p) => p.length > 0);
  const values = parts.map((p) => Number(p));
  if (parts.length === 0 || values.some((v) => !Number.isInteger(v))) {
    return null;
  }
  return values;
}

export function parseDomain(text: string): "auto" | number[] | null {
  const trimmed = text.trim();
  if (trimmed === "" || trimmed === "auto") {
    return "auto";
  }
  const parts = trimmed.split(":");
  if (parts.length !== 2) {
    return null;
  }
  const lo = Number(parts[0]);
  const hi = Number(parts[1]);
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    return null;
  }
  return [lo, hi];
}

export function parseNameList(text: string): string[] | null {
  const parts = text.split(",").map((p) => p.trim()).filter((p) => p.length > 0);
  return parts.length > 0 ? parts : null;
}
