import type { FetchLike, FetchResponseLike } from "../src/api.js";
import type {
  AxisRange,
  LagBlock,
  RadarPayload,
  RunConfig,
  RunSummary,
  SubgroupRow,
} from "../src/types.js";

// In-memory stand-in for the discovery service, speaking the same wire
// contract: 202 submits with created flags, polling statuses, per-lag
// subgroup and radar payloads, and the same error responses.

const KNOWN_KEYS = new Set([
  "input", "slice_seconds", "energy_block_seconds", "feature_role",
  "target_role", "features", "aggregators", "target_kind", "dyncomp_window",
  "dyncomp_step", "dyncomp_domain", "lags", "min_size", "max_depth", "top_k",
  "quality_a", "direction", "pruning",
]);

function fnv1a(text: string, seed: number): string {
  let hash = seed >>> 0;
  for (let i = 0; i < text.length; i += 1) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash.toString(16).padStart(8, "0");
}

function canonical(config: RunConfig): string {
  const keys = Object.keys(config).sort();
  return JSON.stringify(keys.map((k) => [k, (config as unknown as Record<string, unknown>)[k]]));
}

export function runIdFor(config: RunConfig): string {
  const text = canonical(config);
  return fnv1a(text, 0x811c9dc5) + fnv1a(text, 0x1b873593);
}

// Deterministic ranked subgroups for one lag; numbers shift with the lag
// so tests can tell lag-0 and lag-1 results apart.
function lagBlock(lag: number, instances: number): LagBlock {
  const populationMean = 0.1 * lag;
  const raw: Array<{ pattern: string; selectors: [string, string][]; size: number; mean: number }> = [
    {
      pattern: "mean__variance=low AND std__variance=high",
      selectors: [["mean__variance", "low"], ["std__variance", "high"]],
      size: 24,
      mean: 0.8 + 0.05 * lag,
    },
    {
      pattern: "mean__variance=medium",
      selectors: [["mean__variance", "medium"]],
      size: 30,
      mean: 0.55 + 0.05 * lag,
    },
    {
      pattern: "mean__longest_strike_below_mean=high",
      selectors: [["mean__longest_strike_below_mean", "high"]],
      size: 22,
      mean: 0.62 + 0.05 * lag,
    },
  ];
  const subgroups: SubgroupRow[] = raw.map((r) => ({
    pattern: r.pattern,
    selectors: r.selectors,
    size: r.size,
    subgroup_mean: r.mean,
    population_mean: populationMean,
    quality: Math.sqrt(r.size) * (r.mean - populationMean),
  }));
  subgroups.sort((a, b) => b.quality - a.quality);
  return { lag, instances, population_mean: populationMean, subgroups };
}

function radarPayload(runId: string, block: LagBlock): RadarPayload {
  const subgroups = block.subgroups.map((s) => ({
    pattern: s.pattern,
    axes: { quality: s.quality, size: s.size, subgroup_mean: s.subgroup_mean },
    selectors: Object.fromEntries(s.selectors),
  }));
  const ranges: Record<string, AxisRange> = {};
  for (const axis of ["quality", "size", "subgroup_mean"] as const) {
    const values = subgroups.map((s) => s.axes[axis]);
    ranges[axis] = { min: Math.min(...values), max: Math.max(...values) };
  }
  const attributes = Array.from(
    new Set(subgroups.flatMap((s) => Object.keys(s.selectors))),
  ).sort();
  return {
    run_id: runId,
    lag: block.lag,
    axes: ["quality", "size", "subgroup_mean"],
    attributes,
    population_mean: block.population_mean,
    instances: block.instances,
    ranges,
    subgroups,
  };
}

interface StoredRun {
  config: RunConfig;
  lags: LagBlock[];
  pollsLeft: number;
}

export class FixtureService {
  posts = 0;
  // status reads that report "running" before a fresh run turns done
  pollsUntilDone = 1;
  private readonly runs = new Map<string, StoredRun>();
  private readonly order: string[] = [];

  fetch: FetchLike = (url, init) => Promise.resolve(this.handle(url, init));

  wipe(): void {
    this.runs.clear();
    this.order.length = 0;
  }

  private respond(status: number, payload: unknown): FetchResponseLike {
    return {
      ok: status >= 200 && status < 300,
      status,
      json: () => Promise.resolve(payload),
    };
  }

  private error(status: number, message: string): FetchResponseLike {
    return this.respond(status, { error: message });
  }

  private summaries(): RunSummary[] {
    return this.order.map((id) => {
      const run = this.runs.get(id)!;
      if (run.pollsLeft > 0) {
        return { run_id: id, status: "running" as const };
      }
      return {
        run_id: id,
        status: "done" as const,
        input: run.config.input,
        lags: run.lags.map((b) => b.lag),
        instances: run.lags.length > 0 ? run.lags[0].instances : 0,
      };
    });
  }

  private submit(body: string): FetchResponseLike {
    this.posts += 1;
    let mapping: Record<string, unknown>;
    try {
      mapping = JSON.parse(body) as Record<string, unknown>;
    } catch {
      return this.error(400, "invalid JSON body");
    }
    for (const key of Object.keys(mapping)) {
      if (!KNOWN_KEYS.has(key)) {
        return this.error(400, `unknown config key: '${key}'`);
      }
    }
    const config = mapping as unknown as RunConfig;
    if (typeof config.min_size !== "number" || config.min_size < 1) {
      return this.error(400, "min_size must be at least 1");
    }
    if (typeof config.input !== "string" || config.input.length === 0) {
      return this.error(400, "input path is required");
    }
    // the real service checks the filesystem; the fixture reserves a name
    if (config.input === "missing.csv") {
      return this.error(400, "input file 'missing.csv' does not exist");
    }
    const id = runIdFor(config);
    if (this.runs.has(id)) {
      return this.respond(202, { run_id: id, created: false });
    }
    this.runs.set(id, {
      config,
      lags: config.lags.map((lag) => lagBlock(lag, 36)),
      pollsLeft: this.pollsUntilDone,
    });
    this.order.push(id);
    return this.respond(202, { run_id: id, created: true });
  }

  private handle(url: string, init?: Parameters<FetchLike>[1]): FetchResponseLike {
    const [path, query = ""] = url.split("?");
    if (init?.method === "POST") {
      if (path !== "/api/runs") {
        return this.error(404, "no such endpoint");
      }
      return this.submit(init.body ?? "{}");
    }
    if (path === "/api/health") {
      return this.respond(200, { status: "ok" });
    }
    if (path === "/api/runs") {
      return this.respond(200, { runs: this.summaries() });
    }
    const runMatch = /^\/api\/runs\/([0-9a-f]{8,64})$/.exec(path);
    if (runMatch !== null) {
      const run = this.runs.get(runMatch[1]);
      if (run === undefined) {
        return this.error(404, `unknown run id '${runMatch[1]}'`);
      }
      if (run.pollsLeft > 0) {
        run.pollsLeft -= 1;
        return this.respond(200, { run_id: runMatch[1], status: "running" });
      }
      return this.respond(200, {
        run_id: runMatch[1],
        status: "done",
        config: run.config,
        input_digest: "0".repeat(64),
        population: {
          instances: 36,
          slices: 36,
          target_mean: 0,
          target_std: 1,
          degenerate_target: false,
        },
        lags: run.lags,
        warnings: [],
      });
    }
    const viewMatch = /^\/api\/runs\/([0-9a-f]{8,64})\/(subgroups|radar)$/.exec(path);
    if (viewMatch !== null) {
      const run = this.runs.get(viewMatch[1]);
      if (run === undefined) {
        return this.error(404, `unknown run id '${viewMatch[1]}'`);
      }
      if (run.pollsLeft > 0) {
        return this.error(409, `run ${viewMatch[1]} is running`);
      }
      const params = new URLSearchParams(query);
      if (!params.has("lag")) {
        return this.error(400, "query parameter lag is required");
      }
      const lag = Number(params.get("lag"));
      if (!Number.isInteger(lag)) {
        return this.error(400, "lag must be an integer");
      }
      const block = run.lags.find((b) => b.lag === lag);
      if (block === undefined) {
        return this.error(404, `run has no lag ${lag}`);
      }
      if (viewMatch[2] === "subgroups") {
        return this.respond(200, { run_id: viewMatch[1], ...block });
      }
      return this.respond(200, radarPayload(viewMatch[1], block));
    }
    return this.error(404, "no such endpoint");
  }
}
