"""End-to-end pipeline: config, staged execution, run documents.

A run is fully described by a flat key = value configuration plus the
input corpus.  ``run_pipeline`` executes ingest, feature extraction,
discretisation, target construction, lag alignment and subgroup search,
and returns a plain result object that serialises to a stable JSON
document: the same config over the same input produces the same bytes
and the same run id.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import features as feat
from .discretize import discretize_matrix, nominal_table_to_csv
from .dyncomp import (
    TARGET_KINDS,
    DynCompConfig,
    apply_lag,
    dynamic_complexity_series,
    slice_targets,
)
from .errors import ConfigError, StageError
from .ingest import ROLES, load_recordings, resample_energy, slice_recording
from .mining import QualitySpec, SearchConfig, discover

SUBGROUP_CSV_HEADER = ["pattern", "size", "subgroup_mean", "population_mean", "quality"]


@dataclass
class PipelineConfig:
    """Flat run configuration.

    Every field maps to one ``key = value`` line in a config file and to
    one CLI flag.  ``features`` of None selects the full default catalog;
    ``dyncomp_domain`` is "auto" or a two-element [lo, hi] list.
    """

    input: str = ""
    slice_seconds: float = 60.0
    energy_block_seconds: float = 1.0
    feature_role: str = "movement"
    target_role: str = "speech"
    features: list | None = None
    aggregators: list = field(default_factory=lambda: ["mean", "std"])
    target_kind: str = "mean_z"
    dyncomp_window: int = 30
    dyncomp_step: int = 1
    dyncomp_domain: object = "auto"
    lags: list = field(default_factory=lambda: [0, 1])
    min_size: int = 20
    max_depth: int = 3
    top_k: int = 20
    quality_a: float = 0.5
    direction: str = "high"
    pruning: bool = True

    @classmethod
    def keys(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, mapping):
        """Build a config from a dict, rejecting unknown keys."""
        known = set(cls.keys())
        for key in mapping:
            if key not in known:
                raise ConfigError("unknown config key: %r" % key)
        cfg = cls(**{k: v for k, v in mapping.items()})
        cfg.validate()
        return cfg

    def to_mapping(self):
        """Plain dict with every field materialised, JSON-ready."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out

    def validate(self):
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(isinstance(self.input, str), "input must be a path string")
        self.slice_seconds = _as_number(self.slice_seconds, "slice_seconds")
        need(self.slice_seconds > 0, "slice_seconds must be positive")
        self.energy_block_seconds = _as_number(self.energy_block_seconds, "energy_block_seconds")
        need(self.energy_block_seconds > 0, "energy_block_seconds must be positive")
        need(self.feature_role in ROLES, "feature_role must be one of %s" % "/".join(ROLES))
        need(self.target_role in ROLES, "target_role must be one of %s" % "/".join(ROLES))
        if self.features is not None:
            need(isinstance(self.features, (list, tuple)) and self.features,
                 "features must be a non-empty list or omitted")
            self.features = [str(s) for s in self.features]
            for spec in self.features:
                try:
                    feat.parse_feature_spec(spec)
                except ValueError as e:
                    raise ConfigError(str(e)) from None
        need(isinstance(self.aggregators, (list, tuple)) and self.aggregators,
             "aggregators must be a non-empty list")
        self.aggregators = [str(a) for a in self.aggregators]
        for a in self.aggregators:
            need(a in ("mean", "std", "none"), "unknown aggregator %r" % a)
        need(self.target_kind in TARGET_KINDS,
             "target_kind must be one of %s" % "/".join(TARGET_KINDS))
        self.dyncomp_window = _as_int(self.dyncomp_window, "dyncomp_window")
        need(self.dyncomp_window >= 4, "dyncomp_window must be at least 4")
        self.dyncomp_step = _as_int(self.dyncomp_step, "dyncomp_step")
        need(self.dyncomp_step >= 1, "dyncomp_step must be at least 1")
        if self.dyncomp_domain != "auto":
            need(isinstance(self.dyncomp_domain, (list, tuple)) and len(self.dyncomp_domain) == 2,
                 "dyncomp_domain must be 'auto' or [lo, hi]")
            lo = _as_number(self.dyncomp_domain[0], "dyncomp_domain[0]")
            hi = _as_number(self.dyncomp_domain[1], "dyncomp_domain[1]")
            need(lo <= hi, "dyncomp_domain low end exceeds high end")
            self.dyncomp_domain = [lo, hi]
        need(isinstance(self.lags, (list, tuple)) and self.lags, "lags must be a non-empty list")
        self.lags = [_as_int(v, "lags") for v in self.lags]
        need(all(v >= 0 for v in self.lags), "lags must be non-negative")
        need(len(set(self.lags)) == len(self.lags), "lags must be unique")
        self.min_size = _as_int(self.min_size, "min_size")
        need(self.min_size >= 1, "min_size must be at least 1")
        self.max_depth = _as_int(self.max_depth, "max_depth")
        need(self.max_depth >= 1, "max_depth must be at least 1")
        self.top_k = _as_int(self.top_k, "top_k")
        need(self.top_k >= 1, "top_k must be at least 1")
        self.quality_a = _as_number(self.quality_a, "quality_a")
        need(0.0 <= self.quality_a <= 1.0, "quality_a must lie in [0, 1]")
        need(self.direction in ("high", "low"), "direction must be 'high' or 'low'")
        need(isinstance(self.pruning, bool), "pruning must be true or false")
        return self


def _as_number(v, key):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("%s must be a number" % key)
    return float(v)


def _as_int(v, key):
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        raise ConfigError("%s must be an integer" % key)
    return int(v)


def _parse_scalar(text):
    text = text.strip()
    if text.lower() in ("true", "on", "yes"):
        return True
    if text.lower() in ("false", "off", "no"):
        return False
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_text(text):
    """Parse ``key = value`` lines into a mapping.

    Blank lines and ``#`` comments are skipped.  A value wrapped in
    ``[...]`` is a comma-separated list.  Returns the raw mapping; use
    ``PipelineConfig.from_mapping`` to validate it.
    """
    mapping = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected key = value" % line_no)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError("line %d: empty key" % line_no)
        if key in mapping:
            raise ConfigError("line %d: duplicate key %r" % (line_no, key))
        if value.startswith("[") and value.endswith("]"):
            inner = value[1:-1].strip()
            mapping[key] = [] if not inner else [_parse_scalar(v) for v in inner.split(",")]
        else:
            mapping[key] = _parse_scalar(value)
    return mapping


def load_config(path, overrides=None):
    """Read a config file and apply override values on top."""
    mapping = parse_config_text(Path(path).read_text())
    if overrides:
        mapping.update(overrides)
    return PipelineConfig.from_mapping(mapping)


# ---------------------------------------------------------------------------
# run execution
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    """Serialisable outcome of one pipeline run."""

    run_id: str
    config: dict
    input_digest: str
    population: dict
    lags: list
    warnings: list


def canonical_config_json(config):
    return json.dumps(config.to_mapping(), sort_keys=True, separators=(",", ":"))


def input_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def run_id_for(config, digest):
    h = hashlib.sha256()
    h.update(canonical_config_json(config).encode())
    h.update(b"\n")
    h.update(digest.encode())
    return h.hexdigest()[:16]


def _stage(name, fn):
    try:
        return fn()
    except Exception as e:
        raise StageError(name, e) from e


def _load_and_slice(config):
    groups = load_recordings(config.input)
    slices = []
    counts = {}
    for g in groups:
        s = slice_recording(g, config.slice_seconds)
        counts[g.recording_id] = len(s)
        slices.extend(s)
    return groups, slices, counts


def compute_complexity(config, groups=None):
    """Energy-resample each target-role channel and score its complexity.

    Returns a dict recording_id -> DynamicComplexitySeries.  Each
    recording must have exactly one channel of the configured target
    role.
    """
    if groups is None:
        groups = load_recordings(config.input)
    domain = "auto" if config.dyncomp_domain == "auto" else tuple(config.dyncomp_domain)
    dc_cfg = DynCompConfig(window=config.dyncomp_window, step=config.dyncomp_step, domain=domain)
    out = {}
    for g in groups:
        chans = g.channels_with_role(config.target_role)
        if len(chans) != 1:
            raise ValueError(
                "recording %r needs exactly one %r channel for the target, found %d"
                % (g.recording_id, config.target_role, len(chans))
            )
        energy = resample_energy(chans[0], config.energy_block_seconds)
        out[g.recording_id] = dynamic_complexity_series(energy, dc_cfg, g.recording_id)
    return out


def run_pipeline(config):
    """Execute all stages and assemble the result document.

    Raises
    ------
    ConfigError
        For invalid configuration.
    StageError
        When a stage fails; the error names the stage.
    """
    config.validate()
    if not config.input:
        raise ConfigError("input path is required")
    warnings = []

    groups, slices, counts = _stage("ingest", lambda: _load_and_slice(config))

    matrix = _stage("features", lambda: feat.extract_feature_matrix(
        groups, slices, config.features, config.feature_role, tuple(config.aggregators)))

    def _discretize():
        table, schemes, warns = discretize_matrix(matrix)
        warnings.extend(warns)
        return table

    table = _stage("discretize", _discretize)

    def _target():
        series = compute_complexity(config, groups)
        tv = slice_targets(series, counts, config.slice_seconds, config.target_kind)
        warnings.extend(tv.warnings)
        for s in series.values():
            if s.degenerate_domain:
                warnings.append(
                    "recording %s: degenerate complexity domain, all values 0" % s.recording_id
                )
        return tv

    target = _stage("target", _target)

    spec = QualitySpec(a=config.quality_a, direction=config.direction)
    search = SearchConfig(min_size=config.min_size, max_depth=config.max_depth,
                          top_k=config.top_k, pruning=config.pruning)
    lag_blocks = []
    for lag in config.lags:
        t, v = _stage("lag", lambda lag=lag: apply_lag(table, target, lag))
        results = _stage("discover", lambda t=t, v=v: discover(t, v, spec, search))
        lag_blocks.append({
            "lag": int(lag),
            "instances": len(t.rows),
            "population_mean": float(np.mean(v.values)),
            "subgroups": [
                {
                    "pattern": r.pattern.render(),
                    "selectors": [[s.attribute, s.label] for s in r.pattern.selectors],
                    "size": int(r.size),
                    "subgroup_mean": float(r.subgroup_mean),
                    "population_mean": float(r.population_mean),
                    "quality": float(r.quality),
                }
                for r in results
            ],
        })

    digest = input_digest(config.input)
    result = RunResult(
        run_id=run_id_for(config, digest),
        config=config.to_mapping(),
        input_digest=digest,
        population={
            "instances": len(table.rows),
            "slices": len(slices),
            "target_mean": float(np.mean(target.values)),
            "target_std": float(np.std(target.values)),
            "degenerate_target": bool(target.degenerate),
        },
        lags=lag_blocks,
        warnings=list(warnings),
    )
    return result


# ---------------------------------------------------------------------------
# documents and exports
# ---------------------------------------------------------------------------

def run_document(result):
    """The run as a stable JSON string (ends with a newline)."""
    doc = {
        "run_id": result.run_id,
        "config": result.config,
        "input_digest": result.input_digest,
        "population": result.population,
        "lags": result.lags,
        "warnings": result.warnings,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_run_document(text):
    doc = json.loads(text)
    return RunResult(
        run_id=doc["run_id"],
        config=doc["config"],
        input_digest=doc["input_digest"],
        population=doc["population"],
        lags=doc["lags"],
        warnings=doc["warnings"],
    )


def load_run(path):
    """Read a result document back; round-trips ``export_run`` output."""
    return parse_run_document(Path(path).read_text())


def subgroups_csv_text(result, lag):
    """CSV rendering of one lag's ranked subgroups."""
    import csv
    import io

    block = None
    for b in result.lags:
        if b["lag"] == lag:
            block = b
            break
    if block is None:
        raise ValueError("run has no lag %d" % lag)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUBGROUP_CSV_HEADER)
    for s in block["subgroups"]:
        writer.writerow([
            s["pattern"], s["size"], repr(s["subgroup_mean"]),
            repr(s["population_mean"]), repr(s["quality"]),
        ])
    return buf.getvalue()


def export_run(result, out_dir):
    """Write result.json plus one subgroups CSV per lag into a directory.

    Returns the list of written paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    doc_path = out / "result.json"
    doc_path.write_text(run_document(result))
    paths.append(doc_path)
    for block in result.lags:
        p = out / ("subgroups_lag%d.csv" % block["lag"])
        p.write_text(subgroups_csv_text(result, block["lag"]))
        paths.append(p)
    return paths


def export_feature_matrix(config, path):
    """Run ingest + features only and write the matrix CSV."""
    config.validate()
    groups, slices, _ = _stage("ingest", lambda: _load_and_slice(config))
    matrix = _stage("features", lambda: feat.extract_feature_matrix(
        groups, slices, config.features, config.feature_role, tuple(config.aggregators)))
    feat.feature_matrix_to_csv(matrix, path)
    return matrix


def export_complexity(config, path):
    """Run ingest + target complexity only and write the series CSV."""
    from .dyncomp import complexity_series_to_csv

    config.validate()
    groups, _, _ = _stage("ingest", lambda: _load_and_slice(config))
    series = _stage("target", lambda: compute_complexity(config, groups))
    ordered = [series[rid] for rid in sorted(series)]
    complexity_series_to_csv(ordered, path)
    return ordered


# re-exported for callers that want to inspect tables before mining
__all__ = [
    "PipelineConfig",
    "RunResult",
    "parse_config_text",
    "load_config",
    "run_pipeline",
    "run_document",
    "parse_run_document",
    "load_run",
    "export_run",
    "subgroups_csv_text",
    "export_feature_matrix",
    "export_complexity",
    "input_digest",
    "run_id_for",
    "canonical_config_json",
    "nominal_table_to_csv",
]
