"""HTTP service for submitting runs and browsing their results.

The service keeps an append-only store: one directory per run id under
the state directory, each holding the result document and the per-lag
subgroup CSVs.  Submitting a config whose run id already exists simply
returns that id.  Execution is asynchronous; clients poll the run until
its status turns ``done`` or ``error``.

Endpoints
---------
GET  /api/health                     liveness probe
GET  /api/runs                       run summaries, oldest first
POST /api/runs                       submit a config, 202 + run id
GET  /api/runs/{id}                  status, plus the document when done
GET  /api/runs/{id}/subgroups?lag=L  ranked subgroups of one lag
GET  /api/runs/{id}/radar?lag=L      radar axis values for one lag

All payloads are JSON.  Unknown config keys are rejected with 400 and
the offending key in the message.
"""

from __future__ import annotations

import json
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import ConfigError
from .pipeline import PipelineConfig, export_run, load_run, run_id_for, run_pipeline
from .pipeline import input_digest as digest_file

RADAR_AXES = ("quality", "size", "subgroup_mean")


class RunStore:
    """Run execution plus the on-disk store of finished runs."""

    def __init__(self, state_dir, max_workers=1):
        self.root = Path(state_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        self.lock = threading.Lock()
        self.pool = ThreadPoolExecutor(max_workers=max_workers)
        # run_id -> {"status": ..., "error": ...}; finished runs live on disk
        self.active = {}
        self.order = []
        for p in sorted(self.root.iterdir()):
            if (p / "result.json").exists():
                self.order.append(p.name)

    def path(self, run_id):
        return self.root / run_id

    def status(self, run_id):
        with self.lock:
            if run_id in self.active:
                return dict(self.active[run_id])
        if (self.path(run_id) / "result.json").exists():
            return {"status": "done"}
        return None

    def result(self, run_id):
        doc = self.path(run_id) / "result.json"
        if not doc.exists():
            return None
        return load_run(doc)

    def submit(self, config):
        """Queue a run; returns (run_id, created flag)."""
        digest = digest_file(config.input)
        run_id = run_id_for(config, digest)
        with self.lock:
            if run_id in self.active:
                return run_id, False
            if run_id in self.order:
                return run_id, False
            self.active[run_id] = {"status": "pending"}

        def job():
            with self.lock:
                self.active[run_id] = {"status": "running"}
            try:
                result = run_pipeline(config)
                export_run(result, self.path(run_id))
                with self.lock:
                    del self.active[run_id]
                    self.order.append(run_id)
            except Exception as e:
                with self.lock:
                    self.active[run_id] = {"status": "error", "error": str(e)}

        self.pool.submit(job)
        return run_id, True

    def summaries(self):
        out = []
        with self.lock:
            active = {rid: dict(st) for rid, st in self.active.items()}
            done = list(self.order)
        for rid in done:
            result = self.result(rid)
            if result is None:
                continue
            out.append({
                "run_id": rid,
                "status": "done",
                "input": result.config.get("input", ""),
                "lags": [b["lag"] for b in result.lags],
                "instances": result.population.get("instances", 0),
            })
        for rid, st in sorted(active.items()):
            entry = {"run_id": rid, "status": st["status"]}
            if "error" in st:
                entry["error"] = st["error"]
            out.append(entry)
        return out

    def close(self):
        self.pool.shutdown(wait=True)


def _lag_block(result, lag):
    for b in result.lags:
        if b["lag"] == lag:
            return b
    return None


def radar_payload(result, lag):
    """Axis values for the radar view of one lag.

    Each subgroup carries its raw quality, size and subgroup mean plus
    the label of every selector; ``ranges`` holds the min and max of each
    numeric axis over the ranked list so clients can normalise.
    """
    block = _lag_block(result, lag)
    if block is None:
        return None
    subgroups = []
    for s in block["subgroups"]:
        subgroups.append({
            "pattern": s["pattern"],
            "axes": {
                "quality": s["quality"],
                "size": s["size"],
                "subgroup_mean": s["subgroup_mean"],
            },
            "selectors": {attr: label for attr, label in s["selectors"]},
        })
    ranges = {}
    for axis in RADAR_AXES:
        vals = [sg["axes"][axis] for sg in subgroups]
        ranges[axis] = {"min": min(vals), "max": max(vals)} if vals else {"min": 0.0, "max": 0.0}
    attributes = sorted({attr for sg in subgroups for attr in sg["selectors"]})
    return {
        "lag": lag,
        "axes": list(RADAR_AXES),
        "attributes": attributes,
        "population_mean": block["population_mean"],
        "instances": block["instances"],
        "ranges": ranges,
        "subgroups": subgroups,
    }


def _make_handler(store, ui_dir=None):
    routes_run = re.compile(r"^/api/runs/([0-9a-f]{8,64})$")
    routes_sub = re.compile(r"^/api/runs/([0-9a-f]{8,64})/(subgroups|radar)$")

    class Handler(BaseHTTPRequestHandler):
        server_version = "tslex"
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            pass

        def _send(self, code, payload, content_type="application/json"):
            body = payload if isinstance(payload, bytes) else (
                json.dumps(payload, sort_keys=True).encode()
            )
            self.send_response(code)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _error(self, code, message):
            self._send(code, {"error": message})

        def do_OPTIONS(self):
            self._send(204, b"")

        def _query(self):
            if "?" not in self.path:
                return self.path, {}
            path, _, raw = self.path.partition("?")
            params = {}
            for part in raw.split("&"):
                if "=" in part:
                    k, _, v = part.partition("=")
                    params[k] = v
            return path, params

        def _lag_param(self, params):
            if "lag" not in params:
                return None, "query parameter lag is required"
            try:
                return int(params["lag"]), None
            except ValueError:
                return None, "lag must be an integer"

        def do_GET(self):
            path, params = self._query()
            if path == "/api/health":
                return self._send(200, {"status": "ok"})
            if path == "/api/runs":
                return self._send(200, {"runs": store.summaries()})
            m = routes_run.match(path)
            if m:
                run_id = m.group(1)
                status = store.status(run_id)
                if status is None:
                    return self._error(404, "unknown run id %r" % run_id)
                if status["status"] != "done":
                    payload = {"run_id": run_id}
                    payload.update(status)
                    return self._send(200, payload)
                result = store.result(run_id)
                return self._send(200, {
                    "run_id": run_id,
                    "status": "done",
                    "config": result.config,
                    "input_digest": result.input_digest,
                    "population": result.population,
                    "lags": result.lags,
                    "warnings": result.warnings,
                })
            m = routes_sub.match(path)
            if m:
                run_id, view = m.group(1), m.group(2)
                status = store.status(run_id)
                if status is None:
                    return self._error(404, "unknown run id %r" % run_id)
                if status["status"] != "done":
                    return self._error(409, "run %s is %s" % (run_id, status["status"]))
                lag, err = self._lag_param(params)
                if err:
                    return self._error(400, err)
                result = store.result(run_id)
                if view == "subgroups":
                    block = _lag_block(result, lag)
                    if block is None:
                        return self._error(404, "run has no lag %d" % lag)
                    return self._send(200, {"run_id": run_id, **block})
                payload = radar_payload(result, lag)
                if payload is None:
                    return self._error(404, "run has no lag %d" % lag)
                payload["run_id"] = run_id
                return self._send(200, payload)
            if ui_dir is not None:
                return self._serve_static(path)
            return self._error(404, "no such endpoint")

        def do_POST(self):
            path, _ = self._query()
            if path != "/api/runs":
                return self._error(404, "no such endpoint")
            try:
                length = int(self.headers.get("Content-Length", "0"))
                raw = self.rfile.read(length) if length else b"{}"
                mapping = json.loads(raw.decode())
                if not isinstance(mapping, dict):
                    raise ConfigError("config body must be a JSON object")
                config = PipelineConfig.from_mapping(mapping)
                if not config.input:
                    raise ConfigError("input path is required")
                if not Path(config.input).exists():
                    raise ConfigError("input file %r does not exist" % config.input)
            except ConfigError as e:
                return self._error(400, str(e))
            except (ValueError, TypeError) as e:
                return self._error(400, "invalid JSON body: %s" % e)
            run_id, created = store.submit(config)
            return self._send(202, {"run_id": run_id, "created": created})

        def _serve_static(self, path):
            rel = path.lstrip("/") or "index.html"
            base = Path(ui_dir).resolve()
            target = (base / rel).resolve()
            if not str(target).startswith(str(base)) or not target.is_file():
                return self._error(404, "not found")
            types = {
                ".html": "text/html; charset=utf-8",
                ".js": "text/javascript; charset=utf-8",
                ".css": "text/css; charset=utf-8",
                ".json": "application/json",
                ".svg": "image/svg+xml",
            }
            ctype = types.get(target.suffix, "application/octet-stream")
            self._send(200, target.read_bytes(), content_type=ctype)

    return Handler


def make_server(state_dir, port=0, host="127.0.0.1", ui_dir=None):
    """Build the HTTP server without starting it.

    Returns (server, store); the bound port is ``server.server_address[1]``.
    """
    store = RunStore(state_dir)
    handler = _make_handler(store, ui_dir=ui_dir)
    server = ThreadingHTTPServer((host, port), handler)
    return server, store


def serve(state_dir, port, host="127.0.0.1", ui_dir=None):
    """Run the service until interrupted."""
    server, store = make_server(state_dir, port=port, host=host, ui_dir=ui_dir)
    try:
        print("serving on http://%s:%d (state: %s)" % (host, server.server_address[1], state_dir))
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        store.close()
