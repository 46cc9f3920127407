"""
From raw corpus to ranked subgroups
===================================

The full path: write a small corpus CSV, run every stage through one
config, read the ranked subgroups per lag, then drive the same run over
the HTTP service.
"""

import json
import tempfile
import threading
import time
import urllib.request
from pathlib import Path

import numpy as np

from tslex import PipelineConfig, run_pipeline
from tslex.pipeline import export_run
from tslex.server import make_server

workdir = Path(tempfile.mkdtemp(prefix="tslex-demo-"))
corpus_path = workdir / "corpus.csv"

# ---------------------------------------------------------------------------
# A corpus with a hidden regularity: in every recording one slice of calm,
# low-variance movement is followed by a slice of lively speech energy.
# ---------------------------------------------------------------------------
rng = np.random.default_rng(21)
n_slices, slice_seconds = 6, 60
move_rate, speech_rate = 5, 10

lines = ["recording_id,channel_id,role,sample_rate,t_index,value"]
for r in range(4):
    rid = "rec%d" % r
    calm_at = 1 + r % (n_slices - 1)

    for cid in ("m1", "m2"):
        t = 0
        for s in range(n_slices):
            if s == calm_at:
                w = 0.05 * rng.normal(size=slice_seconds * move_rate)
            else:
                w = rng.normal(size=slice_seconds * move_rate)
            for v in w:
                lines.append("%s,%s,movement,%d,%d,%r" % (rid, cid, move_rate, t, float(v)))
                t += 1

    t = 0
    for s in range(n_slices):
        for sec in range(slice_seconds):
            if s == calm_at + 1 and sec % 2:
                amp = 1.0 + 0.2 * (sec % 5)      # loud, varying seconds
            else:
                amp = 0.05                        # near-silence
            base = amp * np.ones(speech_rate)
            base[::2] *= -1
            for v in base:
                lines.append("%s,speech,speech,%d,%d,%r" % (rid, speech_rate, t, float(v)))
                t += 1

corpus_path.write_text("\n".join(lines) + "\n")
print("corpus:", corpus_path, "(%d data rows)" % (len(lines) - 1))

# ---------------------------------------------------------------------------
# One flat config drives every stage.  Lag 1 asks: which feature pattern
# of slice i goes with the target of slice i+1?
# ---------------------------------------------------------------------------
config = PipelineConfig.from_mapping({
    "input": str(corpus_path),
    "features": ["variance", "longest_strike_below_mean"],
    "min_size": 3,
    "lags": [0, 1],
})
result = run_pipeline(config)
print("\nrun id:", result.run_id)
print("instances:", result.population["instances"],
      " target mean %.2e, std %.3f" % (result.population["target_mean"],
                                       result.population["target_std"]))
for block in result.lags:
    print("\nlag %d (%d instances):" % (block["lag"], block["instances"]))
    for s in block["subgroups"][:3]:
        print("  %-58s size %2d  quality %+.3f"
              % (s["pattern"], s["size"], s["quality"]))

paths = export_run(result, workdir / "run")
print("\nexported:")
for p in paths:
    print("  ", p)

# ---------------------------------------------------------------------------
# The same run over HTTP: submit the config, poll until done, then pull
# the radar payload the explorer UI feeds on.
# ---------------------------------------------------------------------------
server, store = make_server(workdir / "state")
thread = threading.Thread(target=server.serve_forever, daemon=True)
thread.start()
base = "http://127.0.0.1:%d" % server.server_address[1]

req = urllib.request.Request(base + "/api/runs",
                             data=json.dumps(config.to_mapping()).encode(),
                             headers={"Content-Type": "application/json"})
with urllib.request.urlopen(req) as resp:
    run_id = json.loads(resp.read())["run_id"]
print("\nsubmitted over HTTP:", run_id)

while True:
    with urllib.request.urlopen(base + "/api/runs/" + run_id) as resp:
        status = json.loads(resp.read())
    if status["status"] == "done":
        break
    time.sleep(0.1)

with urllib.request.urlopen(base + "/api/runs/%s/radar?lag=1" % run_id) as resp:
    radar = json.loads(resp.read())
print("radar axes:", radar["axes"])
print("attribute axes:", radar["attributes"])
print("best pattern over HTTP:", radar["subgroups"][0]["pattern"])

server.shutdown()
server.server_close()
store.close()
