"""
The whole pipeline through the command-line interface
=====================================================

Everything the library does is reachable from the `framesel` command.
This script fabricates a small video's worth of files in a temp
directory and drives the CLI in-process, printing each command before
running it. Replace `run(...)` with a shell and the commands work
verbatim.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

import framesel as fs
from framesel.cli import main

tmp = tempfile.TemporaryDirectory()
base = Path(tmp.name)


def run(*args):
    argv = [str(a) for a in args]
    print("$ framesel " + " ".join(argv))
    code = main(argv)
    assert code == 0, f"exit {code}"


# --- 1. candidate pool -------------------------------------------------
run("pool", "--video-id", "demo", "--fps", 1, "--frames", 90,
    "--out", base / "manifest.json", "--quiet")

# --- 2. embeddings (normally produced by your encoders) ----------------
rng = np.random.default_rng(11)
n = 90
relevance = rng.normal(size=(n, 8))
relevance[40:50] += np.array([2.0, 0, 0, 0, 0, 0, 0, 0])  # relevant stretch
semantic = rng.normal(size=(n, 16))
query = np.zeros((1, 8))
query[0, 0] = 1.0

fs.write_embedding_file(base / "relevance.fsel", relevance)
fs.write_embedding_file(base / "semantic.fsel", semantic)
fs.write_embedding_file(base / "query.fsel", query)

# the pool manifest needs the three file paths added; the library call
# does what a tiny jq edit would
pool = fs.read_pool_manifest(base / "manifest.json")
fs.write_embedding_manifest(pool, "relevance.fsel", "semantic.fsel", "query.fsel",
                            base / "manifest.json")

# --- 3. train the router ----------------------------------------------
lines = []
for i in range(40):
    lines.append(f"count\thow many people walk past {i}")
    lines.append(f"needle\tfind the exact moment of impact {i}")
    lines.append(f"topic_reasoning\twhat is the overall subject here {i}")
(base / "questions.tsv").write_text("\n".join(lines) + "\n")

run("train-classifier", "--data", base / "questions.tsv",
    "--out", base / "model.json")

(base / "accuracy.csv").write_text(
    "type,relevance_only,relevance_oriented,coverage_oriented,coverage_only\n"
    "count,0.61,0.66,0.58,0.45\n"
    "needle,0.72,0.69,0.55,0.41\n"
    "topic_reasoning,0.44,0.52,0.60,0.64\n"
)
run("fit-routing", "--accuracy", base / "accuracy.csv",
    "--out", base / "routing.json")

# --- 4. route a question, then select with the routed preset -----------
run("route", "--model", base / "model.json", "--routing", base / "routing.json",
    "--question", "how many people walk past the window")

run("select", "--manifest", base / "manifest.json",
    "--preset", "auto",
    "--model", base / "model.json", "--routing", base / "routing.json",
    "--question", "how many people walk past the window",
    "--k", 8, "--out", base / "selection.json")

doc = json.loads((base / "selection.json").read_text())
print(f"\nrouted to preset {doc['preset']['name']}")
print("selected seconds:", doc["seconds"])
print("objective:", round(doc["objective"], 4))
print("(the relevant stretch was seconds 40..49)")

# --- 5. sanity checks the CLI also exposes ------------------------------
run("compare", "--manifest", base / "manifest.json", "--preset", "coverage_oriented",
    "--k", 8, "--out", base / "compare.json", "--quiet")
cmp_doc = json.loads((base / "compare.json").read_text())
print(f"\ngreedy objective {cmp_doc['greedy']['objective']:.4f} vs "
      f"uniform sampling {cmp_doc['uniform']['objective']:.4f}")

run("oracle", "--trials", 100, "--n", 10, "--k", 3, "--out", base / "oracle.jsonl", "--quiet")
worst = min(json.loads(line)["ratio"]
            for line in (base / "oracle.jsonl").read_text().splitlines())
print(f"worst greedy/optimal ratio over 100 exact checks: {worst:.5f}")

run("props", "--trials", 200, "--out", base / "props.json", "--quiet")
print("property summary:", (base / "props.json").read_text().strip())

tmp.cleanup()
