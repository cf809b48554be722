"""Shared fixtures: random instances, on-disk embedding fixtures, CLI runner."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import framesel as fs
from framesel.cli import main as cli_main


def unit_rows(rng, n, dim):
    rows = rng.normal(size=(n, dim))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def random_problem(rng, n=None, max_n=12, dim=6, quantized_scores=False):
    """A (scores, sim values) pair in the pipeline's regime."""
    if n is None:
        n = int(rng.integers(1, max_n + 1))
    rows = unit_rows(rng, n, dim)
    if quantized_scores:
        scores = rng.integers(0, 4, size=n) / 4.0
    else:
        scores = rng.uniform(0.0, 1.0, size=n)
    return scores, rows @ rows.T


def all_presets(lam=0.5):
    return [fs.make_preset(name, lam) for name in fs.PRESET_NAMES]


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def write_fixture_manifest(
    directory: Path,
    relevance,
    semantic,
    query,
    fps=1.0,
    video_id="fixture",
    cap=fs.DEFAULT_CAP,
):
    """Write pool manifest + three embedding files; returns the manifest path."""
    relevance = np.asarray(relevance, dtype=np.float64)
    n = relevance.shape[0]
    meta = fs.VideoMeta(video_id=video_id, fps=fps, total_frames=int(np.ceil(n * fps)))
    pool = fs.build_pool(meta, cap=cap)
    assert pool.n == n, "fixture fps/frames must produce one candidate per row"
    fs.write_embedding_file(directory / "relevance.fsel", relevance)
    fs.write_embedding_file(directory / "semantic.fsel", np.asarray(semantic, dtype=np.float64))
    fs.write_embedding_file(directory / "query.fsel", np.asarray(query, dtype=np.float64))
    manifest = directory / "manifest.json"
    fs.write_embedding_manifest(pool, "relevance.fsel", "semantic.fsel", "query.fsel", manifest)
    return manifest


def rows_with_cosines(cosines):
    """Unit rows whose raw_relu scores against query [1, 0, ...] equal the cosines."""
    cosines = np.asarray(cosines, dtype=np.float64)
    rows = np.zeros((cosines.shape[0], 2))
    rows[:, 0] = cosines
    rows[:, 1] = np.sqrt(1.0 - cosines**2)
    return rows


def run_cli(args, capsys=None):
    """Invoke the CLI in-process; returns (exit code, stdout, stderr)."""
    if capsys is not None:
        capsys.readouterr()
    code = cli_main([str(a) for a in args])
    if capsys is None:
        return code, "", ""
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_json_file(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
