"""Precomputed per-candidate embeddings in two spaces, and the scores
derived from them.

The selector never runs an encoder.  It consumes three binary files per
video, one row per pool position, in this little-endian layout:

====== ===== ====================================
offset size  content
====== ===== ====================================
0      4     magic ``FSEL``
4      4     format version, unsigned 32-bit, = 1
8      4     row count, unsigned 32-bit
12     4     dimension, unsigned 32-bit
16     --    rows x dimension IEEE-754 float32, row-major, no trailing bytes
====== ===== ====================================

Query vectors use the same layout with a single row.  Rows are
L2-normalized on load (in float64) so inner products are cosines; a row of
zeros cannot be normalized and is rejected rather than skipped, because
skipping would silently shift every later row off its pool position.

Two spaces are kept deliberately separate: the *relevance* space scores
each candidate against the query text, the *semantic* space measures
candidate-to-candidate similarity for the coverage objective.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AlignmentError,
    DegenerateEmbeddingError,
    FormatError,
    ParameterError,
)
from .fileio import atomic_write_bytes, read_json, require_key, write_json
from .pool import CandidatePool, pool_manifest_doc

EMBEDDING_MAGIC = b"FSEL"
EMBEDDING_VERSION = 1
_HEADER = struct.Struct("<4sIII")

RELEVANCE_MODES = ("raw_relu", "zscore_relu_maxnorm")


def write_embedding_file(path, matrix: np.ndarray) -> None:
    """Write a 2-D array as a little-endian float32 embedding file."""
    arr = np.ascontiguousarray(matrix, dtype="<f4")
    if arr.ndim != 2:
        raise ParameterError(f"embedding matrix must be 2-D, got shape {arr.shape}")
    header = _HEADER.pack(EMBEDDING_MAGIC, EMBEDDING_VERSION, arr.shape[0], arr.shape[1])
    atomic_write_bytes(path, header + arr.tobytes())


def read_embedding_file(path) -> np.ndarray:
    """Read an embedding file back as the float32 matrix it stores.

    Raises:
        FormatError: wrong magic, wrong version, or a payload whose size
            disagrees with the declared rows x dimension.
    """
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, rows, dim = _HEADER.unpack_from(data)
    if magic != EMBEDDING_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected {EMBEDDING_MAGIC!r}")
    if version != EMBEDDING_VERSION:
        raise FormatError(f"{path}: unsupported version {version}, expected {EMBEDDING_VERSION}")
    expected = _HEADER.size + rows * dim * 4
    if len(data) != expected:
        raise FormatError(
            f"{path}: payload is {len(data) - _HEADER.size} bytes, "
            f"expected {rows * dim * 4} for {rows}x{dim} float32"
        )
    return np.frombuffer(data, dtype="<f4", offset=_HEADER.size).reshape(rows, dim).copy()


def l2_normalize_rows(matrix: np.ndarray, label: str = "embedding") -> np.ndarray:
    """Return ``matrix`` with unit-norm float64 rows, marked read-only.

    Raises:
        DegenerateEmbeddingError: some row has zero norm; the message names
            the first offending row (0-based file row order).
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise ParameterError(f"{label} matrix must be 2-D, got shape {m.shape}")
    norms = np.linalg.norm(m, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DegenerateEmbeddingError(f"{label} row {int(zero[0])} has zero norm")
    out = m / norms[:, None]
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class EmbeddingSet:
    """Normalized relevance/semantic matrices plus the query vector.

    ``relevance`` is N x d_s, ``semantic`` is N x d_d, ``query`` is d_s;
    row order equals pool position order.
    """

    video_id: str
    relevance: np.ndarray
    query: np.ndarray
    semantic: np.ndarray

    @property
    def n(self) -> int:
        return self.relevance.shape[0]

    @classmethod
    def from_arrays(cls, video_id: str, relevance, query, semantic) -> EmbeddingSet:
        """Normalize raw arrays into an :class:`EmbeddingSet`.

        ``query`` may be a flat vector or a single-row matrix.
        """
        rel = l2_normalize_rows(relevance, label="relevance")
        sem = l2_normalize_rows(semantic, label="semantic")
        q = np.asarray(query, dtype=np.float64)
        if q.ndim == 1:
            q = q[None, :]
        if q.shape[0] != 1:
            raise AlignmentError(f"query must be a single vector, got {q.shape[0]} rows")
        q = l2_normalize_rows(q, label="query")[0]
        if rel.shape[0] != sem.shape[0]:
            raise AlignmentError(
                f"relevance has {rel.shape[0]} rows but semantic has {sem.shape[0]}"
            )
        if q.shape[0] != rel.shape[1]:
            raise AlignmentError(
                f"query dimension {q.shape[0]} does not match relevance dimension {rel.shape[1]}"
            )
        return cls(video_id=video_id, relevance=rel, query=q, semantic=sem)


def embedding_manifest_doc(
    pool: CandidatePool,
    relevance_path: str,
    semantic_path: str,
    query_path: str,
) -> dict:
    """Pool manifest extended with the three embedding file paths."""
    doc = pool_manifest_doc(pool)
    doc["relevance_embeddings"] = relevance_path
    doc["semantic_embeddings"] = semantic_path
    doc["query_embedding"] = query_path
    return doc


def write_embedding_manifest(pool, relevance_path, semantic_path, query_path, out_path) -> None:
    write_json(out_path, embedding_manifest_doc(pool, relevance_path, semantic_path, query_path))


def load_embeddings(manifest_path) -> EmbeddingSet:
    """Load the embedding set referenced by an extended pool manifest.

    Relative embedding paths are resolved against the manifest's directory.

    Raises:
        FormatError: malformed manifest or embedding file.
        AlignmentError: row counts that disagree with the manifest's pool.
        DegenerateEmbeddingError: a zero-norm row in any file.
    """
    doc = read_json(manifest_path)
    if not isinstance(doc, dict):
        raise FormatError(f"{manifest_path}: manifest must be a JSON object")
    where = str(manifest_path)
    video_id = require_key(doc, "video_id", str, where)
    seconds = require_key(doc, "seconds", list, where)
    n = len(seconds)
    base = Path(manifest_path).parent

    def resolve(key: str) -> Path:
        rel = require_key(doc, key, str, where)
        p = Path(rel)
        return p if p.is_absolute() else base / p

    relevance = read_embedding_file(resolve("relevance_embeddings"))
    semantic = read_embedding_file(resolve("semantic_embeddings"))
    query = read_embedding_file(resolve("query_embedding"))
    if relevance.shape[0] != n:
        raise AlignmentError(
            f"relevance embeddings have {relevance.shape[0]} rows, pool has {n} candidates"
        )
    if semantic.shape[0] != n:
        raise AlignmentError(
            f"semantic embeddings have {semantic.shape[0]} rows, pool has {n} candidates"
        )
    if query.shape[0] != 1:
        raise AlignmentError(f"query embedding must have exactly 1 row, got {query.shape[0]}")
    return EmbeddingSet.from_arrays(video_id, relevance, query, semantic)


@dataclass(frozen=True)
class RelevanceScores:
    """Non-negative per-candidate query relevance, one entry per position."""

    scores: np.ndarray
    mode: str

    @property
    def n(self) -> int:
        return self.scores.shape[0]


def relevance_scores(es: EmbeddingSet, mode: str = "raw_relu") -> RelevanceScores:
    """Score every candidate against the query.

    ``raw_relu`` is the primary definition: the cosine against the query,
    clamped at zero.  ``zscore_relu_maxnorm`` standardizes the cosines
    within the video (population std), clamps at zero, and rescales so the
    best candidate scores exactly 1; a constant cosine profile (std 0)
    degrades to all-zero scores, i.e. coverage-only behavior.  Both keep
    scores non-negative and preserve the within-video ordering of the
    positive entries.
    """
    cosines = es.relevance @ es.query
    if mode == "raw_relu":
        scores = np.maximum(cosines, 0.0)
    elif mode == "zscore_relu_maxnorm":
        std = float(cosines.std())
        if std == 0.0:
            scores = np.zeros_like(cosines)
        else:
            z = np.maximum((cosines - cosines.mean()) / std, 0.0)
            peak = float(z.max())
            scores = z / peak if peak > 0.0 else np.zeros_like(z)
    else:
        raise ParameterError(f"unknown relevance mode {mode!r}, expected one of {RELEVANCE_MODES}")
    scores.flags.writeable = False
    return RelevanceScores(scores=scores, mode=mode)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise semantic cosines; entry [j, i] serves candidate j by i."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def validate(self, atol: float = 1e-5) -> list[str]:
        """Report structural defects instead of raising; empty means clean."""
        issues: list[str] = []
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            return [f"not square: shape {v.shape}"]
        asym = float(np.abs(v - v.T).max()) if v.size else 0.0
        if asym > atol:
            issues.append(f"not symmetric: max |v - v.T| = {asym:.3e}")
        diag_err = float(np.abs(np.diagonal(v) - 1.0).max()) if v.size else 0.0
        if diag_err > atol:
            issues.append(f"diagonal deviates from 1 by {diag_err:.3e}")
        if v.size and (float(v.min()) < -1.0 - 1e-6 or float(v.max()) > 1.0 + 1e-6):
            issues.append(f"entries outside [-1, 1]: range [{float(v.min()):.6f}, {float(v.max()):.6f}]")
        return issues


def similarity_matrix(es: EmbeddingSet) -> SimilarityMatrix:
    """All pairwise inner products of the normalized semantic rows."""
    values = es.semantic @ es.semantic.T
    values.flags.writeable = False
    return SimilarityMatrix(values=values)
