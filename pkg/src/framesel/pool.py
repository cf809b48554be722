"""1 FPS candidate pool construction and index alignment.

A video with ``total_frames`` decoded frames at ``fps`` frames per second
spans ``floor(total_frames / fps)`` whole seconds; each whole second is a
selection candidate.  When there are more candidate seconds than ``cap``
(default 1000) the pool is thinned with a truncated even-spacing rule that
always keeps the first and last second.

Three coordinate systems stay aligned throughout the pipeline:

* position -- 1-based index into the pool, which is also the row index of
  the per-candidate embedding matrices;
* second   -- integer second in the source video;
* frame    -- decoded frame number, ``floor(second * fps)`` clamped to range.

Alignment is only as exact as the supplied ``fps``: if a container reports
an averaged rate, the frame indices inherit that approximation.  All types
here are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpacingError, EmptyPoolError, FormatError, ParameterError
from .fileio import read_json, require_key, write_json

DEFAULT_CAP = 1000


@dataclass(frozen=True)
class VideoMeta:
    """Identity and decode geometry of one video."""

    video_id: str
    fps: float
    total_frames: int

    def __post_init__(self) -> None:
        if not self.fps > 0:
            raise ParameterError(f"fps must be positive, got {self.fps}")
        if self.total_frames < 1:
            raise ParameterError(f"total_frames must be >= 1, got {self.total_frames}")

    @property
    def duration_seconds(self) -> int:
        return math.floor(self.total_frames / self.fps)


@dataclass(frozen=True)
class CandidatePool:
    """Ordered candidate seconds of one video, at most ``cap`` of them."""

    meta: VideoMeta
    seconds: tuple[int, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self) -> None:
        duration = self.meta.duration_seconds
        if self.cap < 1:
            raise ParameterError(f"cap must be >= 1, got {self.cap}")
        if len(self.seconds) == 0:
            raise ParameterError("candidate pool may not be empty")
        if len(self.seconds) > self.cap:
            raise ParameterError(f"{len(self.seconds)} candidates exceed cap {self.cap}")
        if any(b <= a for a, b in zip(self.seconds, self.seconds[1:])):
            raise ParameterError("candidate seconds must be strictly increasing")
        if self.seconds[0] < 0 or self.seconds[-1] > duration - 1:
            raise ParameterError(
                f"candidate seconds must lie in [0, {duration - 1}], "
                f"got range [{self.seconds[0]}, {self.seconds[-1]}]"
            )
        if duration <= self.cap and self.seconds != tuple(range(duration)):
            raise ParameterError(
                "pool below cap must contain every whole second exactly once"
            )

    @property
    def n(self) -> int:
        return len(self.seconds)


def build_pool(meta: VideoMeta, cap: int = DEFAULT_CAP) -> CandidatePool:
    """Construct the candidate pool for ``meta``, thinning to ``cap`` entries.

    Whole seconds ``0 .. duration-1`` are used directly when they fit the
    cap.  Otherwise entry ``k`` is ``trunc(k * (duration-1) / (cap-1))``,
    evaluated in 64-bit floating point, which keeps both endpoints and is
    strictly increasing because the spacing exceeds one.

    Raises:
        EmptyPoolError: the video spans zero whole seconds.
        DegenerateSpacingError: ``cap == 1`` but more than one second exists.
        ParameterError: ``cap < 1``.
    """
    if cap < 1:
        raise ParameterError(f"cap must be >= 1, got {cap}")
    duration = meta.duration_seconds
    if duration == 0:
        raise EmptyPoolError(
            f"video {meta.video_id!r} spans zero whole seconds "
            f"({meta.total_frames} frames at {meta.fps} fps)"
        )
    if duration <= cap:
        seconds = tuple(range(duration))
    else:
        if cap == 1:
            raise DegenerateSpacingError(
                f"cannot spread cap=1 over {duration} candidate seconds"
            )
        grid = np.arange(cap, dtype=np.float64) * float(duration - 1) / float(cap - 1)
        seconds = tuple(int(v) for v in np.trunc(grid).astype(np.int64))
    return CandidatePool(meta=meta, seconds=seconds, cap=cap)


def second_of_position(pool: CandidatePool, position: int) -> int:
    """Map a 1-based pool position to its integer second."""
    if not 1 <= position <= pool.n:
        raise IndexError(f"position {position} outside 1..{pool.n}")
    return pool.seconds[position - 1]


def frame_index_of_second(meta: VideoMeta, second: int) -> int:
    """Map an integer second to its decoded frame index, clamped into range."""
    raw = math.floor(second * meta.fps)
    return min(max(raw, 0), meta.total_frames - 1)


def pool_manifest_doc(pool: CandidatePool) -> dict:
    """The manifest document for ``pool``, keys in on-disk order."""
    return {
        "video_id": pool.meta.video_id,
        "fps": float(pool.meta.fps),
        "total_frames": int(pool.meta.total_frames),
        "cap": int(pool.cap),
        "seconds": [int(s) for s in pool.seconds],
    }


def write_pool_manifest(pool: CandidatePool, path) -> None:
    write_json(path, pool_manifest_doc(pool))


def read_pool_manifest(path) -> CandidatePool:
    """Load a pool manifest, re-validating every pool invariant.

    Extra keys are permitted so extended manifests (with embedding paths)
    can be read by the same function.
    """
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: manifest must be a JSON object")
    where = str(path)
    video_id = require_key(doc, "video_id", str, where)
    fps = float(require_key(doc, "fps", float, where))
    total_frames = require_key(doc, "total_frames", int, where)
    cap = require_key(doc, "cap", int, where)
    seconds = require_key(doc, "seconds", list, where)
    if not all(isinstance(s, int) and not isinstance(s, bool) for s in seconds):
        raise FormatError(f"{where}: seconds must be an array of integers")
    try:
        meta = VideoMeta(video_id=video_id, fps=fps, total_frames=total_frames)
        return CandidatePool(meta=meta, seconds=tuple(seconds), cap=cap)
    except ParameterError as exc:
        raise FormatError(f"{where}: {exc}") from exc
