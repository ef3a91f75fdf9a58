"""GOP / video / repository metadata and the line-oriented repository file.

File format (UTF-8, comma separated, one record per line)::

    # comment
    V,<video id>,<views in last period>
    G,<index>,<size MB>,<transcode seconds>
    G,...

GOP rows belong to the most recent ``V`` row. Blank lines and ``#`` lines are
skipped. Per-GOP values are held in numpy arrays so a 50,000 video repository
(~63M GOPs) stays in memory.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np


class RepositoryFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GopMeta:
    index: int
    size_mb: float
    transcode_seconds: float

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"GOP index must be >= 1, got {self.index}")
        if not self.size_mb > 0:
            raise ValueError(f"GOP {self.index}: size_mb must be > 0, got {self.size_mb}")
        if not self.transcode_seconds > 0:
            raise ValueError(
                f"GOP {self.index}: transcode_seconds must be > 0, got {self.transcode_seconds}"
            )


@dataclass(frozen=True, eq=False)
class VideoMeta:
    """A video: GOP sizes (MB) and transcoding times (s) in GOP order, plus last-period views.

    GOP ``i`` (1-based) lives at array position ``i - 1``.
    """

    id: str
    sizes_mb: np.ndarray
    transcode_seconds: np.ndarray
    views_last_period: int = 0

    def __post_init__(self):
        sizes = np.asarray(self.sizes_mb, dtype=np.float64)
        times = np.asarray(self.transcode_seconds, dtype=np.float64)
        if sizes.ndim != 1 or sizes.shape != times.shape:
            raise ValueError(f"video {self.id}: size and time arrays must be 1-d and equal length")
        if sizes.size == 0:
            raise ValueError(f"video {self.id}: needs at least one GOP")
        if not np.all(sizes > 0):
            raise ValueError(f"video {self.id}: GOP sizes must be > 0")
        if not np.all(times > 0):
            raise ValueError(f"video {self.id}: GOP transcode times must be > 0")
        views = int(self.views_last_period)
        if views != self.views_last_period or views < 0:
            raise ValueError(f"video {self.id}: views must be a non-negative integer")
        sizes.flags.writeable = False
        times.flags.writeable = False
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "sizes_mb", sizes)
        object.__setattr__(self, "transcode_seconds", times)
        object.__setattr__(self, "views_last_period", views)

    @classmethod
    def from_gops(cls, id: str, gops: Sequence[GopMeta], views_last_period: int = 0) -> "VideoMeta":
        for expected, gop in enumerate(gops, start=1):
            if gop.index != expected:
                raise ValueError(
                    f"video {id}: GOP indices must be 1..m in order; expected {expected}, got {gop.index}"
                )
        return cls(
            id,
            np.array([g.size_mb for g in gops], dtype=np.float64),
            np.array([g.transcode_seconds for g in gops], dtype=np.float64),
            views_last_period,
        )

    @property
    def gop_count(self) -> int:
        return self.sizes_mb.size

    @property
    def gops(self) -> list[GopMeta]:
        return [
            GopMeta(i, float(s), float(t))
            for i, (s, t) in enumerate(zip(self.sizes_mb, self.transcode_seconds), start=1)
        ]

    def with_views(self, views: int) -> "VideoMeta":
        return VideoMeta(self.id, self.sizes_mb, self.transcode_seconds, views)

    def __eq__(self, other):
        if not isinstance(other, VideoMeta):
            return NotImplemented
        return (
            self.id == other.id
            and self.views_last_period == other.views_last_period
            and np.array_equal(self.sizes_mb, other.sizes_mb)
            and np.array_equal(self.transcode_seconds, other.transcode_seconds)
        )

    __hash__ = None


def video_size_mb(v: VideoMeta) -> float:
    return float(v.sizes_mb.sum())


def video_transcode_seconds(v: VideoMeta) -> float:
    return float(v.transcode_seconds.sum())


@dataclass(frozen=True)
class Repository:
    videos: tuple[VideoMeta, ...] = ()
    period_months: float = 1.0
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "videos", tuple(self.videos))
        if not self.period_months > 0:
            raise ValueError(f"period_months must be > 0, got {self.period_months}")
        by_id = {}
        for v in self.videos:
            if v.id in by_id:
                raise ValueError(f"duplicate video id {v.id!r}")
            by_id[v.id] = v
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self):
        return len(self.videos)

    def __iter__(self) -> Iterator[VideoMeta]:
        return iter(self.videos)

    def __getitem__(self, video_id: str) -> VideoMeta:
        return self._by_id[video_id]

    def with_views(self, views: Iterable[int]) -> "Repository":
        views = list(views)
        if len(views) != len(self.videos):
            raise ValueError(f"expected {len(self.videos)} view counts, got {len(views)}")
        return Repository(
            tuple(v.with_views(int(n)) for v, n in zip(self.videos, views)), self.period_months
        )


def write_repository(repo: Repository, out) -> None:
    """Write `repo` to a text stream or path. Floats use repr, so reloads are exact."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            write_repository(repo, fh)
        return
    out.write(f"# period_months={repo.period_months!r}\n")
    for v in repo.videos:
        out.write(f"V,{v.id},{v.views_last_period}\n")
        out.writelines(
            f"G,{i},{s!r},{t!r}\n"
            for i, (s, t) in enumerate(zip(v.sizes_mb.tolist(), v.transcode_seconds.tolist()), start=1)
        )


def save_repository(repo: Repository, path: str | Path) -> None:
    write_repository(repo, path)


def _parse_number(text: str, kind, lineno: int, what: str):
    try:
        return kind(text)
    except ValueError:
        raise RepositoryFormatError(f"line {lineno}: bad {what} {text!r}") from None


def parse_repository(lines: Iterable[str], period_months: float | None = None) -> Repository:
    videos: list[VideoMeta] = []
    seen: set[str] = set()
    current: tuple[str, int, int] | None = None  # id, views, header line
    sizes: list[float] = []
    times: list[float] = []
    file_period = 1.0

    def close():
        if current is None:
            return
        vid, views, at = current
        if not sizes:
            raise RepositoryFormatError(f"line {at}: video {vid!r} has no GOP rows")
        try:
            videos.append(VideoMeta(vid, np.array(sizes), np.array(times), views))
        except ValueError as exc:
            raise RepositoryFormatError(f"line {at}: {exc}") from None

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep and key.strip() == "period_months":
                file_period = _parse_number(value.strip(), float, lineno, "period_months")
            continue
        parts = [p.strip() for p in line.split(",")]
        tag = parts[0]
        if tag == "V":
            if len(parts) != 3:
                raise RepositoryFormatError(f"line {lineno}: video row needs 3 fields")
            close()
            vid = parts[1]
            if vid in seen:
                raise RepositoryFormatError(f"line {lineno}: duplicate video id {vid!r}")
            seen.add(vid)
            views = _parse_number(parts[2], int, lineno, "view count")
            if views < 0:
                raise RepositoryFormatError(f"line {lineno}: negative view count for {vid!r}")
            current = (vid, views, lineno)
            sizes, times = [], []
        elif tag == "G":
            if current is None:
                raise RepositoryFormatError(f"line {lineno}: GOP row before any video row")
            if len(parts) != 4:
                raise RepositoryFormatError(f"line {lineno}: GOP row needs 4 fields")
            index = _parse_number(parts[1], int, lineno, "GOP index")
            if index != len(sizes) + 1:
                raise RepositoryFormatError(
                    f"line {lineno}: video {current[0]!r} GOP index {index} is not contiguous "
                    f"(expected {len(sizes) + 1})"
                )
            size = _parse_number(parts[2], float, lineno, "size_mb")
            secs = _parse_number(parts[3], float, lineno, "transcode_seconds")
            if not size > 0 or not secs > 0:
                raise RepositoryFormatError(
                    f"line {lineno}: GOP size and transcode time must be > 0"
                )
            sizes.append(size)
            times.append(secs)
        else:
            raise RepositoryFormatError(f"line {lineno}: unknown row tag {tag!r}")
    close()
    return Repository(tuple(videos), file_period if period_months is None else period_months)


def load_repository(path: str | Path, period_months: float | None = None) -> Repository:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"repository file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return parse_repository(fh, period_months)


def repository_to_text(repo: Repository) -> str:
    buf = io.StringIO()
    write_repository(repo, buf)
    return buf.getvalue()
