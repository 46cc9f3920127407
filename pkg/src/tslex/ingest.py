"""Loading, validating and slicing of multi-channel recordings.

A corpus is a set of recordings.  Each recording groups one or more
synchronised channels (body movement traces, speech audio, anything else
sampled at a fixed rate).  The functions here read the long-form CSV
interchange format, turn raw audio into per-block energy, and cut every
channel of a recording into equally long slices for downstream feature
extraction.

Functions
---------
load_recordings
    Read one or more long-form CSV files into RecordingGroup objects.
resample_energy
    Collapse a channel into sum-of-squares energy per fixed block.
slice_recording
    Cut a recording into consecutive fixed-duration slices.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CorpusFormatError

ROLES = ("movement", "speech", "other")

CSV_COLUMNS = ("recording_id", "channel_id", "role", "sample_rate", "t_index", "value")


@dataclass(eq=False)
class Channel:
    """A single uniformly sampled signal.

    Parameters
    ----------
    channel_id: str
        Identifier, unique within its recording.
    sample_rate: float
        Samples per second, strictly positive.
    values: ndarray
        1-d float array of samples.  Must be finite and non-empty.
    label: str
        Free-form human readable label.
    """

    channel_id: str
    sample_rate: float
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("channel %r needs a non-empty 1-d sample array" % self.channel_id)
        if not (self.sample_rate > 0):
            raise ValueError("channel %r has non-positive sample rate" % self.channel_id)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("channel %r contains non-finite samples" % self.channel_id)

    @property
    def duration(self):
        """Channel length in seconds."""
        return self.values.size / self.sample_rate


@dataclass(eq=False)
class RecordingGroup:
    """All channels of one recording plus their roles.

    ``roles`` maps channel_id to one of ``movement``, ``speech`` or
    ``other``.  Channel ids must be unique and every channel must have a
    role.
    """

    recording_id: str
    channels: list[Channel] = field(default_factory=list)
    roles: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.channels:
            raise ValueError("recording %r has no channels" % self.recording_id)
        ids = [c.channel_id for c in self.channels]
        if len(set(ids)) != len(ids):
            raise ValueError("recording %r has duplicate channel ids" % self.recording_id)
        for cid in ids:
            role = self.roles.get(cid)
            if role not in ROLES:
                raise ValueError(
                    "recording %r channel %r has invalid role %r" % (self.recording_id, cid, role)
                )

    def channels_with_role(self, role):
        """Channels whose role equals ``role``, in stored order."""
        return [c for c in self.channels if self.roles[c.channel_id] == role]

    def channel(self, channel_id):
        for c in self.channels:
            if c.channel_id == channel_id:
                return c
        raise KeyError(channel_id)


@dataclass(eq=False)
class Slice:
    """One fixed-duration cut across all channels of a recording.

    ``windows`` maps channel_id to the contiguous run of samples that
    falls inside this slice.  Window lengths differ between channels when
    their sample rates differ.
    """

    recording_id: str
    slice_index: int
    start_time: float
    duration: float
    windows: dict[str, np.ndarray]


def _parse_float(text, what, line_no):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise CorpusFormatError(
            "row %d: %s %r is not numeric" % (line_no, what, text)
        ) from None
    if not math.isfinite(v):
        raise CorpusFormatError("row %d: %s %r is not finite" % (line_no, what, text))
    return v


def _parse_index(text, line_no):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise CorpusFormatError(
            "row %d: t_index %r is not an integer" % (line_no, text)
        ) from None


def load_recordings(source):
    """Read long-form CSV recordings.

    The expected header is exactly
    ``recording_id,channel_id,role,sample_rate,t_index,value``.  Every row
    carries one sample.  Within a channel, ``t_index`` must enumerate
    0..n-1 without gaps or duplicates, and role and sample_rate must not
    change between rows.

    Parameters
    ----------
    source: str, Path or list thereof
        CSV file path(s).

    Returns
    -------
    list of RecordingGroup
        Sorted by recording_id.

    Raises
    ------
    CorpusFormatError
        On a missing or unknown column, a non-numeric or non-finite cell
        (the message names the offending row number), a duplicate
        (recording, channel, t_index) triple, an index gap, inconsistent
        role or rate declarations, or an empty channel.
    """
    paths = [source] if isinstance(source, (str, Path)) else list(source)
    if not paths:
        raise CorpusFormatError("no input files given")

    # per (recording, channel): declared meta plus growing sample list
    meta = {}
    samples = {}

    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise CorpusFormatError("%s: file is empty" % path) from None
            header = [h.strip() for h in header]
            missing = [c for c in CSV_COLUMNS if c not in header]
            if missing:
                raise CorpusFormatError("%s: missing required column(s) %s" % (path, ", ".join(missing)))
            unknown = [c for c in header if c not in CSV_COLUMNS]
            if unknown:
                raise CorpusFormatError("%s: unknown column(s) %s" % (path, ", ".join(unknown)))
            pos = {c: header.index(c) for c in CSV_COLUMNS}

            for line_no, row in enumerate(reader, start=2):
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) != len(header):
                    raise CorpusFormatError(
                        "%s row %d: expected %d fields, got %d" % (path, line_no, len(header), len(row))
                    )
                rid = row[pos["recording_id"]].strip()
                cid = row[pos["channel_id"]].strip()
                role = row[pos["role"]].strip()
                if not rid or not cid:
                    raise CorpusFormatError("%s row %d: empty recording or channel id" % (path, line_no))
                if role not in ROLES:
                    raise CorpusFormatError(
                        "%s row %d: role %r is not one of %s" % (path, line_no, role, "/".join(ROLES))
                    )
                rate = _parse_float(row[pos["sample_rate"]], "sample_rate", line_no)
                t = _parse_index(row[pos["t_index"]], line_no)
                value = _parse_float(row[pos["value"]], "value", line_no)

                key = (rid, cid)
                if key not in meta:
                    meta[key] = (role, rate)
                    samples[key] = ([], [])
                else:
                    known_role, known_rate = meta[key]
                    if role != known_role:
                        raise CorpusFormatError(
                            "%s row %d: channel %s/%s changes role from %r to %r"
                            % (path, line_no, rid, cid, known_role, role)
                        )
                    if rate != known_rate:
                        raise CorpusFormatError(
                            "%s row %d: channel %s/%s changes sample_rate from %r to %r"
                            % (path, line_no, rid, cid, known_rate, rate)
                        )
                idx_list, val_list = samples[key]
                idx_list.append(t)
                val_list.append(value)

    if not meta:
        raise CorpusFormatError("input contains no samples")

    groups = {}
    for (rid, cid), (role, rate) in meta.items():
        idx_list, val_list = samples[(rid, cid)]
        idx = np.asarray(idx_list, dtype=np.int64)
        vals = np.asarray(val_list, dtype=np.float64)
        if idx.size == 0:
            raise CorpusFormatError("channel %s/%s is empty" % (rid, cid))
        order = np.argsort(idx, kind="stable")
        idx = idx[order]
        vals = vals[order]
        dup = np.nonzero(np.diff(idx) == 0)[0]
        if dup.size:
            raise CorpusFormatError(
                "duplicate sample for recording %r channel %r t_index %d" % (rid, cid, int(idx[dup[0]]))
            )
        if idx[0] != 0 or idx[-1] != idx.size - 1:
            raise CorpusFormatError(
                "channel %s/%s: t_index must run 0..%d without gaps" % (rid, cid, idx.size - 1)
            )
        groups.setdefault(rid, []).append((cid, role, rate, vals))

    out = []
    for rid in sorted(groups):
        chans = []
        roles = {}
        for cid, role, rate, vals in sorted(groups[rid], key=lambda item: item[0]):
            chans.append(Channel(channel_id=cid, sample_rate=rate, values=vals))
            roles[cid] = role
        out.append(RecordingGroup(recording_id=rid, channels=chans, roles=roles))
    return out


def resample_energy(channel, block_seconds=1.0):
    """Collapse a channel into energy per fixed-length block.

    Each output sample is the sum of squares of the input samples that
    fall into one block of ``block_seconds`` seconds.  A trailing partial
    block is dropped.  The output channel keeps the id and label and has
    sample rate ``1 / block_seconds``.

    Parameters
    ----------
    channel: Channel
    block_seconds: float
        Block length in seconds.  Must cover at least one input sample.

    Returns
    -------
    Channel

    Raises
    ------
    ValueError
        When a block would be shorter than one input sample, or no full
        block fits into the channel.
    """
    if not (block_seconds > 0):
        raise ValueError("block_seconds must be positive")
    per_block = block_seconds * channel.sample_rate
    if per_block < 1.0:
        raise ValueError(
            "block of %gs covers %.3f samples at %g Hz; need at least one"
            % (block_seconds, per_block, channel.sample_rate)
        )
    n = int(round(per_block))
    blocks = channel.values.size // n
    if blocks == 0:
        raise ValueError("channel %r is shorter than one block" % channel.channel_id)
    trimmed = channel.values[: blocks * n]
    energy = np.square(trimmed).reshape(blocks, n).sum(axis=1)
    return Channel(
        channel_id=channel.channel_id,
        sample_rate=1.0 / block_seconds,
        values=energy,
        label=channel.label,
    )


def slice_recording(group, duration):
    """Cut every channel of a recording into fixed-duration slices.

    The number of slices is determined by the shortest channel; whatever
    does not fill a complete slice at the end is dropped.  Per channel,
    each slice window holds ``round(duration * sample_rate)`` samples, so
    concatenating the windows of one channel reproduces a prefix of that
    channel.

    Parameters
    ----------
    group: RecordingGroup
    duration: float
        Slice length in seconds.

    Returns
    -------
    list of Slice
        Slice ``i`` starts at ``i * duration`` seconds.

    Raises
    ------
    ValueError
        When the duration does not cover a single full slice of the
        shortest channel, or is shorter than one sample of some channel.
    """
    if not (duration > 0):
        raise ValueError("slice duration must be positive")

    per_slice = {}
    counts = []
    for ch in group.channels:
        n = int(round(duration * ch.sample_rate))
        if n < 1:
            raise ValueError(
                "slice of %gs is shorter than one sample of channel %r" % (duration, ch.channel_id)
            )
        per_slice[ch.channel_id] = n
        counts.append(ch.values.size // n)
    n_slices = min(counts)
    if n_slices == 0:
        raise ValueError(
            "slice duration %gs exceeds the shortest channel of recording %r"
            % (duration, group.recording_id)
        )

    slices = []
    for i in range(n_slices):
        windows = {}
        for ch in group.channels:
            n = per_slice[ch.channel_id]
            windows[ch.channel_id] = ch.values[i * n : (i + 1) * n]
        slices.append(
            Slice(
                recording_id=group.recording_id,
                slice_index=i,
                start_time=i * duration,
                duration=duration,
                windows=windows,
            )
        )
    return slices
