"""Readers and writers for all on-disk artifacts.

Formats
-------
FSEQ1 feature file (little-endian throughout):
    magic ``FSEQ`` | version u32 = 1 | T u64 | D u64 | fps f32 |
    stream u8 (0=RGB, 1=FLOW) | 3 zero pad bytes | payload T*D f32 row-major.
    Header is 32 bytes, total size 32 + 4*T*D.

Annotations: UTF-8 JSON object with keys video_id, fps, n_frames, users
(array of per-frame score arrays). Manifest: JSON array of entry objects.
Both are written without a trailing newline so that truncating any single
byte always breaks the parse.

Model bundle: magic ``MBDL`` | version u32 = 1 | header_len u64 | UTF-8
JSON header | weight blob. The header carries variant, stream, layer specs,
train metadata, and a name -> (shape, offset) index into the blob; weights
are stored as f64 little-endian so reloaded models are bit-identical.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, IoError

FSEQ_MAGIC = b"FSEQ"
FSEQ_VERSION = 1
FSEQ_HEADER = struct.Struct("<4sIQQfB3s")

BUNDLE_MAGIC = b"MBDL"
BUNDLE_VERSION = 1

STREAMS = ("rgb", "flow")
VARIANTS = ("baseline", "convnet", "convlstm", "summarynet")


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class FeatureSequence:
    """Per-frame feature matrix for one stream of one video."""

    video_id: str
    stream: str
    fps: float
    frames: np.ndarray  # (T, D) float32

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float32)
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        validate_features(self)

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True)
class AnnotationSet:
    """Per-user per-frame importance scores for one video."""

    video_id: str
    fps: float
    n_frames: int
    users: tuple  # tuple of (n_frames,) float64 arrays

    def __post_init__(self):
        users = tuple(np.asarray(u, dtype=np.float64) for u in self.users)
        for u in users:
            u.setflags(write=False)
        object.__setattr__(self, "users", users)
        validate_annotations(self)

    @property
    def n_users(self) -> int:
        return len(self.users)


@dataclass(frozen=True)
class ManifestEntry:
    video_id: str
    path_rgb: str
    path_annotations: str
    path_flow: str | None = None
    category: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple
    root: str = "."

    def resolve(self, path: str) -> str:
        return os.path.normpath(os.path.join(self.root, path))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass
class LayerSpec:
    """Descriptor of one weighted layer; enough to rebuild the layer."""

    kind: str  # dense | conv1d | lstm
    in_dim: int
    out_dim: int
    kernel_width: int = 0
    bidirectional: bool = False
    activation: str = "linear"
    group: str = "scorer"  # encdec | scorer

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "kernel_width": self.kernel_width,
            "bidirectional": self.bidirectional,
            "activation": self.activation,
            "group": self.group,
        }

    @classmethod
    def from_json(cls, d: dict) -> "LayerSpec":
        return cls(**d)


@dataclass
class ModelBundle:
    """All learned parameters of one model variant for one stream."""

    variant: str
    stream: str
    layer_specs: list  # of LayerSpec
    weights: dict  # name -> float64 ndarray
    train_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        validate_bundle(self)


# ---------------------------------------------------------------------------
# validation


def validate_features(seq: FeatureSequence) -> None:
    if seq.stream not in STREAMS:
        raise ValueError(f"unknown stream {seq.stream!r}")
    if seq.frames.ndim != 2:
        raise ValueError("frames must be a T x D matrix")
    t, d = seq.frames.shape
    if t < 1 or d < 1:
        raise ValueError(f"need T >= 1 and D >= 1, got {t} x {d}")
    if not (np.isfinite(seq.fps) and seq.fps > 0):
        raise ValueError(f"fps must be finite and positive, got {seq.fps}")
    if not np.isfinite(seq.frames).all():
        raise ValueError("feature payload contains NaN or Inf")
    if seq.stream == "flow":
        lo, hi = float(seq.frames.min()), float(seq.frames.max())
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"flow features must lie in [0,1], got [{lo}, {hi}]")


def validate_annotations(ann: AnnotationSet) -> None:
    if not ann.users:
        raise ValueError("annotation set needs at least one user")
    if ann.n_frames < 1:
        raise ValueError("n_frames must be >= 1")
    if not (np.isfinite(ann.fps) and ann.fps > 0):
        raise ValueError(f"fps must be finite and positive, got {ann.fps}")
    for i, u in enumerate(ann.users):
        if u.ndim != 1 or u.shape[0] != ann.n_frames:
            raise ValueError(f"user {i} has {u.shape[0] if u.ndim == 1 else 'non-vector'} scores, expected {ann.n_frames}")
        if not np.isfinite(u).all():
            raise ValueError(f"user {i} has non-finite scores")
        if (u < 0).any():
            raise ValueError(f"user {i} has negative scores")


def validate_manifest(manifest: DatasetManifest, check_files: bool = True) -> None:
    seen = set()
    for e in manifest.entries:
        if e.video_id in seen:
            raise ValueError(f"duplicate video_id {e.video_id!r} in manifest")
        seen.add(e.video_id)
        if check_files:
            paths = [e.path_rgb, e.path_annotations]
            if e.path_flow is not None:
                paths.append(e.path_flow)
            for p in paths:
                resolved = manifest.resolve(p)
                if not os.path.isfile(resolved):
                    raise IoError(f"manifest entry {e.video_id!r} references missing file {resolved}")


def validate_bundle(bundle: ModelBundle) -> None:
    if bundle.variant not in VARIANTS:
        raise ValueError(f"unknown variant {bundle.variant!r}")
    if bundle.stream not in STREAMS:
        raise ValueError(f"unknown stream {bundle.stream!r}")
    for name, w in bundle.weights.items():
        if not np.isfinite(w).all():
            raise ValueError(f"weight {name!r} contains NaN or Inf")


# ---------------------------------------------------------------------------
# FSEQ1 feature files


def write_features(seq: FeatureSequence, path: str) -> None:
    header = FSEQ_HEADER.pack(
        FSEQ_MAGIC,
        FSEQ_VERSION,
        seq.n_frames,
        seq.dim,
        np.float32(seq.fps),
        STREAMS.index(seq.stream),
        b"\x00\x00\x00",
    )
    payload = np.ascontiguousarray(seq.frames, dtype="<f4").tobytes()
    _write_atomic(path, header + payload)


def read_features(path: str) -> FeatureSequence:
    data = _read_bytes(path)
    if len(data) < FSEQ_HEADER.size:
        raise FormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, t, d, fps, stream_code, pad = FSEQ_HEADER.unpack_from(data)
    if magic != FSEQ_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != FSEQ_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if t < 1 or d < 1:
        raise FormatError(f"{path}: invalid shape {t} x {d}")
    if stream_code not in (0, 1):
        raise FormatError(f"{path}: invalid stream code {stream_code}")
    if pad != b"\x00\x00\x00":
        raise FormatError(f"{path}: nonzero pad bytes")
    expected = FSEQ_HEADER.size + 4 * t * d
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    frames = np.frombuffer(data, dtype="<f4", count=t * d, offset=FSEQ_HEADER.size).reshape(t, d)
    video_id = os.path.splitext(os.path.basename(path))[0]
    return FeatureSequence(video_id=video_id, stream=STREAMS[stream_code], fps=float(fps), frames=frames)


# ---------------------------------------------------------------------------
# annotations and manifests


def write_annotations(ann: AnnotationSet, path: str) -> None:
    doc = {
        "video_id": ann.video_id,
        "fps": ann.fps,
        "n_frames": ann.n_frames,
        "users": [u.tolist() for u in ann.users],
    }
    _write_atomic(path, json.dumps(doc).encode("utf-8"))


def read_annotations(path: str) -> AnnotationSet:
    doc = _read_json(path)
    try:
        return AnnotationSet(
            video_id=str(doc["video_id"]),
            fps=float(doc["fps"]),
            n_frames=int(doc["n_frames"]),
            users=tuple(np.asarray(u, dtype=np.float64) for u in doc["users"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed annotation file ({exc})") from exc


def write_manifest(manifest: DatasetManifest, path: str) -> None:
    rows = []
    for e in manifest.entries:
        row = {"video_id": e.video_id, "path_rgb": e.path_rgb, "path_annotations": e.path_annotations}
        if e.path_flow is not None:
            row["path_flow"] = e.path_flow
        if e.category is not None:
            row["category"] = e.category
        rows.append(row)
    _write_atomic(path, json.dumps(rows).encode("utf-8"))


def read_manifest(path: str, check_files: bool = True) -> DatasetManifest:
    doc = _read_json(path)
    if not isinstance(doc, list):
        raise FormatError(f"{path}: manifest must be a JSON array")
    entries = []
    for row in doc:
        try:
            entries.append(
                ManifestEntry(
                    video_id=str(row["video_id"]),
                    path_rgb=str(row["path_rgb"]),
                    path_annotations=str(row["path_annotations"]),
                    path_flow=str(row["path_flow"]) if "path_flow" in row else None,
                    category=str(row["category"]) if "category" in row else None,
                )
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"{path}: malformed manifest entry ({exc})") from exc
    manifest = DatasetManifest(entries=tuple(entries), root=os.path.dirname(os.path.abspath(path)))
    validate_manifest(manifest, check_files=check_files)
    return manifest


# ---------------------------------------------------------------------------
# model bundles


def save_model(bundle: ModelBundle, path: str) -> None:
    validate_bundle(bundle)
    names = list(bundle.weights)
    index = []
    offset = 0
    blobs = []
    for name in names:
        w = np.ascontiguousarray(bundle.weights[name], dtype="<f8")
        raw = w.tobytes()
        index.append({"name": name, "shape": list(w.shape), "offset": offset, "nbytes": len(raw)})
        blobs.append(raw)
        offset += len(raw)
    header = {
        "variant": bundle.variant,
        "stream": bundle.stream,
        "layer_specs": [s.to_json() for s in bundle.layer_specs],
        "train_meta": bundle.train_meta,
        "weights": index,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    prefix = BUNDLE_MAGIC + struct.pack("<IQ", BUNDLE_VERSION, len(header_bytes))
    _write_atomic(path, prefix + header_bytes + b"".join(blobs))


def load_model(path: str) -> ModelBundle:
    data = _read_bytes(path)
    if len(data) < 16:
        raise FormatError(f"{path}: truncated bundle")
    if data[:4] != BUNDLE_MAGIC:
        raise FormatError(f"{path}: bad magic {data[:4]!r}")
    version, header_len = struct.unpack_from("<IQ", data, 4)
    if version != BUNDLE_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if len(data) < 16 + header_len:
        raise FormatError(f"{path}: truncated header")
    try:
        header = json.loads(data[16 : 16 + header_len].decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path}: bad header JSON ({exc})") from exc
    blob = data[16 + header_len :]
    try:
        specs = [LayerSpec.from_json(s) for s in header["layer_specs"]]
        weights = {}
        for item in header["weights"]:
            start, nbytes = item["offset"], item["nbytes"]
            if start + nbytes > len(blob):
                raise FormatError(f"{path}: weight {item['name']!r} extends past end of file")
            shape = tuple(item["shape"])
            count = int(np.prod(shape)) if shape else 1
            if count * 8 != nbytes:
                raise FormatError(f"{path}: weight {item['name']!r} shape/size mismatch")
            weights[item["name"]] = np.frombuffer(blob, dtype="<f8", count=count, offset=start).reshape(shape).copy()
        if sum(i["nbytes"] for i in header["weights"]) != len(blob):
            raise FormatError(f"{path}: blob size does not match weight index")
        return ModelBundle(
            variant=header["variant"],
            stream=header["stream"],
            layer_specs=specs,
            weights=weights,
            train_meta=header["train_meta"],
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed bundle header ({exc})") from exc


# ---------------------------------------------------------------------------
# helpers


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _read_json(path: str):
    data = _read_bytes(path)
    try:
        return json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def _write_atomic(path: str, data: bytes) -> None:
    tmp = path + ".tmp"
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise IoError(f"cannot write {path}: {exc}") from exc
