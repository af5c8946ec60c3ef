"""Dataset manifests: provenance records for paired (source, target) images.

On-disk format is JSON lines: a header object carrying schema_version and
created_seed, then one sample object per line. Image paths are stored
relative to the manifest's directory so datasets stay relocatable.
"""

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

from ..errors import ManifestError
from .images import load_image

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GeneratorParams:
    guidance: float = 3.0
    strength: float = 0.7
    steps: int = 50


@dataclass(frozen=True)
class PairedSample:
    id: str
    source_path: str
    target_path: str
    prompt: str
    seed: int
    generator_params: GeneratorParams = field(default_factory=GeneratorParams)


@dataclass
class DatasetManifest:
    samples: list
    created_seed: int = 0
    schema_version: int = SCHEMA_VERSION
    root: Path = field(default_factory=Path, compare=False)

    def __post_init__(self):
        ids = [s.id for s in self.samples]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ManifestError(f"duplicate sample ids: {dupes[:5]}")
        self.root = Path(self.root)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def resolve_source(self, sample: PairedSample) -> Path:
        return self.root / sample.source_path

    def resolve_target(self, sample: PairedSample) -> Path:
        return self.root / sample.target_path

    def subset(self, samples) -> "DatasetManifest":
        return DatasetManifest(
            samples=list(samples),
            created_seed=self.created_seed,
            schema_version=self.schema_version,
            root=self.root,
        )


def write_manifest(manifest: DatasetManifest, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(
        {"schema_version": manifest.schema_version, "created_seed": manifest.created_seed},
        sort_keys=True,
    )]
    for s in manifest.samples:
        rec = asdict(s)
        lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_manifest(path) -> DatasetManifest:
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest not found: {path}")
    raw = path.read_text(encoding="utf-8").splitlines()
    if not raw:
        raise ManifestError(f"empty manifest: {path}")
    try:
        header = json.loads(raw[0])
        samples = []
        for line in raw[1:]:
            if not line.strip():
                continue
            rec = json.loads(line)
            rec["generator_params"] = GeneratorParams(**rec["generator_params"])
            samples.append(PairedSample(**rec))
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise ManifestError(f"{path}: malformed manifest ({exc})") from exc
    return DatasetManifest(
        samples=samples,
        created_seed=int(header.get("created_seed", 0)),
        schema_version=int(header.get("schema_version", SCHEMA_VERSION)),
        root=path.parent,
    )


def verify_manifest(manifest: DatasetManifest) -> None:
    """Check that every sample's two images decode and have equal dimensions."""
    for s in manifest.samples:
        src = load_image(manifest.resolve_source(s))
        tgt = load_image(manifest.resolve_target(s))
        if src.shape != tgt.shape:
            raise ManifestError(
                f"sample {s.id}: source {tuple(src.shape)} != target {tuple(tgt.shape)}"
            )
