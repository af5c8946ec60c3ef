"""Per-image attribute records and distribution statistics.

Real face-attribute models stay out of scope; the bundled classifier reads
ground-truth labels from a sidecar file keyed by sample id, which keeps the
statistics layer testable without any perception model.
"""

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..core.images import load_image
from ..errors import CategoryMismatchError, EmptyInputError, ToolkitError


class Gender(str, Enum):
    M = "M"
    F = "F"


class AgeBucket(str, Enum):
    YOUNG = "18-30"
    MIDDLE = "31-50"
    SENIOR = "50+"


class Ethnicity(str, Enum):
    ASIAN = "Asian"
    BLACK = "Black"
    INDIAN = "Indian"
    LATINO = "Latino"
    MIDDLE_EASTERN = "MiddleEastern"
    WHITE = "White"


@dataclass(frozen=True)
class AttributeRecord:
    perceived_gender: Gender
    age_bucket: AgeBucket
    ethnicity: Ethnicity

    def __post_init__(self):
        object.__setattr__(self, "perceived_gender", Gender(self.perceived_gender))
        object.__setattr__(self, "age_bucket", AgeBucket(self.age_bucket))
        object.__setattr__(self, "ethnicity", Ethnicity(self.ethnicity))


@dataclass
class AttributeDistribution:
    gender: dict
    age: dict
    ethnicity: dict

    def __post_init__(self):
        for attr_name in ("gender", "age", "ethnicity"):
            table = getattr(self, attr_name)
            total = sum(table.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"{attr_name} proportions sum to {total!r}")
            if any(v < 0 for v in table.values()):
                raise ValueError(f"{attr_name} has negative proportions")

    def tables(self) -> dict:
        return {"gender": self.gender, "age": self.age, "ethnicity": self.ethnicity}


def summarize_distribution(records) -> AttributeDistribution:
    records = list(records)
    if not records:
        raise EmptyInputError("no attribute records")
    n = len(records)
    gender = {g: 0 for g in Gender}
    age = {a: 0 for a in AgeBucket}
    eth = {e: 0 for e in Ethnicity}
    for r in records:
        gender[r.perceived_gender] += 1
        age[r.age_bucket] += 1
        eth[r.ethnicity] += 1
    return AttributeDistribution(
        gender={k: v / n for k, v in gender.items()},
        age={k: v / n for k, v in age.items()},
        ethnicity={k: v / n for k, v in eth.items()},
    )


def compare_distributions(a: AttributeDistribution, b: AttributeDistribution) -> dict:
    """Per-attribute total-variation distance, 0.5 * sum |a_i - b_i|."""
    out = {}
    for name in ("gender", "age", "ethnicity"):
        ta, tb = a.tables()[name], b.tables()[name]
        if set(ta) != set(tb):
            raise CategoryMismatchError(f"{name}: {sorted(ta)} vs {sorted(tb)}")
        out[name] = 0.5 * sum(abs(ta[k] - tb[k]) for k in ta)
    return out


class MetadataAttributeClassifier:
    """Deterministic stub: looks attributes up by sample id."""

    def __init__(self, table: dict):
        self.table = dict(table)
        self.descriptor = f"metadata({len(self.table)} entries)"

    @classmethod
    def from_sidecar(cls, path) -> "MetadataAttributeClassifier":
        return cls(read_attribute_sidecar(path))

    def classify(self, image, sample=None) -> AttributeRecord:
        if sample is None or sample.id not in self.table:
            missing = None if sample is None else sample.id
            raise ToolkitError(f"no attribute metadata for sample {missing!r}")
        return self.table[sample.id]


def classify_corpus(manifest, classifier, domain: str = "A"):
    """One AttributeRecord per manifest sample, order-aligned."""
    if domain not in ("A", "B"):
        raise ValueError(f"domain must be 'A' or 'B', got {domain!r}")
    records = []
    for sample in manifest:
        path = manifest.resolve_source(sample) if domain == "A" else manifest.resolve_target(sample)
        try:
            img = load_image(path)
            records.append(classifier.classify(img, sample=sample))
        except ToolkitError as exc:
            raise ToolkitError(f"sample {sample.id}: {exc}") from exc
    return records


def read_attribute_sidecar(path) -> dict:
    table = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        table[rec["id"]] = AttributeRecord(
            perceived_gender=rec["perceived_gender"],
            age_bucket=rec["age_bucket"],
            ethnicity=rec["ethnicity"],
        )
    return table


def write_attribute_sidecar(table: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for sample_id in sorted(table):
        r = table[sample_id]
        lines.append(json.dumps({
            "id": sample_id,
            "perceived_gender": r.perceived_gender.value,
            "age_bucket": r.age_bucket.value,
            "ethnicity": r.ethnicity.value,
        }, sort_keys=True))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_diversity_report(distributions: dict, path, tv: dict | None = None) -> Path:
    """CSV rows (set, attribute, category, proportion) plus a TV block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["set,attribute,category,proportion"]
    for set_name, dist in distributions.items():
        for attr_name, table in dist.tables().items():
            for cat, prop in table.items():
                lines.append(f"{set_name},{attr_name},{cat.value},{prop:.6g}")
    if tv:
        lines.append("")
        lines.append("attribute,tv_distance")
        for attr_name, value in tv.items():
            lines.append(f"{attr_name},{value:.6g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
