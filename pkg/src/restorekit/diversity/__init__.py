from .attributes import (
    Gender,
    AgeBucket,
    Ethnicity,
    AttributeRecord,
    AttributeDistribution,
    summarize_distribution,
    compare_distributions,
    classify_corpus,
    MetadataAttributeClassifier,
    read_attribute_sidecar,
    write_attribute_sidecar,
    write_diversity_report,
)
from .tsne import project_embeddings

__all__ = [
    "Gender",
    "AgeBucket",
    "Ethnicity",
    "AttributeRecord",
    "AttributeDistribution",
    "summarize_distribution",
    "compare_distributions",
    "classify_corpus",
    "MetadataAttributeClassifier",
    "read_attribute_sidecar",
    "write_attribute_sidecar",
    "write_diversity_report",
    "project_embeddings",
]
