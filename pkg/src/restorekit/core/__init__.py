from .images import ImageTensor, load_image, save_image, validate_image, as_image
from .manifest import (
    GeneratorParams,
    PairedSample,
    DatasetManifest,
    read_manifest,
    write_manifest,
    verify_manifest,
)
from .splits import split_dataset
from .config import RunConfig

__all__ = [
    "ImageTensor",
    "load_image",
    "save_image",
    "validate_image",
    "as_image",
    "GeneratorParams",
    "PairedSample",
    "DatasetManifest",
    "read_manifest",
    "write_manifest",
    "verify_manifest",
    "split_dataset",
    "RunConfig",
]
