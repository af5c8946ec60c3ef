from .prompts import PLACEHOLDER, DEFAULT_TEMPLATE, NamePool, enrich_prompt, load_name_pool, builtin_name_pool
from .backends import BackendCapabilities, GeneratorBackend
from .oracle import procedural_oracle_pair, OracleBackend, oracle_backends
from .builder import build_paired_dataset

__all__ = [
    "PLACEHOLDER",
    "DEFAULT_TEMPLATE",
    "NamePool",
    "enrich_prompt",
    "load_name_pool",
    "builtin_name_pool",
    "BackendCapabilities",
    "GeneratorBackend",
    "procedural_oracle_pair",
    "OracleBackend",
    "oracle_backends",
    "build_paired_dataset",
]
