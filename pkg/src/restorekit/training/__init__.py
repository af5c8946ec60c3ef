from .common import RunRecord, EarlyStopper
from .checkpoint import save_tensors, load_tensors, save_checkpoint, load_checkpoint
from .pairwise import train_pairwise, pairwise_defaults
from .cyclegan import train_cyclegan, cyclegan_defaults
from .grid import GridSpec, grid_search, rank_records, write_grid_summary

__all__ = [
    "RunRecord",
    "EarlyStopper",
    "save_tensors",
    "load_tensors",
    "save_checkpoint",
    "load_checkpoint",
    "train_pairwise",
    "pairwise_defaults",
    "train_cyclegan",
    "cyclegan_defaults",
    "GridSpec",
    "grid_search",
    "rank_records",
    "write_grid_summary",
]
