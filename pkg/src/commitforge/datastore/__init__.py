"""Dataset rows, JSONL persistence, statistics and evaluation subsets."""
from __future__ import annotations

from .jsonl import SCHEMA_VERSION, DatasetError, DuplicateKey, SchemaMismatch, iter_dataset, read_dataset, write_dataset
from .records import TIERS, AnnotatedCommit, project_type_description
from .stats import dataset_stats, svg_bar_chart, write_stats_svgs
from .subsets import (
    DEFAULT_CMG_QUOTAS,
    DEFAULT_PER_CLASS,
    DEFAULT_SIZES,
    PARENT,
    SUBSET_IDS,
    DatasetSubset,
    InsufficientPopulation,
    NestingViolation,
    check_nesting,
    full_subset,
    read_subset,
    sample_cmg_eval,
    sample_from,
    sample_ten_eval,
    write_subset,
)

__all__ = [
    "AnnotatedCommit",
    "DEFAULT_CMG_QUOTAS",
    "DEFAULT_PER_CLASS",
    "DEFAULT_SIZES",
    "DatasetError",
    "DatasetSubset",
    "DuplicateKey",
    "InsufficientPopulation",
    "NestingViolation",
    "PARENT",
    "SCHEMA_VERSION",
    "SUBSET_IDS",
    "SchemaMismatch",
    "TIERS",
    "check_nesting",
    "dataset_stats",
    "full_subset",
    "iter_dataset",
    "project_type_description",
    "read_dataset",
    "read_subset",
    "sample_cmg_eval",
    "sample_from",
    "sample_ten_eval",
    "svg_bar_chart",
    "write_dataset",
    "write_stats_svgs",
    "write_subset",
]
