"""Dataset ingestion, table rendering and split construction."""

from .adapters import (
    ADAPTERS,
    ConvFinQAAdapter,
    DatasetAdapter,
    FinQAAdapter,
    TatQAAdapter,
    get_adapter,
    load_dataset,
)
from .errors import CorpusError, IngestError, SamplingError, SchemaError, SplitConfigError
from .io import read_records, write_records, write_split_manifest
from .splits import DEFAULT_SPLIT_PLANS, Splits, make_splits, sample_subset, truncate_splits
from .table import linearize_table, normalize_table
from .types import DATASET_KINDS, DatasetKind, IngestStats, QARecord, SplitName, SplitPlan

__all__ = [
    "ADAPTERS",
    "DATASET_KINDS",
    "DEFAULT_SPLIT_PLANS",
    "ConvFinQAAdapter",
    "CorpusError",
    "DatasetAdapter",
    "DatasetKind",
    "FinQAAdapter",
    "IngestError",
    "IngestStats",
    "QARecord",
    "SamplingError",
    "SchemaError",
    "SplitConfigError",
    "SplitName",
    "SplitPlan",
    "Splits",
    "TatQAAdapter",
    "get_adapter",
    "linearize_table",
    "load_dataset",
    "make_splits",
    "normalize_table",
    "read_records",
    "sample_subset",
    "truncate_splits",
    "write_records",
    "write_split_manifest",
]
