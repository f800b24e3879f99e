"""Train/dev/test construction and seeded subsets."""

import logging
import random
from collections.abc import Sequence
from dataclasses import replace
from typing import NamedTuple, TypeVar

from .errors import SamplingError, SplitConfigError
from .types import QARecord, SplitName, SplitPlan

logger = logging.getLogger(__name__)

T = TypeVar("T")

# ConvFinQA and TAT-QA public test files carry no answers, so their dev files
# serve as test and dev is carved out of train.
DEFAULT_SPLIT_PLANS: dict[str, SplitPlan] = {
    "finqa": SplitPlan(dev_count=0, seed=0, uses_predefined_test=True),
    "convfinqa": SplitPlan(dev_count=300, seed=0, uses_predefined_test=False),
    "tatqa": SplitPlan(dev_count=550, seed=0, uses_predefined_test=False),
}


class Splits(NamedTuple):
    """Train, dev and test record lists."""

    train: list[QARecord]
    dev: list[QARecord]
    test: list[QARecord]


def _retag(records: list[QARecord], split: SplitName) -> list[QARecord]:
    return [r if r.split == split else replace(r, split=split) for r in records]


def make_splits(records: Sequence[QARecord], plan: SplitPlan) -> Splits:
    """Carve train/dev/test out of records tagged with their predefined split.

    Dev is a seeded uniform sample of ``plan.dev_count`` predefined-train
    records; train is the rest. Record order within each split follows the
    input order.

    Args:
        records: Records tagged train, dev or test at ingestion
        plan: Split plan

    Returns:
        Splits with records retagged to their final split

    Raises:
        SplitConfigError: If dev_count exceeds the predefined train size or a
            record has no split tag
    """
    by_split: dict[str, list[QARecord]] = {"train": [], "dev": [], "test": []}
    for record in records:
        if record.split not in by_split:
            raise SplitConfigError(f"record {record.id!r} has no predefined split tag")
        by_split[record.split].append(record)

    pool = by_split["train"]
    if plan.dev_count > len(pool):
        raise SplitConfigError(
            f"dev_count {plan.dev_count} exceeds predefined train size {len(pool)}"
        )

    chosen = set(random.Random(plan.seed).sample(range(len(pool)), plan.dev_count))
    sampled_dev = [r for i, r in enumerate(pool) if i in chosen]
    train = [r for i, r in enumerate(pool) if i not in chosen]

    if plan.uses_predefined_test:
        dev = by_split["dev"] + sampled_dev
        test = by_split["test"]
    else:
        if by_split["test"]:
            logger.warning(
                "Ignoring %d predefined test records; the dev file is the test split",
                len(by_split["test"]),
            )
        dev = sampled_dev
        test = by_split["dev"]

    splits = Splits(_retag(train, "train"), _retag(dev, "dev"), _retag(test, "test"))
    logger.info(
        "Splits: %d train / %d dev / %d test (seed %d)",
        len(splits.train),
        len(splits.dev),
        len(splits.test),
        plan.seed,
    )
    return splits


def sample_subset(items: Sequence[T], n: int, seed: int) -> list[T]:
    """Draw a seeded sample of ``n`` distinct items, keeping input order.

    Raises:
        SamplingError: If n is negative or larger than the population
    """
    if n < 0 or n > len(items):
        raise SamplingError(f"cannot sample {n} items from {len(items)}")
    indices = sorted(random.Random(seed).sample(range(len(items)), n))
    return [items[i] for i in indices]


def truncate_splits(splits: Splits, limit: int | None) -> Splits:
    """Keep only the first ``limit`` records of each split."""
    if limit is None:
        return splits
    if limit < 0:
        raise SplitConfigError(f"limit must be nonnegative, got {limit}")
    return Splits(splits.train[:limit], splits.dev[:limit], splits.test[:limit])
