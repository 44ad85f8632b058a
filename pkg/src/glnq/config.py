"""Runtime limits and cache location."""

import os
from pathlib import Path

# Enumeration budget: maximum number of items any single stream or tally may
# touch before BudgetExceeded is raised.
DEFAULT_BUDGET = int(os.environ.get("GLNQ_BUDGET", 2_000_000))
# Character tables enumerate class elements in vectorized batches, so they get
# a larger default; an explicit budget still overrides it.
TABLE_BUDGET = int(os.environ.get("GLNQ_TABLE_BUDGET", 20_000_000))

MAX_Q = 16
MAX_N = 8

CACHE_ENV = "GLNQ_CACHE"
DEFAULT_CACHE_DIR = "./.glnq-cache"


def cache_dir(override=None) -> Path:
    if override is not None:
        return Path(override)
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR))


def check_budget(count, budget=None, what="items"):
    from .errors import BudgetExceeded

    limit = DEFAULT_BUDGET if budget is None else budget
    if count > limit:
        raise BudgetExceeded(f"{what}: {count} exceeds budget {limit}")
