"""
Run ledger.
"""

from .models import RunRecord, RunStore, get_store, init_store

__all__ = ["RunRecord", "RunStore", "get_store", "init_store"]
