"""
FastAPI routes over the experiment runners.
"""

import logging
from typing import Any

from fastapi import APIRouter, Body, HTTPException

from hybridmc import __version__
from hybridmc.adaptive.controller import EstimateReport
from hybridmc.database import get_store
from hybridmc.errors import ConfigError, HybridMCError
from hybridmc.experiments.builders import build_model
from hybridmc.experiments.runner import estimate
from hybridmc.experiments.schema import ESTIMATE_MODES, ModelSpec, parse_config
from hybridmc.models.shs import validate_model

logger = logging.getLogger(__name__)

router = APIRouter()


@router.get("/")
async def root():
    """Service banner."""
    return {
        "status": "healthy",
        "service": "HybridMC estimation service",
        "version": __version__,
    }


@router.get("/health")
async def health_check():
    """Detailed health check."""
    get_store()
    return {
        "status": "healthy",
        "database": "connected",
        "estimator": "ready",
    }


@router.post("/validate")
def validate(spec: ModelSpec):
    """Build a model from its spec and list the violations found."""
    try:
        model = build_model(spec)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=e.diagnostics or [str(e)])
    result = validate_model(model)
    return {"model": model.name, "ok": result.ok, "violations": list(result.violations)}


@router.post("/estimate", response_model=EstimateReport)
def run_estimate(payload: dict[str, Any] = Body(...)):
    """
    Run one estimate from an experiment config given as JSON.

    The body has the layout of the TOML file (`model`, `functional`, `run`).
    The report is stored in the run ledger.
    """
    try:
        config = parse_config(payload)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=e.diagnostics or [str(e)])
    if config.run.mode not in ESTIMATE_MODES:
        raise HTTPException(status_code=422, detail=[f"run.mode: must be one of {list(ESTIMATE_MODES)}"])

    try:
        report = estimate(config)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=e.diagnostics or [str(e)])
    except HybridMCError as e:
        logger.error(f"Estimation failed: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))

    run_id = get_store().record(report)
    logger.info(f"Stored run {run_id}: mode={report.mode} estimate={report.estimate:.6g}")
    return report


@router.get("/runs")
def list_runs(limit: int = 50):
    """Most recent ledger entries."""
    return [
        {
            "id": r.id,
            "created_at": r.created_at,
            "mode": r.mode,
            "seed": r.seed,
            "epsilon": r.epsilon,
            "estimate": r.estimate,
            "converged": r.converged,
        }
        for r in get_store().list_runs(limit)
    ]
