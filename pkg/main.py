"""
HybridMC - Main Application Entry Point

Adaptive multilevel Monte Carlo estimation for stochastic hybrid systems.
Run `python main.py --help` for the command line; `app` is the HTTP service.
"""

import logging
import sys
from contextlib import asynccontextmanager

from fastapi import FastAPI

from hybridmc import __version__
from hybridmc.api import router
from hybridmc.cli import main as cli_main
from hybridmc.config import get_settings
from hybridmc.database import init_store

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Application lifespan manager.
    Opens the run ledger on startup.
    """
    settings = get_settings()
    logger.info("🚀 Starting HybridMC service...")
    logger.info(f"📦 Opening run ledger at {settings.database_path}...")
    init_store(settings.database_path)
    logger.info("✅ HybridMC is ready!")

    yield

    logger.info("👋 Shutting down HybridMC...")


app = FastAPI(
    title="HybridMC",
    description="Adaptive multilevel Monte Carlo estimation for stochastic hybrid systems",
    version=__version__,
    lifespan=lifespan,
)

app.include_router(router)


if __name__ == "__main__":
    sys.exit(cli_main())
