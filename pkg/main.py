# main.py

import logging

import uvicorn

from subspace_lab.config import settings

logger = logging.getLogger(__name__)


def run():
    logger.info("Starting Subspace Lab API server...")
    logger.info("Go to http://127.0.0.1:8000/docs for the interactive API documentation.")

    # "subspace_lab.api" is the module path, "app" the FastAPI instance inside it
    uvicorn.run("subspace_lab.api:app", host="0.0.0.0", port=8000, reload=True, log_level=settings.LOG_LEVEL.lower())


if __name__ == "__main__":
    run()
