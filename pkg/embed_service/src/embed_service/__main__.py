"""Run the service: ``python -m embed_service`` or the ``embed-service`` script.

Configuration comes from the environment: MODEL_NAME (checkpoint or
``hashing://<dim>``), PORT (default 8080), MAX_BATCH (default 64).
"""

import os

import uvicorn

from .app import create_app


def main() -> None:
    port = int(os.environ.get("PORT", "8080"))
    uvicorn.run(create_app(), host="0.0.0.0", port=port, log_level="info")


if __name__ == "__main__":
    main()
