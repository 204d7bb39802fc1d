"""Service layer: pydantic request/response models, pure handlers, and the
FastAPI app.  The CLI is a thin client over the same handlers."""
