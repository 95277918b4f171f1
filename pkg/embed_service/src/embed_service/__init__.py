"""HTTP sidecar serving fixed-dimension sentence embeddings."""

from .app import MAX_TEXT_CHARS, create_app
from .encoders import DEFAULT_MODEL, HashingEncoder, SentenceTransformerEncoder, load_encoder

__all__ = [
    "MAX_TEXT_CHARS",
    "DEFAULT_MODEL",
    "HashingEncoder",
    "SentenceTransformerEncoder",
    "create_app",
    "load_encoder",
]
