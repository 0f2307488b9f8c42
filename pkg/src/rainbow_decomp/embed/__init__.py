"""Greedy rainbow rooted embeddings."""

from rainbow_decomp.embed.greedy import (
    EmbeddingPattern,
    EmbeddingResult,
    EmbeddingTask,
    build_task,
    candidate_set,
    embed_with_retries,
    greedy_embed,
)

__all__ = [
    "EmbeddingPattern",
    "EmbeddingResult",
    "EmbeddingTask",
    "build_task",
    "candidate_set",
    "embed_with_retries",
    "greedy_embed",
]
