"""Multi-view biclustering by restricted non-negative matrix tri-factorisation."""

from ._core import Error, bisilhouette, generate, jsd, run, scores, solve, split_sizes

__all__ = ["Error", "bisilhouette", "generate", "jsd", "run", "scores", "solve", "split_sizes"]
