"""Console reporting and file formats."""

from .reporting import StudyLogger

__all__ = ["StudyLogger"]
