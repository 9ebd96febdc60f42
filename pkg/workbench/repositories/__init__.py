"""
Repository package
Exports all repository classes for easy importing
"""
from workbench.repositories.corpus_repository import CorpusRepository

__all__ = [
    'CorpusRepository',
]
