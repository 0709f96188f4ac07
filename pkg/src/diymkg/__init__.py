"""Multilingual vocabulary knowledge graph with LLM-assisted expansion and quizzes."""

__version__ = "0.1.0"
