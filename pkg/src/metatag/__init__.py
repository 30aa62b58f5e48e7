"""metatag: run, score, and iteratively improve LLM metaphor annotation."""

__version__ = "0.1.0"
