"""Exact cellular algebras, cell modules and procellular completions."""


class ProcellError(Exception):
    """Base class for every error raised by the library."""
