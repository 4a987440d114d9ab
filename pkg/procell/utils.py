import random
import sys
from typing import Any, Hashable

from config.settings import settings


def trace(tag: str, message: str) -> None:
    """
    Diagnostic line in the form "[Tag] message", sent to stderr.
    Silent unless PROCELL_VERBOSE is set.
    """
    if settings.PROCELL_VERBOSE:
        print(f"[{tag}] {message}", file=sys.stderr, flush=True)


def label_text(label: Hashable) -> str:
    """
    Text form of a poset/tableau label, used in reports and JSON.
    Tuples render as "(2,1)", nested tuples (tableaux) as "[[1,1],[2]]".
    """
    if isinstance(label, tuple):
        if label and all(isinstance(x, tuple) for x in label):
            return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in label) + "]"
        return "(" + ",".join(str(x) for x in label) + ")"
    return str(label)


def parse_label(text: str) -> Hashable:
    """Inverse of label_text for ints, flat tuples and row lists; anything else stays a string."""
    s = text.strip()
    if s.startswith("[[") and s.endswith("]]"):
        rows = s[2:-2].split("],[")
        return tuple(tuple(int(x) for x in row.split(",") if x.strip()) for row in rows)
    if s.startswith("(") and s.endswith(")"):
        inner = s[1:-1].strip()
        if not inner:
            return ()
        return tuple(int(x) for x in inner.split(","))
    try:
        return int(s)
    except ValueError:
        return s


def sort_key(label: Any) -> tuple:
    # ints before tuples before strings, then natural order inside each kind
    if isinstance(label, bool):
        return (3, str(label))
    if isinstance(label, int):
        return (0, label)
    if isinstance(label, tuple):
        return (1, label)
    return (2, str(label))


def seeded_rng(seed: int | None = None) -> random.Random:
    return random.Random(settings.DEFAULT_SEED if seed is None else seed)
