"""The 26 static hand-alphabet letter classes.

The Swedish alphabet minus its three dynamic letters (A-ring, A-umlaut,
O-umlaut) leaves exactly the 26 ASCII letters A-Z, alphabetically ordered
for stable class indexing.
"""

from __future__ import annotations

LETTERS: tuple[str, ...] = tuple("ABCDEFGHIJKLMNOPQRSTUVWXYZ")

N_CLASSES = len(LETTERS)

_INDEX = {letter: i for i, letter in enumerate(LETTERS)}


def letter_index(symbol: str) -> int:
    """Class index of a letter symbol; raises ValueError for unknown symbols."""
    try:
        return _INDEX[symbol]
    except KeyError:
        raise ValueError(f"unknown letter class: {symbol!r}") from None


def is_letter(symbol: str) -> bool:
    return symbol in _INDEX
