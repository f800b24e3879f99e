"""Table normalization and text rendering."""

from collections.abc import Sequence

CELL_SEPARATOR = " | "
ROW_SEPARATOR = "\n"


def normalize_table(table: Sequence[Sequence[object]]) -> tuple[tuple[str, ...], ...]:
    """Pad ragged rows with empty cells so every row has the same width.

    Args:
        table: Rows of cells, any cell type

    Returns:
        Rectangular table of stripped cell strings
    """
    rows = [tuple("" if cell is None else str(cell).strip() for cell in row) for row in table]
    width = max((len(row) for row in rows), default=0)
    return tuple(row + ("",) * (width - len(row)) for row in rows)


def linearize_table(table: Sequence[Sequence[object]]) -> str:
    """Render a table as text, one line per row with " | " between cells."""
    return ROW_SEPARATOR.join(CELL_SEPARATOR.join(row) for row in normalize_table(table))
