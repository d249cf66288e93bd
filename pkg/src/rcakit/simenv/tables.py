"""Typed in-memory tables for the simulated databases."""

from __future__ import annotations

from dataclasses import dataclass

COLUMN_TYPES = ("text", "integer", "real", "boolean")


@dataclass(frozen=True)
class SimColumn:
    name: str
    type: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("column name must be non-empty")
        if self.type not in COLUMN_TYPES:
            raise ValueError(
                f"column {self.name!r} has unknown type {self.type!r}; "
                f"expected one of {', '.join(COLUMN_TYPES)}"
            )


def _conforms(value, column_type: str) -> bool:
    if column_type == "text":
        return isinstance(value, str)
    if column_type == "boolean":
        return isinstance(value, bool)
    if column_type == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, (int, float)) and not isinstance(value, bool)


@dataclass(frozen=True)
class SimTable:
    name: str
    columns: tuple[SimColumn, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"table {self.name!r} has duplicate column names")
        for row_index, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(
                    f"table {self.name!r} row {row_index} has {len(row)} values "
                    f"for {len(self.columns)} columns"
                )
            for column, value in zip(self.columns, row):
                if not _conforms(value, column.type):
                    raise ValueError(
                        f"table {self.name!r} row {row_index} column "
                        f"{column.name!r}: {value!r} is not {column.type}"
                    )

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)
