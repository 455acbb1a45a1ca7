"""Process-pool fan-out for sweep cells.

Cells are independent scalar tuples and workers are module-level
functions, so everything pickles cheaply.  Results come back in
submission order no matter how the pool schedules them, which keeps
sweep output identical between serial and parallel runs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

_Cell = TypeVar("_Cell")
_Out = TypeVar("_Out")


def map_cells(
    fn: Callable[[_Cell], _Out], cells: Sequence[_Cell], jobs: int
) -> list[_Out]:
    """Apply fn to every cell in order; jobs <= 1 stays in-process."""
    if jobs <= 1 or len(cells) <= 1:
        return [fn(cell) for cell in cells]
    chunk = max(1, len(cells) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, cells, chunksize=chunk))
