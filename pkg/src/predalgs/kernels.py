"""Selects between the compiled sampling kernels and the pure reference.

The compiled extension is optional: builds without a C toolchain simply
skip it, and everything still runs on the pure-Python twins at reduced
speed.  The two implementations agree bit for bit, so which one is
active never changes a result, only the wall clock.  Set PREDALGS_PURE=1
to force the pure implementation (the cross-check tests and the
benchmark do this to get both sides in one process tree).
"""

from __future__ import annotations

import os

from . import _kernels_pure

if os.environ.get("PREDALGS_PURE", "") not in ("", "0"):
    _impl = _kernels_pure
    IMPLEMENTATION = "pure"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = _kernels_pure
        IMPLEMENTATION = "pure"

ls_mc_cell = _impl.ls_mc_cell
ls_oracle_scan = _impl.ls_oracle_scan
om_gu_cell = _impl.om_gu_cell
om_fig3_cell = _impl.om_fig3_cell
ski_fig5_cell = _impl.ski_fig5_cell
ski_fig6_cell = _impl.ski_fig6_cell
ski_thm3_scan = _impl.ski_thm3_scan

__all__ = [
    "IMPLEMENTATION",
    "ls_mc_cell",
    "ls_oracle_scan",
    "om_gu_cell",
    "om_fig3_cell",
    "ski_fig5_cell",
    "ski_fig6_cell",
    "ski_thm3_scan",
]
