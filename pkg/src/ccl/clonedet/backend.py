"""Kernel backend selection.

The compiled extension is preferred when importable; ``CCL_KERNELS=py``
forces the pure-Python fallback and ``CCL_KERNELS=c`` makes a missing
extension an import error instead of a silent fallback.
"""

from __future__ import annotations

import os

_forced = os.environ.get("CCL_KERNELS", "").strip().lower()

if _forced in ("py", "python"):
    from . import _kernels as kernels
elif _forced in ("c", "ext", "compiled"):
    from . import _ckernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels as kernels  # type: ignore[no-redef]

suffix_array = kernels.suffix_array
lcp_array = kernels.lcp_array
nonrepeat_count = kernels.nonrepeat_count
BACKEND: str = kernels.BACKEND
