"""Numerical toolkit for twisted sums, type/cotype constants and the linear
stability of almost-symmetries on finite dimensional Banach spaces.

The heavy lifting lives in the compiled extension ``banachlab._core``; this
package re-exports its public surface.
"""

import os
import sys

try:
    from banachlab._core import *  # noqa: F401,F403
    from banachlab import _core as core  # noqa: F401
except ImportError:  # pragma: no cover - source-tree test runs
    # In-tree test setup: BANACHLAB_MODULE_DIR points at the CMake build
    # directory that holds the extension.
    _module_dir = os.environ.get("BANACHLAB_MODULE_DIR")
    if not _module_dir:
        raise
    sys.path.insert(0, _module_dir)
    from _core import *  # noqa: F401,F403
    import _core as core  # noqa: F401

__all__ = [name for name in dir(core) if not name.startswith("_")]
