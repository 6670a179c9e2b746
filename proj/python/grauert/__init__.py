"""Matrix-symbol calculus on compact groups and their Grauert tubes."""

import os
import sys

_core_dir = os.environ.get("GRAUERT_CORE_DIR")
if _core_dir and _core_dir not in sys.path:
    sys.path.insert(0, _core_dir)

try:
    from _core import *  # noqa: F401,F403  (build-tree layout)
    from _core import __doc__ as _core_doc
except ImportError:
    from ._core import *  # noqa: F401,F403  (installed wheel layout)
    from ._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
