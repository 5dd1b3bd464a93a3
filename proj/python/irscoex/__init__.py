"""Multi-operator reflector coexistence: rates, phase optimization, simulator."""

import os
import sys


def _load_in_tree():
    """Load the extension from a build tree when the wheel is not installed."""
    ext_dir = os.environ.get("IRSCOEX_EXT_DIR")
    if not ext_dir:
        return False
    import importlib.util

    for fname in sorted(os.listdir(ext_dir)):
        if fname.startswith("_core") and fname.endswith((".so", ".pyd", ".dylib")):
            spec = importlib.util.spec_from_file_location(
                __name__ + "._core", os.path.join(ext_dir, fname)
            )
            module = importlib.util.module_from_spec(spec)
            sys.modules[spec.name] = module
            spec.loader.exec_module(module)
            return True
    return False


try:
    from . import _core  # noqa: F401
except ImportError:
    if not _load_in_tree():
        raise

from ._core import *  # noqa: F401,F403
