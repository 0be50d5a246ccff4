"""Backend loading for the engine core.

The core lives in a single source file, ``_kernel.py``, written so it can be
compiled to a C extension or executed as plain Python.  When the package was
built with a compiler the import system resolves ``_kernel`` to the extension
module; otherwise the same file runs interpreted.  Both expose an identical
API and produce bit-identical search results, so everything above this layer
is backend-agnostic.

Set ``EVOCHESS_BACKEND=pure`` or ``EVOCHESS_BACKEND=compiled`` to force a
backend; the default prefers the compiled one when present.  Any other
value raises ImportError rather than guessing.
"""

import importlib.util
import os

_PURE_CACHE = None


def _publish_exports(mod):
    # compiled typed globals are C variables, not module attributes; lift
    # the EXPORTS dict onto the module so both backends look alike
    for name, value in mod.EXPORTS.items():
        if not hasattr(mod, name):
            setattr(mod, name, value)
    return mod


def load_pure():
    """Load the interpreted kernel from source, bypassing any extension."""
    global _PURE_CACHE
    if _PURE_CACHE is None:
        path = os.path.join(os.path.dirname(__file__), "_kernel.py")
        spec = importlib.util.spec_from_file_location("evochess.kernel._kernel_pure", path)
        mod = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(mod)
        _PURE_CACHE = _publish_exports(mod)
    return _PURE_CACHE


def _select():
    forced = os.environ.get("EVOCHESS_BACKEND", "").strip().lower()
    if forced in ("pure", "python"):
        return load_pure()
    if forced not in ("", "compiled", "native"):
        # fail loud: a typo here would silently benchmark the wrong kernel
        raise ImportError(
            f"unknown EVOCHESS_BACKEND value {forced!r}; "
            "use 'pure' or 'compiled'"
        )
    from . import _kernel
    if forced in ("compiled", "native") and not _kernel.IS_COMPILED:
        raise ImportError(
            "EVOCHESS_BACKEND=compiled but the extension is not built; "
            "reinstall the package with a C compiler available"
        )
    return _publish_exports(_kernel)


core = _select()
BACKEND = "compiled" if core.IS_COMPILED else "pure"


def load_compiled():
    """The compiled kernel module; raises ImportError when not built."""
    from . import _kernel
    if not _kernel.IS_COMPILED:
        raise ImportError("the compiled kernel extension is not built")
    return _publish_exports(_kernel)
