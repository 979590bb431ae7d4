"""Pick the simplex kernel at import time.

The compiled ``_simplex_ext`` is used when importable; setting
``TOMOFIT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _simplex

pure_nelder_mead = _simplex.builtin_nelder_mead

if os.environ.get("TOMOFIT_PURE_PYTHON", "").strip() not in ("", "0"):
    compiled_nelder_mead = None
else:
    try:
        from ._simplex_ext import builtin_nelder_mead as compiled_nelder_mead
    except ImportError:
        compiled_nelder_mead = None

COMPILED = compiled_nelder_mead is not None
BACKEND = "compiled" if COMPILED else "python"
builtin_nelder_mead = compiled_nelder_mead if COMPILED else pure_nelder_mead
