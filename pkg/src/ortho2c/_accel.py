"""Pick the compiled kernels when available, the numpy ones otherwise.

Set ``ORTHO2C_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("ORTHO2C_PURE_PYTHON") != "1":
    try:
        from ._core import eval_terms, monomial_table  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._core_py import eval_terms, monomial_table  # noqa: F401

__all__ = ["BACKEND", "eval_terms", "monomial_table"]
