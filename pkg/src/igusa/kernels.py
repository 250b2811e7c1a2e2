"""Backend selection for the residue-tree counting kernel.

The compiled extension is preferred; the pure-Python implementation is used
when the extension is missing, when ``IGUSA_PURE_PYTHON=1`` is set, or when
the modulus is too large for 64-bit residue products.
"""

import os

from igusa import _count_py

try:
    from igusa import _count as _compiled
except ImportError:  # extension not built
    _compiled = None

if os.environ.get("IGUSA_PURE_PYTHON") == "1":
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def count_tree(coefs, exps, nvars, p, m, budget, backend=None):
    """Dispatch to the selected kernel; ``backend`` forces "compiled" or "python"."""
    use = backend or BACKEND
    if use == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled counting kernel is not available")
        if p ** m < _compiled.MAX_MODULUS:
            return _compiled.count_tree(coefs, exps, nvars, p, m, budget)
    return _count_py.count_tree(coefs, exps, nvars, p, m, budget)


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]
