"""Backend selection for the fixpoint kernels.

The compiled extension is used when it imports; otherwise (or when
FOID_PURE_PYTHON=1 is set) the pure-Python module takes over. Both expose
eval_bodies, lfp, stable_search, oscillation and wf_bounds.
"""
from __future__ import annotations

import os

if os.environ.get("FOID_PURE_PYTHON") == "1":
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = "compiled" if _impl.__name__.endswith("._core") else "python"

eval_bodies = _impl.eval_bodies
lfp = _impl.lfp
stable_search = _impl.stable_search
oscillation = _impl.oscillation
wf_bounds = _impl.wf_bounds
