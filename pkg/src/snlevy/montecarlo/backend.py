"""Kernel backend selection.

The compiled extension is preferred; the pure-Python reference kernel
is the fallback and must stay bit-identical.  Set the environment
variable ``SNLEVY_FORCE_PY=1`` to force the fallback (used by the
parity tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernel_py

# rule codes and state layout are owned by the reference module
RULE_PLAIN = _kernel_py.RULE_PLAIN
RULE_TILDE = _kernel_py.RULE_TILDE
RULE_ONESIDED = _kernel_py.RULE_ONESIDED
STATE_SIZE = _kernel_py.STATE_SIZE
IDX_T = _kernel_py.IDX_T
IDX_X = _kernel_py.IDX_X
IDX_L = _kernel_py.IDX_L
IDX_J = _kernel_py.IDX_J
IDX_PHASE = _kernel_py.IDX_PHASE
IDX_ARMED = _kernel_py.IDX_ARMED
IDX_ARM = _kernel_py.IDX_ARM
IDX_SUP = _kernel_py.IDX_SUP
IDX_STATUS = _kernel_py.IDX_STATUS
IDX_CUR = _kernel_py.IDX_CUR
IDX_BIGZ = _kernel_py.IDX_BIGZ
IDX_AMB = _kernel_py.IDX_AMB
IDX_STEPS = _kernel_py.IDX_STEPS

if os.environ.get("SNLEVY_FORCE_PY"):
    advance = _kernel_py.advance
    COMPILED = False
else:
    try:
        from ._simcore import advance  # type: ignore[no-redef]
        COMPILED = True
    except ImportError:
        advance = _kernel_py.advance
        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "python"
