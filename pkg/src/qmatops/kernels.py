"""Backend selection for the amplitude-array kernels.

The compiled Cython module is used when it was built; otherwise the NumPy
fallback is loaded. Set ``QMATOPS_BACKEND=python`` to force the fallback.
"""

import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels_cy
except ImportError:  # extension not built
    _kernels_cy = None
else:
    BACKENDS["cython"] = _kernels_cy

_requested = os.environ.get("QMATOPS_BACKEND", "").strip().lower()
if _requested and _requested not in BACKENDS:
    raise ImportError(
        f"QMATOPS_BACKEND={_requested!r} is not available; built backends: {sorted(BACKENDS)}"
    )
BACKEND = _requested or ("cython" if "cython" in BACKENDS else "python")

_impl = BACKENDS[BACKEND]


def use_backend(name):
    """Switch the active kernel backend; returns the previous name."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"unknown or unbuilt backend {name!r}; have {sorted(BACKENDS)}")
    previous, BACKEND, _impl = BACKEND, name, BACKENDS[name]
    return previous


def controlled_x(amp, tbit, cmask=0, cval=0):
    _impl.controlled_x(amp, tbit, cmask, cval)


def controlled_swap(amp, abit, bbit, cmask=0, cval=0):
    _impl.controlled_swap(amp, abit, bbit, cmask, cval)


def hadamard(amp, tbit):
    _impl.hadamard(amp, tbit)


def masked_norm2(amp, mask=0, val=0):
    return float(_impl.masked_norm2(amp, mask, val))
