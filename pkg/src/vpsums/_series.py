"""Backend selection for the series-evaluation core.

Prefers the compiled extension; falls back to the numpy implementation when
the extension is missing or when VPSUMS_BACKEND=numpy is set.  Evaluation
results of the two backends agree to rounding (both sum libm cosines per
term), so everything downstream is backend-independent.
"""
import os

_requested = os.environ.get("VPSUMS_BACKEND", "auto").lower()

if _requested in ("auto", "cython", "fast"):
    try:
        from vpsums import _series_fast as _impl
        BACKEND = "cython"
    except ImportError:
        if _requested in ("cython", "fast"):
            raise
        from vpsums import _series_numpy as _impl
        BACKEND = "numpy"
elif _requested in ("numpy", "py", "pure"):
    from vpsums import _series_numpy as _impl
    BACKEND = "numpy"
else:
    raise ValueError(f"unknown VPSUMS_BACKEND={_requested!r}")

cosine_series = _impl.cosine_series
trig_poly_values = _impl.trig_poly_values
