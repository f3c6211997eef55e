"""Kernel backend selection: compiled extension when available, pure fallback otherwise.

Set GAPDECAY_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging); both backends implement identical algorithms. The Volterra
lag recursions always use the numpy implementation: their inner dot products
are BLAS-dominated and beat the scalar compiled loops at every relevant size
(see benchmarks/bench_kernels.py).
"""
import os

from . import _pure

if os.environ.get("GAPDECAY_PURE_PYTHON"):
    impl = _pure
    USING_COMPILED_KERNELS = False
else:
    try:
        from .. import _fast as impl  # type: ignore[attr-defined]

        USING_COMPILED_KERNELS = True
    except ImportError:
        impl = _pure
        USING_COMPILED_KERNELS = False

wright_sum = impl.wright_sum
scaled_gamma_half = impl.scaled_gamma_half
scaled_gamma_half_many = impl.scaled_gamma_half_many
series_terms = impl.series_terms
volterra_recurse = _pure.volterra_recurse
volterra_recurse_rect = _pure.volterra_recurse_rect
