"""Complex special-function kernels used by all analytic solution paths."""
import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.special

from . import _kernels
from .errors import DomainError, NonConvergenceError, PoleError

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class WrightKernelParams:
    """Index pair (n, k) with 0 <= k <= n and the spectral exponent alpha."""

    n: int
    k: int
    alpha: float

    def __post_init__(self):
        if self.n < 0 or self.k < 0 or self.k > self.n:
            raise DomainError(f"need 0 <= k <= n, got n={self.n}, k={self.k}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0,1), got {self.alpha}")


def complex_gamma(z):
    """Gamma function for complex argument (principal branch).

    Raises PoleError at nonpositive integers and OverflowError when the
    result is not representable in double precision.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("gamma argument must be finite")
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleError(f"gamma pole at z={z.real:g}")
    out = complex(scipy.special.gamma(z))
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise OverflowError(f"gamma({z}) exceeds double range")
    return out


def scaled_upper_gamma_half(z):
    """e^z * Gamma(1/2, z) on the principal branch.

    Evaluated without forming either factor, so arguments with huge |Re z|
    never overflow: power series for |z| <= 4, continued fraction away from
    the negative real axis, a Kummer-transformed series in the mid-range left
    half-plane, and the asymptotic series beyond |z| = 35.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("argument must be finite")
    return _kernels.scaled_gamma_half(z)


def scaled_erfc_kernel(w):
    """sqrt(pi) * e^{w^2} * erfc(w), entire in w.

    The branch-resolved form of scaled_upper_gamma_half: for Re w >= 0 it
    equals scaled_upper_gamma_half(w^2); continuation through the cut gives
    the reflected expression on the left half-plane.
    """
    w = complex(w)
    z = w * w
    if w.real > 0.0 or (w.real == 0.0 and w.imag >= 0.0):
        return _kernels.scaled_gamma_half(z)
    if z.real > 700.0:
        raise OverflowError(f"e^(w^2) overflows for w={w}")
    return 2.0 * SQRT_PI * cmath.exp(z) - _kernels.scaled_gamma_half(z)


def wright_kernel(params: WrightKernelParams, z, shifted=False):
    """Residue series sum_m (-1)^m Gamma(1+n+m) z^m / (m! Gamma(1-b+2m)).

    b = alpha*k - 3n, or alpha*k - 3n - 2 when shifted. Entire in z; the sum
    stops once the running term sits below tolerance (abs 1e-14 / rel 1e-12)
    for five consecutive terms.
    """
    b = params.alpha * params.k - 3.0 * params.n - (2.0 if shifted else 0.0)
    if 1.0 - b <= 0.0:
        raise DomainError(f"denominator gamma at nonpositive argument, b={b}")
    value, terms, converged, _ = _kernels.wright_sum(float(params.n), b, complex(z))
    if not converged:
        raise NonConvergenceError(
            f"kernel series not converged after {terms} terms", partial=value, terms=terms
        )
    return value


def wright_kernel_grid(params: WrightKernelParams, zs, shifted=False):
    """wright_kernel over a sequence of arguments."""
    return np.array([wright_kernel(params, z, shifted=shifted) for z in zs])
