"""High-precision verification of integral identities for zeta(4).

Subpackages:

* ``numctx``      precision contexts, Bernoulli numbers, rational helpers
* ``quadrature``  double-exponential integration engines
* ``special``     zeta, eta and polylogarithm evaluation
* ``identities``  catalog of integral identities and their verification
* ``discovery``   moment-integral coefficients and closed-form fitting
* ``cli``         command-line front end
"""

__version__ = "0.1.0"

from .numctx import PrecisionContext, make_context  # noqa: E402
from .quadrature import QuadConfig, QuadResult  # noqa: E402

__all__ = ["PrecisionContext", "QuadConfig", "QuadResult", "make_context", "__version__"]
