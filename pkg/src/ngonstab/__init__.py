"""Linear stability of the regular n-gon relative equilibrium on elliptic
Kepler orbits.

Layers, bottom to top:

* ``configuration`` - the ring central configuration and the Newtonian
  potential with its first two derivatives;
* ``reduction`` - the symmetry-adapted basis that block-diagonalizes the
  normalized Hessian, with closed forms for every mode block;
* ``linsys`` / ``kernel`` - the periodic linear Hamiltonian systems and
  their fundamental solutions (compiled kernel with a pure NumPy fallback);
* ``spectrum`` - symplectic eigenvalues and stability classification;
* ``beta_certifier`` - the two-parameter comparison system, checkpoint
  verification, and the closed-form hyperbolic-region arithmetic;
* ``operator_positivity`` - Fourier-Galerkin positivity scans of the
  twisted Sturm-Liouville operators;
* ``cli`` - the ``ngonstab`` command.
"""

from .configuration import NGonConfiguration, build_ngon, central_config_residual
from .kernel import backend
from .reduction import block_parameters, build_basis, reduce_hessian
from .spectrum import classify, classify_ngon

__all__ = [
    "NGonConfiguration",
    "backend",
    "block_parameters",
    "build_basis",
    "build_ngon",
    "central_config_residual",
    "classify",
    "classify_ngon",
    "reduce_hessian",
]
