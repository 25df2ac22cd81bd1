"""Exception types shared across the package."""


class NearSingularError(ValueError):
    """Integration refused: the coefficient matrix grows like 1/(1-e) near
    theta = pi, and eccentricities above the validated cap (0.99) are outside
    the integrator's envelope.  Statements about e -> 1 are obtained by the
    closed-form region arithmetic instead."""


class CertificationError(RuntimeError):
    """A certificate could not be established (a checkpoint failed to be
    hyperbolic, or a requested segment is not covered by the region)."""
