"""Exception types shared across the package.

Every error message names the violated invariant so CLI users and logs can
tell validation failures (exit code 1) from convergence failures (exit 2).
"""


class SepkitError(Exception):
    """Base class for all errors raised by sepkit."""


class NotHermitianError(SepkitError):
    """Matrix exceeds the Hermiticity tolerance."""


class DimensionMismatchError(SepkitError):
    """Operator shape, subsystem dimensions, or factor lists disagree."""


class BadSubsetError(SepkitError):
    """Subsystem subset is empty, out of range, or not a proper subset."""


class ZeroVectorError(SepkitError):
    """A vector that must be nonzero has zero norm."""


class WeightsInvalidError(SepkitError):
    """Mixture weights are negative or do not sum to one."""


class OutOfRangeError(SepkitError):
    """A numeric parameter lies outside its documented range."""


class UnknownNameError(SepkitError):
    """Requested named object does not exist."""


class WrongShapeError(SepkitError):
    """Operation requires specific subsystem dimensions."""


class UnsupportedDimsError(SepkitError):
    """Operation is only implemented for qubit factors."""


class NotUnextendibleError(SepkitError):
    """A product vector (nearly) orthogonal to the whole set exists."""


class NotDetectingError(SepkitError):
    """Probe operator has (near-)zero overlap with the target state."""


class DegenerateOperatorError(SepkitError):
    """Probe operator has (near-)zero maximum product overlap."""


class MissingCertificateError(SepkitError):
    """Operation requires a certified input (run the verify step first)."""


class CertificateInvalidError(SepkitError):
    """Attached certificate contradicts the object's defining invariant."""


class SerializationError(SepkitError):
    """Document violates the interchange schema (kind, dims, payload shape)."""


class OrthogonalityViolationError(SepkitError):
    """Two supposedly orthogonal product vectors overlap.

    Indices are 1-based positions in the member list.
    """

    def __init__(self, i: int, j: int, overlap: float):
        self.i = i
        self.j = j
        self.overlap = float(overlap)
        super().__init__(
            f"product vectors {i} and {j} violate pairwise orthogonality: "
            f"|<v{i}|v{j}>| = {self.overlap:.12g} > 1e-10"
        )


class InfeasibleError(SepkitError):
    """Alternating projections did not reach the feasibility tolerances."""

    def __init__(self, message: str, residual: float, iterations: int):
        self.residual = float(residual)
        self.iterations = int(iterations)
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")


class ConvergenceFailureError(SepkitError):
    """Optimizer failed its cross-check; results are not certificate grade."""


class UnverifiedMapWarning(UserWarning):
    """Map used in a spectral test carries no positivity certificate."""
