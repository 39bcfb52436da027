"""Phase-sensitivity bounds for Mach-Zehnder interferometry with asymmetric beam splitters."""

from .errors import DomainError, SeparabilityError, SingularFisherError, TruncationError
from .states import CssMode, Family, InputStateSpec, StateMoments, analytic_moments, validate
from .qfi import (
    BeamSplitterConfig,
    QfiMatrix,
    Theory,
    bound_v1,
    bound_v2,
    frak_f,
    frak_f_max,
    frak_g,
    four_var_jz,
    gain,
    hierarchy_check,
    optimize_bs,
    qfi_matrix,
    sensitivity_limits,
)

__version__ = "0.1.0"

__all__ = [
    "BeamSplitterConfig",
    "CssMode",
    "DomainError",
    "Family",
    "InputStateSpec",
    "QfiMatrix",
    "SeparabilityError",
    "SingularFisherError",
    "StateMoments",
    "Theory",
    "TruncationError",
    "analytic_moments",
    "bound_v1",
    "bound_v2",
    "four_var_jz",
    "frak_f",
    "frak_f_max",
    "frak_g",
    "gain",
    "hierarchy_check",
    "optimize_bs",
    "qfi_matrix",
    "sensitivity_limits",
    "validate",
]
