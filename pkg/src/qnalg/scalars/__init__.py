from .context import (
    DivisionContext,
    MatrixContext,
    QuaternionContext,
    RatFuncContext,
    RationalContext,
    make_context,
)
from .matrf import MatRF
from .parse import parse_scalar
from .quaternion import Quaternion
from .ratfunc import RatFunc

__all__ = [
    "DivisionContext",
    "MatRF",
    "MatrixContext",
    "Quaternion",
    "QuaternionContext",
    "RatFunc",
    "RatFuncContext",
    "RationalContext",
    "make_context",
    "parse_scalar",
]
