"""Gauss hypergeometric evaluation and spirallikeness criteria for z*2F1(a,b;c;z)."""

from .specfun import EvalResult, Method, ParamTriple, d2f1, gauss_2f1
from .criteria import QuadraticFormLMN, SpiralAngle, Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "EvalResult",
    "Method",
    "ParamTriple",
    "QuadraticFormLMN",
    "SpiralAngle",
    "Status",
    "Verdict",
    "d2f1",
    "gauss_2f1",
    "__version__",
]
