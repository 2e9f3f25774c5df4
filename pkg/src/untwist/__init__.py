from .laurent import LaurentPoly, RationalFn, LambdaMatrix, parse_poly
from .knotio import PDCode, BraidWord, TwistRegion, parse_pd, parse_braid

__version__ = "0.1.0"
