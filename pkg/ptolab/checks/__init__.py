from .base import CheckBase, Context
from .metric_axioms import MetricAxiomsCheck
from .ptolemy import PtolemyCheck
from .quasi_constant import QuasiConstantCheck
from .involution import InvolutionCheck
from .four_point import FourPointNormalFormCheck
