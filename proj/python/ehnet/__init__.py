"""Two-node energy-harvesting random-access network models."""

from ._ehnet import *  # noqa: F401,F403
from ._ehnet import __doc__  # noqa: F401
