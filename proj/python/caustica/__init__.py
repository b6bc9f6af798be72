"""Cylindrical-mirror anamorphs, caustic envelopes, and air-water imaging."""

from ._caustica import *  # noqa: F401,F403
from ._caustica import __doc__  # noqa: F401
