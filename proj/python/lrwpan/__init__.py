"""Software IEEE 802.15.4 868/915 MHz PHY modem, channel simulator and
measurement harness."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
