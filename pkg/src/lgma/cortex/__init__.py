"""Trained association modules: Wernicke, Broca, MT, SPL, BA14/40, preSMA, SMA."""

from lgma.cortex.base import SeqRegressor
from lgma.cortex.lesion import LesionMask
from lgma.cortex.wernicke import Wernicke
from lgma.cortex.broca import Broca, EmptyInput
from lgma.cortex.mt import MT, MtSession
from lgma.cortex.spl import SPL
from lgma.cortex.ba1440 import BA1440, UnknownQuery
from lgma.cortex.presma import PreSMA, UnknownIntention
from lgma.cortex.sma import SMA

__all__ = [
    "BA1440",
    "Broca",
    "EmptyInput",
    "LesionMask",
    "MT",
    "MtSession",
    "PreSMA",
    "SPL",
    "SMA",
    "SeqRegressor",
    "UnknownIntention",
    "UnknownQuery",
    "Wernicke",
]
