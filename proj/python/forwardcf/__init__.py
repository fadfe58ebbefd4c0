"""Structural causal models, exact Gini welfare and counterfactual treatment choice."""

from ._forwardcf import *  # noqa: F401,F403
from ._forwardcf import __doc__  # noqa: F401

__version__ = "0.1.0"
