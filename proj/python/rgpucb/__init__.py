"""Bayesian optimisation with a Gamma-randomised GP-UCB acquisition function."""

from rgpucb._core import *  # noqa: F401,F403
from rgpucb._core import __version__  # noqa: F401
