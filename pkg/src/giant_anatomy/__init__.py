"""Sampling and dissecting the supercritical Erdos-Renyi giant component."""
from .dists import RngStream
from .graph import Anatomy, MultiGraph
from .scalar_math import ModelParams, conjugate, moments

__all__ = ["Anatomy", "ModelParams", "MultiGraph", "RngStream", "conjugate", "moments"]
