"""Exact computations with free DG Lie models over subrings of Q.

The main entry points are :class:`DglPresentation`, :func:`sequence_report`
and :func:`infiniteness_check`; see ``dglie --help`` for the command line.
"""
from .dgl import DglMorphism, DglPresentation, LieHomology, truncate_below
from .errors import DglError
from .fileformat import dumps, load, parse
from .freelie import FreeLieAlgebra, LieElement
from .homotopy import build_cylinder, verify_homotopy
from .models import (AbelianGroupPresentation, moore_space, moore_wedge, random_small,
                     skeletal_chain, sphere_product)
from .ring import LocalRing, ModuleDescription, smith_normal_form
from .selfeq import (SplitData, h3_decomposition, h4_decomposition, infiniteness_check,
                     sequence_report)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupPresentation", "DglError", "DglMorphism", "DglPresentation",
    "FreeLieAlgebra", "LieElement", "LieHomology", "LocalRing", "ModuleDescription",
    "SplitData", "build_cylinder", "dumps", "h3_decomposition", "h4_decomposition",
    "infiniteness_check", "load", "moore_space", "moore_wedge", "parse", "random_small",
    "sequence_report", "skeletal_chain", "smith_normal_form", "sphere_product",
    "truncate_below", "verify_homotopy",
]
