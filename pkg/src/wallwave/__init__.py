"""Dilated wallpaper groups, their induced representations, and the wavelet representation."""

from .catalog import GROUP_NAMES, NONSYMMORPHIC, all_groups, check_compatibility, get_group
from .grammar import InvalidForGroup, ParseError, format_element, parse_element
from .group_core import WaveletElement, decompose, identity, invert, multiply, section_gamma
from .induced import FinSuppVector, sigma_apply, twist_eval
from .orbits import build_cross_section, canonicalize
from .scalar import LatticeVector, TriadicHalf
from .wavelet_rep import GaussianPacket, PacketSum, apply_V, apply_Vhat, rho_fiber, verify_intertwining

__all__ = [
    "GROUP_NAMES",
    "NONSYMMORPHIC",
    "get_group",
    "all_groups",
    "check_compatibility",
    "TriadicHalf",
    "LatticeVector",
    "WaveletElement",
    "identity",
    "multiply",
    "invert",
    "decompose",
    "section_gamma",
    "parse_element",
    "format_element",
    "ParseError",
    "InvalidForGroup",
    "FinSuppVector",
    "sigma_apply",
    "twist_eval",
    "build_cross_section",
    "canonicalize",
    "GaussianPacket",
    "PacketSum",
    "apply_V",
    "apply_Vhat",
    "rho_fiber",
    "verify_intertwining",
]
