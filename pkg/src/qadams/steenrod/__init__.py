"""Steenrod algebra corners: Milnor product, minimal resolutions, cobar and Koszul oracles, BP data."""
from .bpdata import bp_comparison_map, bp_ext_a, bp_ext_a0
from .cobar import cobar_ext_oracle, exterior_cobar_dims
from .exterior import PolyExtChart, ext_exterior
from .milnor import milnor_product
from .resolution import MinimalResolution, minimal_resolution

__all__ = [
    "MinimalResolution", "PolyExtChart", "bp_comparison_map", "bp_ext_a", "bp_ext_a0",
    "cobar_ext_oracle", "ext_exterior", "exterior_cobar_dims", "milnor_product", "minimal_resolution",
]
