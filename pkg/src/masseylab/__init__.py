"""Exact workbench for mod-p group cohomology, Massey products, Kummer
towers with p^3 Galois groups, and abelian crossed products."""

__version__ = "0.1.0"

from .cochains import Cochain, cohomology, cup, differential, hom_basis, inflate, restrict
from .fields import RatFunc, SeededStream, factor, is_pth_power, kummer_independent, primitive_root
from .groups import GroupTable, cyclic, direct_product, heisenberg, parse_group, unipotent, unipotent_bar
from .massey import (
    DefiningSystem,
    contains_zero,
    contains_zero_via_lifts,
    dwyer_from_system,
    dwyer_to_system,
    find_defining_system,
    lift_exists,
    massey_coset,
    massey_value,
    triple_scan,
    verify_defining_system,
)
from .tower import KummerAlgebra, build_tower, galois_group_of_tower, hilbert90, random_tower

__all__ = [name for name in dir() if not name.startswith("_")]
