"""
Solutions package: the catalog of closed-form solutions of the
constant-coefficient cubic equation and their images on reducible triples.
"""

from .catalog import (
    FamilyParams, SolutionFamily, FAMILIES, list_families, get_family, families_for,
    constant_solution, instantiate,
)
