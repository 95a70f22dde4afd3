"""S-character simplices of finite groups and their lattice points."""

from .chartab import CharacterTable, RealCharacterTable, census, decompose, load_table, parse_table, realify, validate
from .cyclo import Cyclotomic, E, real_sign
from .lattice import brute_force, constraints_from_simplex, enumerate_points, strengthen
from .schar import SCharacter, SearchOptions, SearchReport, decode, product_schar, project, search
from .scpoly import SSimplex, closed_form_vertices, contains, dilate, polarity_suite, simplex_from_table

__version__ = "0.1.0"

__all__ = [
    "CharacterTable", "RealCharacterTable", "census", "decompose", "load_table", "parse_table",
    "realify", "validate", "Cyclotomic", "E", "real_sign", "brute_force", "constraints_from_simplex",
    "enumerate_points", "strengthen", "SCharacter", "SearchOptions", "SearchReport", "decode",
    "product_schar", "project", "search", "SSimplex", "closed_form_vertices", "contains", "dilate",
    "polarity_suite", "simplex_from_table",
]
