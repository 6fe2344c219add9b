"""Exact computations with dg categories, their pretriangulated hulls and A∞-functor lifts."""

from .ainf_engine import AInfFunctor, TableFunctor, check_functor_relation, check_relation_suite
from .beilinson_geometry import BeilinsonCategory, koszul_complex, product_category, twist_by_O_minus1_model
from .completions import Pretr, check_maurer_cartan, pretriangulated_hull
from .core_algebra import GF, QQ
from .dg_kernel import DgCategory, Morphism, check_dg_axioms
from .homology_lab import decide_h0_isomorphic, hom_complex, quiver_functor_lift
from .lift_engine import f_sharp
from .presentations import Arrow, QuiverPresentation, build_dg_quiver_category, build_path_category

__all__ = [
    "AInfFunctor", "TableFunctor", "check_functor_relation", "check_relation_suite",
    "BeilinsonCategory", "koszul_complex", "product_category", "twist_by_O_minus1_model",
    "Pretr", "check_maurer_cartan", "pretriangulated_hull",
    "GF", "QQ",
    "DgCategory", "Morphism", "check_dg_axioms",
    "decide_h0_isomorphic", "hom_complex", "quiver_functor_lift",
    "f_sharp",
    "Arrow", "QuiverPresentation", "build_dg_quiver_category", "build_path_category",
]

__version__ = "0.1.0"
