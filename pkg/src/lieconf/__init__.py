"""Exact computations with solvable Lie conformal algebras and finite vertex algebras."""

from .conformal import (
    ConformalAlgebra,
    LambdaElement,
    central_series,
    check_axioms,
    coefficient,
    derived_series,
    lambda_bracket,
    stabilized_ideal,
)
from .hmodule import ModuleElement, PresentedModule, Submodule, smith_normal_form
from .modify import ModificationTrace, modify
from .poly import MPoly, RatPoly
from .repweight import (
    LambdaAction,
    Weight,
    decompose,
    engel_check,
    generalized_weight_filtration,
    image_is_nilpotent,
    lie_filtration,
    singularity,
    weight_spaces,
)
from .vertex import (
    ExampleElement,
    VertexAlgebra,
    build_example,
    check_vertex_axioms,
    exp_inner_automorphism,
    is_nilpotent_element,
    lie_functor,
    root_space_decomposition,
)

__version__ = "0.1.0"
