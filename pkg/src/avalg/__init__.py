"""Free averaging algebras: words, enumeration, trees and the operad."""

from .words import (
    AveragingWord,
    Bracket,
    BracketedWord,
    Letter,
    Violation,
    WordAnalysis,
    analyze,
    parse_word,
    peel,
    render_word,
    validate_averaging,
)
from .algebra import (
    LinearCombination,
    apply_p,
    diamond,
    parse_lincomb,
    reduce,
    rewrite_reduce,
    universal_map,
)
from .enumeration import (
    census,
    closed_form,
    collapse_runs,
    compositions,
    expand_runs,
    reduce_to_v1,
    schroeder,
    series,
    univariate,
)
from .instances import (
    FiniteAlgebra,
    build_instance,
    check_averaging,
    check_reynolds,
)
from .trees import (
    AveragingTree,
    enumerate_schroeder,
    is_averaging_tree,
    phi,
    phi_inverse,
    psi,
    psi_inverse,
)
from .operad import OperadElement, compose, tree_apply, tree_product

__version__ = "0.1.0"
