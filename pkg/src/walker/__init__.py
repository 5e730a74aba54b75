"""Simply presented torsion modules, Walker modules P_beta and balanced sequences."""

from .ordinal import INFINITY, OMEGA, Ordinal, add, cmp, left_sub, ordinal, parse_ordinal
from .presentation import (
    ForestPresentation,
    WalkerPresentation,
    finite_restriction,
    kappa,
    p_beta,
    quotient_by_top,
    quotient_by_x_alpha,
    x_alpha,
)
from .elements import Element, normalize
from .realization import FiniteMap, FiniteModule, Submodule, all_subgroups, quotient, realize
from .filtration import (
    closure,
    generator_height,
    height,
    length,
    p_sigma,
    torsion_part,
    ulm_invariants,
)
from .purity import (
    ShortExactSequence,
    balanced_criterion,
    canonical_presentation,
    is_lambda_balanced,
    is_lambda_isotypic,
    is_lambda_nice,
    is_proper,
)
from .homlift import Morphism, NotLiftable, build_morphism, hom_set, lift, liftable

__version__ = "0.1.0"
