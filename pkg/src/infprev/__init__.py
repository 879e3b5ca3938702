"""Exact coherence checking for finite and infinite previsions.

Random variables live on state spaces made of finitely many atoms plus
countable tails, where a variable grows like ``one + n*k + exp2*2**k``.
Previsions may be finite or infinite and may be conditional.  All
arithmetic is exact over the rationals.
"""

from .assignment import PrevisionAssignment, PrevisionPair, SingletonFamily
from .coherence import (
    CoherenceVerdict,
    SureLossWitness,
    WitnessTerm,
    build_cone,
    check_coherence1,
    check_extended_coherence,
    check_monotonicity,
)
from .extension import (
    CoherentInterval,
    ExtensionRejected,
    IncoherentAssignment,
    NotInSpan,
    build_conditional_expectation,
    coherent_interval,
    conditional_from_marginals,
    extend_linear_span,
    extend_marginal,
    extend_sequentially,
)
from .extreal import NEG_INF, POS_INF, ExtendedReal, UndefinedArithmetic, format_rational, parse_rational
from .gambles import (
    GrowthCombo,
    RandomVariable,
    StateSpace,
    TailAtom,
    evaluate,
    exact_inf,
    exact_sup,
    linear_combination,
    multiply_by_event,
)
from .problem import Problem, ProblemError, load_problem, parse_problem, serialize
from .scoring import (
    LEBESGUE,
    Rival,
    RivalWitness,
    ScoringMeasure,
    check_coherence3_dominance,
    construct_rival_witness,
    mean_value_r,
    score,
)

__version__ = "0.1.0"
