"""Finitely revising computation: nondeterministic type-2 machines, closed
choice, two-sided (Delta^0_2) function names and piecewise names."""

from .streams import ConfigurationError, Prefix, PrefixTransformer, StreamName
from .spaces import (BAIRE, CANTOR, UNIT, Ball, ClosedSetName, CompactSetName, Delta2SetName,
                     OpenSetName, PointName, TreeClosed, Verdict, delta2_verdict, signed_digit_point)
from .machines import (AdviceSpace, Emit, Halted, Ndtm, Progress, RESET, RevisingOutput, TypeTwoMachine,
                       execute_baire_advice_bounded, execute_cantor_advice, execute_nat_advice,
                       execute_nat_cantor_advice)
from .choice import WeihrauchReduction, c_cantor_solver, c_nat_solver
from .jayne_rogers import (Delta2FunctionName, PiecewiseName, delta2_to_piecewise, eval_delta2,
                           eval_piecewise, piecewise_to_delta2)
from .markov import (CylinderEnumeration, LimitName, OpenEnumeration, check_l_instance, jump_approx,
                     low_name_from_markov, markov_from_low)

__version__ = "0.1.0"
