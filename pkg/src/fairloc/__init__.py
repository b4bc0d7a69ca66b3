"""Group-fair facility location mechanisms on the real line."""

from .core import (Agent, EvalReport, Instance, InstanceError, Objective, Placement,
                   agent_weight, cost, group_effect, load_instance, mge, validate)
from .mechanisms import MechanismSpec, run_mechanism
from .multi import UnsupportedFacilityCount, dictatorial, endpoint, reject_k_ge_3
from .optimal import (OptResult, SolverConfig, grid_oracle_single, grid_oracle_two,
                      opt_single, opt_two, solve, two_agent_opt_wmgc)
from .single import PhantomConfig, balanced, counts, leftmost, major, major_phantom, med
from .verify import (SearchConfig, ratio, ratio_bound, search_report, sp_check_instance,
                     sp_exhaustive, worst_case_search)

__version__ = "0.1.0"
