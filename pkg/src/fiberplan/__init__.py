"""Multilevel sampling-based motion planning over fiber-bundle sequences."""

from .bundles import (Bundle, BundleSequence, Drop, Keep, PathOnSpace, Prefix,
                      check_admissible, section_l1, section_l2)
from .environments import (GoalRegion, PlanningProblem, disk_crossing_problem,
                           hypercube_problem, hypercube_valid, wall_gap_problem)
from .graph import LevelGraph
from .heuristics import importance, quotient_metric
from .planners import (BundlePlanner, PlanOutcome, PlannerConfig, check_motion,
                       find_section, plan, restriction_sample)
from .samplers import DecaySchedule, SamplerConfig, decay, sample_base
from .spaces import SO2, RealVector, StateSpace

__version__ = "0.1.0"
