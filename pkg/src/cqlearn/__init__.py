"""Exact active learning of half spaces with label and comparison queries."""
from .errors import (CQLearnError, DegeneratePool, DimensionMismatch, GenerationFailed, Inconsistent,
                     NonTermination, ParseError, UnknownPoint)
from .geometry import (LinearConcept, MarginReport, RationalVector, affine_concept, evaluate, label_of, lift,
                       margin_report)
from .inference import (InferenceResult, PartialHypothesis, VersionSpace, cone_infer, cone_infer_margin,
                        constraints_of, coverage, infer_all, infer_label)
from .instances import (Instance, InstanceMeta, VerificationReport, WitnessInstance, gen_grid, gen_lb_margin,
                        gen_lb_r3, gen_margin, gen_plane, verify_witness)
from .learners import (BoostConfig, RunReport, boost, in_cone2d, learn_2d, learn_statistical, q_bound,
                       sort_with_queries, weak_confident_learn)
from .lp import ConstraintSystem, Feasibility, feasible
from .queries import AnsweredQuery, Compare, Label, QueryStats, QueryTranscript, SimulatedOracle
from .textio import format_instance, format_witness, parse_instance_file

__version__ = "0.1.0"
