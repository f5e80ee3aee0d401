"""navex: a 2D navigation simulator whose controller votes over advisor
comments and explains its decisions in natural language."""

from .config import SimConfig, load_config, parse_config
from .world import (Action, LaserScan, Pose, World, apply_action, load_world,
                    ray_cast)
from .spatial import (ConveyorGrid, Region, Skeleton, SpatialModel, Trail,
                      learn_region, learn_trail, merge_doors)
from .advisors import (Comment, DecisionState, Tier1Outcome, advisor_rationale,
                       tier1_evaluate, tier3_comment)
from .controller import (CommentMatrix, DecisionRecord, decide, read_log,
                         run_episode, write_log)
from .explain import (Explanation, SupportStats, compute_stats,
                      explain_confidence, explain_hypothetical, explain_why,
                      explain_why_not)
from .phrases import PhraseTable, action_phrase, default_phrase_table, map_phrase
from .evaluate import EvalReport, coleman_liau, corpus_report

__version__ = "0.1.0"
