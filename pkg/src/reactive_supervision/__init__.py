"""Reactive supervision: harvest sarcasm labels from the replies that point it out."""
from .core import (
    BrokenChain,
    ConversationThread,
    CycleDetected,
    DuplicateId,
    Perspective,
    PersonClass,
    Tweet,
    validate_thread,
)
from .cues import CueDecision, Reason, classify_cue, is_cue_candidate
from .matcher import RoleAssignment, RolePattern, match_roles, pattern_for
from .pipeline import (
    HarvestConfig,
    HarvestReport,
    LabeledInstance,
    harvest,
    hashtag_harvest,
    iter_harvest,
    sample_negatives,
    traverse,
)
from .sequencer import AuthorSequence, canonicalize, positions_of
from .sources import FileCorpus, HttpSource, SourceConfig, load_config, open_source
from .stats import CorpusStats
from .synth import generate_corpus, generate_thread, oracle_roles

__version__ = "0.1.0"
