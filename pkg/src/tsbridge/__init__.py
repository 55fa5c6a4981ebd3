"""Embeddings between Kripke structures and labelled transition systems.

The package translates between the two models, decides the behavioural
equivalences they are compared by, and minimises systems directly or by a
round trip through the other model.
"""

from .core import (
    BOT,
    TAU,
    Action,
    ActionKind,
    InvalidSystemError,
    KripkeStructure,
    LabelledTransitionSystem,
    Partition,
    Violation,
    disjoint_union,
    make_ks,
    make_lts,
    validate_ks,
    validate_lts,
)
from .embed import (
    NotReversibleError,
    StateMapping,
    embed_ks,
    embed_lts,
    is_reversible_ks,
    is_reversible_lts,
    reverse_ks,
    reverse_lts,
)
from .minimise import isomorphic, min_ks, min_ks_via_lts, min_lts, min_lts_via_ks

__version__ = "0.1.0"
