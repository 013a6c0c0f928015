"""Space-efficient sorting, ranking and tree isomorphism over packed
self-delimiting numbers."""

from .bits import (
    BitSequence,
    PopcountTable,
    PrefixSumTable,
    RankSelectIndex,
    build_popcount_table,
    build_prefixsum_table,
    build_rank_select,
    zero_fill,
)
from .codec import (
    SdnSequence,
    encode,
    encoded_length,
    read_container,
    write_container,
)
from .errors import (
    ContainerFullError,
    CorruptSequenceError,
    FormatError,
    IteratorExhaustedError,
    SdnError,
    TreeInputError,
)
from .isomorphism import colored_isomorphic, rooted_isomorphic, unrooted_isomorphic
from .memory import account
from .ranking import (
    CompetitiveRankStructure,
    DenseRankStructure,
    build_dense_rank,
    build_rank,
    dense_rank,
    rank,
)
from .sorting import AreaDirectory, SortConfig, presort_small, small_value_cap, sort, sort_big
from .trees import (
    BalancedParens,
    ChoiceDictionary,
    ClassificationStore,
    HeightIterator,
    bp_from_tree,
    classification_store,
    format_tree_text,
    parse_tree_text,
    tree_center,
)

__version__ = "0.1.0"

__all__ = [
    "BitSequence",
    "PopcountTable",
    "PrefixSumTable",
    "RankSelectIndex",
    "build_popcount_table",
    "build_prefixsum_table",
    "build_rank_select",
    "zero_fill",
    "SdnSequence",
    "encode",
    "encoded_length",
    "read_container",
    "write_container",
    "SdnError",
    "CorruptSequenceError",
    "ContainerFullError",
    "FormatError",
    "TreeInputError",
    "IteratorExhaustedError",
    "SortConfig",
    "AreaDirectory",
    "sort",
    "presort_small",
    "sort_big",
    "small_value_cap",
    "DenseRankStructure",
    "CompetitiveRankStructure",
    "build_dense_rank",
    "build_rank",
    "dense_rank",
    "rank",
    "BalancedParens",
    "ChoiceDictionary",
    "HeightIterator",
    "ClassificationStore",
    "bp_from_tree",
    "classification_store",
    "tree_center",
    "parse_tree_text",
    "format_tree_text",
    "rooted_isomorphic",
    "unrooted_isomorphic",
    "colored_isomorphic",
    "account",
    "__version__",
]
