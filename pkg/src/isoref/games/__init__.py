"""Games: plays, strategy oracles and the extraction of path isomorphisms."""

from .extraction import (
    Bijection, InconsistentPartition, KIso, NotBijective, extensions, extract_from_sequential,
    extract_path_iso, k_isomorphism, slice_bijection,
)
from .generators import (
    random_arena, random_path_iso, random_renaming, random_tree_iso, rename_morphism, unfold,
)
from .involution import involution_arena, involution_example, type_renaming
from .plays import (
    Illegal, IllegalPlay, Legal, MalformedPlay, NotPreZigZag, Play, PreLegal, ZigZagVerdict,
    current_thread, dual_moves, dual_play, is_legal, is_prelegal, legality_check, pending_question,
    prezigzag_violation, restrict, same_pointers, show_columns, show_play, split_arrow, thread_positions,
    zigzag_check,
)
from .sequential import InverseViolation, SequentialMorphism, lift_thread, sequential_morphism
from .strategies import (
    StrategyOracle, compose, copycat, copycat_along, enumerate_plays, legal_moves, o_ending_prefixes,
    random_oracle, rename_oracle, sample_play, side_path, single_thread_violation,
)
