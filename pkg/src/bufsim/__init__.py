"""Bounded two-buffer simulation games on Büchi automata.

Decides whether one automaton simulates another when the simulating side
may delay its answers through two FIFO buffers of fixed capacities, and
applies the game as a sound polynomial-time approximation of inclusion
between rational relations over infinite words.
"""

from .automata import (BuchiAutomaton, BufferMap, Lasso, ParseError,
                       buchi_emptiness, buchi_intersection, degeneralize,
                       lasso_automaton, lasso_membership, parse_ba,
                       sample_accepting_lassos, same_automaton, serialize_ba)
from .paritygame import (EVEN, ODD, ParityGame, WinningRegions, attractor,
                         dump_pg, progress_measure_solve,
                         strategy_cycles_consistent, zielonka_solve)
from .simulation import (BuiltGame, Capacities, UnboundedCapacityError,
                         build_direct_arena, build_fair_sim_game,
                         fair_simulates, max_consumes_in_a_turn,
                         reachable_under_strategy, reduce_buffer1,
                         reduce_buffer2, single_buffer_simulates,
                         two_buffer_simulates, two_buffer_simulates_direct,
                         two_buffer_simulates_reduced)
from .transducers import (Inclusion, Transducer, normalize, parse_bt,
                          relation_inclusion_approx, serialize_bt,
                          to_automaton)
from .generators import (LemmaReport, PcpInstance, check_projection_lemma,
                         gen_hierarchy_family, gen_pcp_automata,
                         projection_match_automaton, random_automaton,
                         random_sigma)

__all__ = [name for name in dir() if not name.startswith("_")]
