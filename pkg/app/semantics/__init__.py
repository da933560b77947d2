from app.semantics.semantics import (ReachGraph, can_fire, enabled_transitions,
                                     find_increasing_sequences, fire, fire_sequence, fire_tokens,
                                     first_increasing_sequence, is_enabled, is_increasing,
                                     project_subsequence, raised_places, reachability_graph)

__all__ = ['ReachGraph', 'can_fire', 'enabled_transitions', 'find_increasing_sequences', 'fire',
           'fire_sequence', 'fire_tokens', 'first_increasing_sequence', 'is_enabled',
           'is_increasing', 'project_subsequence', 'raised_places', 'reachability_graph']
