from app.oracles.oracles import (brute_force_min_slice, increasing_sequences, is_maximal_slice,
                                 is_valid_slice)

__all__ = ['brute_force_min_slice', 'increasing_sequences', 'is_maximal_slice',
           'is_valid_slice']
