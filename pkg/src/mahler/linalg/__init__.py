from .exact import bareiss, integer_columns, integer_rows, kernel_exact, left_kernel_exact, rank_exact
from .lll import lll, sq_norm
from .modular import kernel_modular, primes, rank_profile_mod, rational_reconstruct

__all__ = [
    "bareiss",
    "integer_columns",
    "integer_rows",
    "kernel_exact",
    "kernel_modular",
    "left_kernel_exact",
    "lll",
    "primes",
    "rank_exact",
    "rank_profile_mod",
    "rational_reconstruct",
    "sq_norm",
]
