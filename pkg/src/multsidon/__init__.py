"""multsidon: construction and exhaustive verification of a dense infinite
multiplicative Sidon set.

The composite part of the set is assembled level by level: for each k >= 11,
a rectangle-free family of 4-subsets of the dyadic prime block
(2^(k-1), 2^k) is built over a prime field, and each 4-subset contributes
the product of its primes. Together with all primes this forms a
multiplicative Sidon set whose counting function exceeds pi(n) by at least
n^(3/4) / (196608 (ln n)^3) for every n >= 2^44.
"""

from .construction import (
    DensityRow,
    SidonLevel,
    SidonSequence,
    build_level,
    build_sequence,
    composite_count,
    density_profile,
    density_target,
    sequence_check_set,
)
from .errors import (
    BoundViolation,
    CapExceeded,
    GroundSetTooSmall,
    MultSidonError,
    NoDecomposition,
    PreconditionTooSmall,
    PreconditionViolated,
    SieveCapacityError,
)
from .family import (
    FieldTuple,
    QuadFamily,
    alpha_histogram,
    build_family,
    build_tuples,
    e2,
    embed,
    find_modulus,
    select_alpha,
    verify_intersection_bound,
    verify_rectangle_free,
    verify_size_bound,
)
from .oracle import GnResult, greedy_sidon, max_sidon_subset
from .primes import (
    PrimeBlock,
    check_rosser,
    is_prime,
    prime_block,
    prime_count,
    rosser_sweep,
    sieve,
)
from .verify import (
    LabeledBipartiteGraph,
    SidonCheckResult,
    c4_free,
    divisor_in_window,
    erdos_decompose,
    factorize,
    is_multiplicative_sidon,
    lemma1_certify,
    lemma1_suite,
    random_c4_free_graph,
    small_divisor_split,
    smooth_head_four_primes,
    smooth_head_prime_run,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
