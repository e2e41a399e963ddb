"""Additive and multiplicative structure of multiplicative subgroups of F_p.

Exact counters (sumsets, energies, collinear triples, line richness) with
brute-force cross-checks, plus a scan harness that records how each
inequality's left side compares with its bound at desk scale.
"""

from .collinear import (
    MitkinSum, RichnessHistogram, TripleCount, line_richness, mitkin_sum, ratio_set,
    richness_histogram, triples_bruteforce, triples_by_definition, triples_by_lines,
    triples_invariant,
)
from .energy import (
    RepProfile, additive_energy, energy_bruteforce, iterated_sumset,
    multiplicative_energy, rep_profile, shift_energy_invariance_check, sumset,
)
from .field import PrimeContext, divisors, is_prime, mod_inv, mod_pow, primitive_root
from .groups import (
    CosetReps, InvariantSet, Subgroup, coset_reps, dilate, invariant_set, shift, subgroup,
)
from .harness import ScanConfig, ScanRecord, scan

__version__ = "0.1.0"
