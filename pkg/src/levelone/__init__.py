"""Exact q-expansions of level one modular forms, Hecke matrices, and
certificates for vanishing Hecke eigenvalues modulo small primes."""

from .classical import bernoulli, delta, eisenstein, j_invariant, weight2_form
from .hecke import eigenform, hecke_matrix, miller_basis
from .nonordinary import certify_theorem1, certify_theorem2, nonordinary_table, weight_criterion
from .qseries import ModPSeries, QSeries

__version__ = "0.1.0"
