"""Exact truncated q-series, Bailey pairs and an executable identity corpus."""

from .bailey import INF, BaileyPair, chain_step, lattice_step, pair_relation_check, seed_pair_A, seed_pair_B
from .corpus import Identity, Report, register_all, verify_all, verify_identity
from .errors import QSeriesError
from .qfactory import Monomial, Q, Term, poch_finite, poch_infinite, qbinom, theta_f
from .rings import INTEGERS, LAURENT, CycloElem, RingTag, ZLaurent, cyclotomic
from .series import QSeries

__all__ = [
    "INF",
    "INTEGERS",
    "LAURENT",
    "BaileyPair",
    "CycloElem",
    "Identity",
    "Monomial",
    "Q",
    "QSeries",
    "QSeriesError",
    "Report",
    "RingTag",
    "Term",
    "ZLaurent",
    "chain_step",
    "cyclotomic",
    "lattice_step",
    "pair_relation_check",
    "poch_finite",
    "poch_infinite",
    "qbinom",
    "register_all",
    "seed_pair_A",
    "seed_pair_B",
    "theta_f",
    "verify_all",
    "verify_identity",
]
