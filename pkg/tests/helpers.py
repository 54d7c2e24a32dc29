"""Cached constructions shared by the test modules."""

from functools import lru_cache
from math import gcd

from fdhopf import drinfeld_double, group_algebra, taft
from fdhopf.structure import compute_integrals


@lru_cache(maxsize=None)
def group(*factors):
    return group_algebra(list(factors))


@lru_cache(maxsize=None)
def taft_alg(n, e=1):
    return taft(n, e)


@lru_cache(maxsize=None)
def taft_double():
    return drinfeld_double(taft_alg(3, 1))


@lru_cache(maxsize=None)
def integrals(H):
    return compute_integrals(H)


def taft_params():
    return [(n, e) for n in (2, 3, 5, 7) for e in range(1, n) if gcd(e, n) == 1]


def small_bundle():
    """Bundled algebras of dimension below 30 (fast enough for per-test loops)."""
    algs = [group(n) for n in range(1, 10)] + [group(3, 3)]
    algs += [taft_alg(n, e) for n, e in taft_params() if n <= 5]
    algs.append(drinfeld_double(group(2)))
    return algs
