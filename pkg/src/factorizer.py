"""
Integer Factorization
Smallest-prime-factor sieve for small inputs, trial division up to the
sieve bound, and sympy for whatever cofactor is left (verified by
multiplication before it is trusted).
"""

from functools import lru_cache
from typing import Dict

import numpy as np
from sympy import factorint, isprime

from errors import FactorizationFailure

DEFAULT_TRIAL_BOUND = 1 << 16
DEFAULT_MAX_VALUE = 1 << 64


def spf_sieve(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for 2 <= n <= limit"""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit ** 0.5) + 1):
        if spf[p] == 0:
            multiples = spf[p * p::p]
            multiples[multiples == 0] = p
    unset = spf == 0
    spf[unset] = np.arange(limit + 1)[unset]
    return spf


class Factorizer:
    """
    Factor integers up to max_value

    Args:
        trial_bound: Sieve and trial-division bound
        max_value: Largest accepted input
    """

    def __init__(self, trial_bound: int = DEFAULT_TRIAL_BOUND,
                 max_value: int = DEFAULT_MAX_VALUE):
        self.trial_bound = trial_bound
        self.max_value = max_value
        self._spf = spf_sieve(trial_bound)
        self._primes = [int(p) for p in np.flatnonzero(self._spf == np.arange(trial_bound + 1))
                        if p >= 2]
        self.factor = lru_cache(maxsize=1 << 16)(self._factor)

    def _factor(self, n: int) -> Dict[int, int]:
        if n < 1:
            raise FactorizationFailure(f"cannot factor {n}")
        if n > self.max_value:
            raise FactorizationFailure(f"{n} exceeds the supported range 2^{self.max_value.bit_length() - 1}")
        factors: Dict[int, int] = {}
        if n <= self.trial_bound:
            while n > 1:
                p = int(self._spf[n])
                factors[p] = factors.get(p, 0) + 1
                n //= p
            return factors

        remaining = n
        for p in self._primes:
            if p * p > remaining:
                break
            while remaining % p == 0:
                factors[p] = factors.get(p, 0) + 1
                remaining //= p
        if remaining > 1:
            if remaining <= self.trial_bound ** 2 or isprime(remaining):
                factors[remaining] = factors.get(remaining, 0) + 1
            else:
                for p, e in factorint(remaining).items():
                    if not isprime(p):
                        raise FactorizationFailure(f"non-prime factor {p} of {n}")
                    factors[p] = factors.get(p, 0) + e

        product = 1
        for p, e in factors.items():
            product *= p ** e
        if product != n:
            raise FactorizationFailure(f"factorization of {n} does not multiply back")
        return dict(sorted(factors.items()))


_default = None


def default_factorizer() -> Factorizer:
    global _default
    if _default is None:
        _default = Factorizer()
    return _default


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization of n as {prime: exponent}, primes ascending"""
    return default_factorizer().factor(n)
