"""Cyclotomic polynomials, their indices, and divisibility tests.

Everything here is exact integer arithmetic.  The central identity is that
x**n - 1 is the product of the cyclotomics of all divisors of n, which both
generates the polynomials and powers the divisibility shortcuts below.

Generation strategy: for squarefree n the polynomial is computed as a
quotient of products of the sparse binomials x**d - 1 (Moebius inversion of
the divisor identity, every intermediate division exact); for any other n it
is the squarefree-radical cyclotomic with x replaced by a power.  Both routes
follow from the divisor identity and agree with the direct definition; the
test suite re-derives them from scratch.

A process-wide cache keyed by index backs cyclotomic().  It can be loaded
from and saved to a small text file so repeated CLI runs do not recompute
large indices; entries are format-checked and spot-verified against the
divisor identity on load, and anything corrupt is dropped silently.
"""

from __future__ import annotations

import threading
from functools import lru_cache

from .intpoly import IntPoly, divide_exact, divmod_exact

CACHE_HEADER = "cyclotile-cyclotomic-cache v1"


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization as ((p, exponent), ...) with primes ascending."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            out.append((p, a))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def euler_phi(n: int) -> int:
    phi = 1
    for p, a in factorize(n):
        phi *= (p - 1) * p ** (a - 1)
    return phi


def radical(n: int) -> int:
    r = 1
    for p, _ in factorize(n):
        r *= p
    return r


def divisors(n: int) -> tuple[int, ...]:
    """All positive divisors, ascending."""
    out = [1]
    for p, a in factorize(n):
        out = [d * p**k for d in out for k in range(a + 1)]
    return tuple(sorted(out))


def is_prime_power(n: int):
    """(p, a) when n = p**a with a >= 1, else None."""
    f = factorize(n)
    if len(f) == 1:
        return f[0]
    return None


class CyclotomicCache:
    """Index -> polynomial store with optional file persistence.

    Reads are plain dict lookups; writes are serialized by a lock so the
    pure functions in this module can be called from worker threads.
    """

    def __init__(self):
        self._entries: dict[int, IntPoly] = {}
        self._lock = threading.Lock()

    def get(self, n: int):
        return self._entries.get(n)

    def put(self, n: int, poly: IntPoly) -> None:
        with self._lock:
            self._entries[n] = poly

    def __len__(self) -> int:
        return len(self._entries)

    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self._entries))

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    # -- persistence --------------------------------------------------------

    def save(self, path) -> int:
        """Write all entries; returns the number written."""
        with self._lock:
            items = sorted(self._entries.items())
        with open(path, "w", encoding="ascii") as fh:
            fh.write(CACHE_HEADER + "\n")
            for n, poly in items:
                fh.write(f"{n} {poly.to_pair_string()}\n")
        return len(items)

    def load(self, path, spot_checks: int = 5) -> int:
        """Merge entries from a cache file; returns the number accepted.

        Each entry must parse, be monic, and have degree euler_phi(n).  The
        smallest spot_checks indices additionally get the full test that the
        entry divides x**n - 1 exactly.  Entries failing anything are
        dropped, to be recomputed on demand instead of trusted.
        """
        try:
            with open(path, encoding="ascii") as fh:
                lines = fh.read().splitlines()
        except FileNotFoundError:
            return 0
        if not lines or lines[0].strip() != CACHE_HEADER:
            return 0
        loaded: dict[int, IntPoly] = {}
        for line in lines[1:]:
            line = line.strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            try:
                n = int(head)
                poly = IntPoly.from_pair_string(rest)
            except ValueError:
                continue
            if n < 1 or poly.is_zero:
                continue
            if poly.degree != euler_phi(n) or poly.leading != 1:
                continue
            if poly.at_one() != phi_at_one(n):
                continue
            loaded[n] = poly
        for n in sorted(loaded)[:spot_checks]:
            binomial = IntPoly.x_power(n) - IntPoly.one()
            if divide_exact(binomial, loaded[n]) is None:
                del loaded[n]
        with self._lock:
            self._entries.update(loaded)
        return len(loaded)


_default_cache = CyclotomicCache()


def default_cache() -> CyclotomicCache:
    return _default_cache


def cyclotomic(n: int, cache: CyclotomicCache | None = None) -> IntPoly:
    """The n-th cyclotomic polynomial, exact and monic of degree euler_phi(n)."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    store = cache if cache is not None else _default_cache
    hit = store.get(n)
    if hit is not None:
        return hit
    if n == 1:
        poly = IntPoly((-1, 1))
    else:
        rad = radical(n)
        if rad != n:
            poly = cyclotomic(rad, store).compose_power(n // rad)
        else:
            poly = _squarefree_cyclotomic(n)
    store.put(n, poly)
    return poly


def _squarefree_cyclotomic(n: int) -> IntPoly:
    # Moebius quotient: product over divisors d of (x**d - 1)**mu(n/d),
    # where mu(n/d) = (-1)**omega(n/d) because n is squarefree.  Dividing
    # last keeps every intermediate an integer polynomial, and every divisor
    # is a two-term binomial, so the whole thing is cheap.
    numer = [d for d in divisors(n) if len(factorize(n // d)) % 2 == 0]
    denom = [d for d in divisors(n) if len(factorize(n // d)) % 2 == 1]
    poly = IntPoly.one()
    for d in numer:
        poly = poly * (IntPoly.x_power(d) - IntPoly.one())
    for d in denom:
        quot = divide_exact(poly, IntPoly.x_power(d) - IntPoly.one())
        assert quot is not None, "Moebius quotient must stay exact"
        poly = quot
    return poly


def phi_at_one(n: int) -> int:
    """Value of the n-th cyclotomic at 1, by index arithmetic alone.

    0 for n = 1, p when n is a power of the prime p, and 1 otherwise.
    """
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    if n == 1:
        return 0
    pp = is_prime_power(n)
    if pp is not None:
        return pp[0]
    return 1


def expand_step(indices, p: int) -> frozenset[int]:
    """Indices of the factors after substituting x -> x**p.

    Substitution sends the cyclotomic of s to the cyclotomic of s*p when p
    divides s, and to the product of the cyclotomics of s and s*p otherwise.
    """
    out = set()
    for s in indices:
        if s % p == 0:
            out.add(s * p)
        else:
            out.add(s)
            out.add(s * p)
    return frozenset(out)


def expand_indices(d: int, b: int) -> frozenset[int]:
    """Indices E with: cyclotomic(d)(x**b) = product of cyclotomic(e), e in E.

    Applies the single-prime rule once per prime factor of b counted with
    multiplicity.  The result does not depend on the order of application,
    every member is a multiple of d, and when gcd(d, b) > 1 every member is
    at least 2*d (the growth fact that terminates all tree searches here).
    """
    if d < 1 or b < 2:
        raise ValueError("need index >= 1 and base >= 2")
    indices = frozenset((d,))
    for p, a in factorize(b):
        for _ in range(a):
            indices = expand_step(indices, p)
    return indices


def expand_times(indices, b: int, times: int) -> frozenset[int]:
    """Apply expand_indices to a whole set, times rounds."""
    out = frozenset(indices)
    for _ in range(times):
        nxt = set()
        for s in out:
            nxt.update(expand_indices(s, b))
        out = frozenset(nxt)
    return out


def cyc_divides(s: int, p: IntPoly) -> bool:
    """Does the s-th cyclotomic divide p?  p must be nonzero.

    Division-free: the s-th cyclotomic divides p exactly when x**s - 1
    divides p * prod over primes q | s of (x**(s/q) - 1).  The binomial
    product carries every proper divisor's cyclotomic at least once and
    the s-th not at all, so folding the product modulo x**s - 1 to zero
    constrains precisely p's own s-th factor.  Cost scales with the term
    count of p, not with s or the degree, which is what keeps spectrum
    scans over thousands of candidate indices fast on sparse masks.
    """
    if p.is_zero:
        raise ValueError("divisibility test against the zero polynomial")
    if euler_phi(s) > p.degree:
        return False
    offsets = [(0, 1)]
    for q, _ in factorize(s):
        step = s // q
        offsets = [(off + step, sign) for off, sign in offsets] + [
            (off, -sign) for off, sign in offsets
        ]
    acc: dict[int, int] = {}
    for e, c in p.terms():
        for off, sign in offsets:
            k = (e + off) % s
            acc[k] = acc.get(k, 0) + sign * c
    return not any(acc.values())


def cyclotomic_product(indices, cache: CyclotomicCache | None = None) -> IntPoly:
    """Product of the cyclotomics with the given indices."""
    poly = IntPoly.one()
    for n in sorted(indices):
        poly = poly * cyclotomic(n, cache)
    return poly


def divide_by_cyclotomics(p: IntPoly, indices, cache: CyclotomicCache | None = None):
    """Exact quotient of p by a product of distinct cyclotomics, or None.

    Divides factor by factor; distinct cyclotomics are coprime, so the
    product divides p exactly when each sequential division is exact.  Each
    divisor is sparse, which makes this much faster than dividing by the
    materialized product.
    """
    if len(set(indices)) != len(tuple(indices)):
        raise ValueError("cyclotomic indices must be distinct")
    quot = p
    for n in sorted(indices, reverse=True):
        quot = divide_exact(quot, cyclotomic(n, cache))
        if quot is None:
            return None
    return quot


@lru_cache(maxsize=64)
def phi_table(top: int) -> tuple[int, ...]:
    """Sieve of euler_phi values for 0..top."""
    phi = list(range(top + 1))
    for p in range(2, top + 1):
        if phi[p] == p:  # p prime
            for m in range(p, top + 1, p):
                phi[m] -= phi[m] // p
    return tuple(phi)


@lru_cache(maxsize=256)
def phi_monotone_bound(limit: int) -> int:
    """Largest s with euler_phi(s) <= limit.

    Maximizes s = prod p**a over prime factorizations whose totient fits
    the budget.  Flooring the budget at each factor keeps feasibility exact
    (floor(d / a) >= b iff a * b <= d), and only primes with p - 1 <= limit
    can appear, so the search touches a few thousand nodes at worst.
    """
    if limit < 1:
        return 1
    composite = bytearray(limit + 2)
    primes = []
    for p in range(2, limit + 2):
        if not composite[p]:
            primes.append(p)
            for m in range(p * p, limit + 2, p):
                composite[m] = 1
    best = 1

    def grow(i: int, value: int, budget: int) -> None:
        nonlocal best
        if value > best:
            best = value
        for j in range(i, len(primes)):
            p = primes[j]
            if p - 1 > budget:
                break
            v, b = value * p, budget // (p - 1)
            while True:
                grow(j + 1, v, b)
                if b < p:
                    break
                v, b = v * p, b // p

    grow(0, 1, limit)
    return best
