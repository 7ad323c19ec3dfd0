"""Cyclotomic spectra of digit masks and the classical sanity conditions.

The prime-power spectrum of a mask P collects the prime powers q > 1 whose
cyclotomic divides P; the general spectrum collects all indices up to a cap.
Both searches are finite because the totient of a candidate index is at
least sqrt(index / 2), so large indices cannot divide a fixed-degree mask.

On top of the spectra sit three checks used throughout the package:

* coefficient-sum balance: the digit count equals the product of the
  cyclotomic values at 1 over the prime-power spectrum;
* product closure: for prime powers in the spectrum with pairwise distinct
  primes, the product index is in the spectrum too (read with the
  distinct-prime convention; powers of a single prime never qualify);
* base structure: for base-many digits, the spectrum's prime powers follow
  the base's factorization with exponents forming complete residue systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .cyclo import (
    cyc_divides,
    euler_phi,
    factorize,
    is_prime_power,
    phi_at_one,
    phi_monotone_bound,
    phi_table,
)
from .digitset import DigitSet
from .intpoly import IntPoly, mask_polynomial

# Exact completeness thresholds get expensive past this sieve size; beyond
# it we fall back to the always-correct 2 * degree**2 bound.
_EXACT_THRESHOLD_SIEVE_LIMIT = 2_000_000


def prime_power_candidates(limit: int):
    """All prime powers q with 1 < q <= limit, ascending."""
    if limit < 2:
        return
    sieve = bytearray([1]) * (limit + 1)
    out = []
    for p in range(2, limit + 1):
        if sieve[p]:
            for m in range(p * p, limit + 1, p):
                sieve[m] = 0
            q = p
            while q <= limit:
                out.append(q)
                q *= p
    yield from sorted(out)


def prime_power_spectrum(p: IntPoly) -> tuple[int, ...]:
    """Prime powers q > 1 whose cyclotomic divides p, ascending.

    Complete: euler_phi(q) >= q/2 for prime powers, so q <= 2 * degree(p)
    bounds every possible divisor index.
    """
    if p.is_zero:
        raise ValueError("spectrum of the zero polynomial")
    if p.degree == 0:
        return ()
    return tuple(q for q in prime_power_candidates(2 * p.degree) if cyc_divides(q, p))


@dataclass(frozen=True)
class GeneralSpectrum:
    indices: tuple[int, ...]
    cap: int
    threshold: int
    complete: bool


def completeness_threshold(degree: int) -> int:
    """Smallest T such that no index above T can divide a degree-`degree` mask."""
    return phi_monotone_bound(degree)


def general_spectrum(p: IntPoly, cap: int) -> GeneralSpectrum:
    """All indices 2..cap whose cyclotomic divides p, with completeness flag.

    The result is certified complete when cap reaches the threshold beyond
    which every index has totient above degree(p).
    """
    if p.is_zero:
        raise ValueError("spectrum of the zero polynomial")
    deg = p.degree
    threshold = completeness_threshold(deg) if deg > 0 else 1
    top = min(cap, threshold)
    found = []
    if top <= _EXACT_THRESHOLD_SIEVE_LIMIT:
        phi = phi_table(max(top, 1))
        candidates = (s for s in range(2, top + 1) if phi[s] <= deg)
    else:
        candidates = (s for s in range(2, top + 1))
    for s in candidates:
        if cyc_divides(s, p):
            found.append(s)
    return GeneralSpectrum(
        indices=tuple(found),
        cap=cap,
        threshold=threshold,
        complete=cap >= threshold,
    )


def check_t1(digits) -> bool:
    """Digit count equals the product over the prime-power spectrum of the
    cyclotomic values at 1."""
    p = mask_polynomial(digits)
    if p.is_zero:
        raise ValueError("empty digit set")
    prod = 1
    for q in prime_power_spectrum(p):
        prod *= phi_at_one(q)
    return prod == p.at_one()


def check_t2(digits) -> bool:
    """Product closure over prime powers with pairwise distinct primes.

    Vacuously true when the spectrum touches fewer than two primes.
    """
    p = mask_polynomial(digits)
    if p.is_zero:
        raise ValueError("empty digit set")
    by_prime: dict[int, list[int]] = {}
    for q in prime_power_spectrum(p):
        base = is_prime_power(q)[0]
        by_prime.setdefault(base, []).append(q)
    primes = sorted(by_prime)
    for r in range(2, len(primes) + 1):
        for chosen in combinations(primes, r):
            stack = [(0, 1)]
            while stack:
                i, prod = stack.pop()
                if i == len(chosen):
                    if not cyc_divides(prod, p):
                        return False
                    continue
                for q in by_prime[chosen[i]]:
                    stack.append((i + 1, prod * q))
    return True


@dataclass(frozen=True)
class StructureReport:
    """Prime-power spectrum shape against the base's factorization."""

    passed: bool
    exponents: dict[int, tuple[int, ...]]  # prime -> exponents in the spectrum
    violation: str | None


def spectrum_structure(base: int, digits) -> StructureReport:
    """For base-many digits: does the prime-power spectrum mirror the base?

    Requires every spectrum prime to divide the base, exactly alpha entries
    for a prime with multiplicity alpha in the base, and entry exponents
    covering all residues modulo alpha.  Returns the first violated clause.
    """
    ds = DigitSet.of(base, digits)
    ds.require_cardinality()
    spectrum = prime_power_spectrum(ds.mask())
    base_factors = dict(factorize(base))
    exps: dict[int, list[int]] = {p: [] for p in base_factors}
    violation = None
    for q in spectrum:
        p, a = is_prime_power(q)
        if p not in base_factors:
            violation = violation or f"spectrum prime {p} does not divide base {base}"
            continue
        exps[p].append(a)
    if violation is None:
        for p, alpha in base_factors.items():
            if len(exps[p]) != alpha:
                violation = (
                    f"prime {p}: expected {alpha} spectrum entries, got {len(exps[p])}"
                )
                break
            if sorted(a % alpha for a in exps[p]) != list(range(alpha)):
                violation = (
                    f"prime {p}: exponents {sorted(exps[p])} do not cover all "
                    f"residues modulo {alpha}"
                )
                break
    return StructureReport(
        passed=violation is None,
        exponents={p: tuple(sorted(v)) for p, v in exps.items()},
        violation=violation,
    )


@dataclass(frozen=True)
class SpectrumReport:
    """Everything the certificate records about a mask's spectra."""

    prime_powers: tuple[int, ...]
    general: GeneralSpectrum
    t1: bool
    t2: bool
    structure: StructureReport | None  # None when digit count differs from base


def spectrum_report(base: int, digits, cap: int | None = None) -> SpectrumReport:
    """Assemble the full spectra section of a certificate.

    The default cap covers the whole certified range for small masks but is
    clamped for large ones, where exhausting the range would cost minutes;
    the report's complete flag records which situation applies.
    """
    ds = DigitSet.of(base, digits)
    p = ds.mask()
    if cap is None:
        deg = p.degree or 1
        cap = min(completeness_threshold(deg), max(100, 4 * deg))
    structure = None
    if len(ds) == base:
        structure = spectrum_structure(base, digits)
    return SpectrumReport(
        prime_powers=prime_power_spectrum(p),
        general=general_spectrum(p, cap),
        t1=check_t1(digits),
        t2=check_t2(digits),
        structure=structure,
    )
