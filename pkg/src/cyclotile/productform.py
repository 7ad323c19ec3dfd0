"""Stage-by-stage constructions of tile digit sets.

A decomposition splits the base residues into a direct sum of parts; scaling
every part past the first by a base power gives a digit set whose mask
factors stage by stage.  Each stage contributes the base divisors whose
cyclotomics divide the part mask; accumulating their expansions yields a
kernel and a modulus per stage, and digits may then be moved by multiples of
the stage modulus without losing the kernel.  Regrouping a finished digit
set into new parts and scaling again raises the construction order by one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .cyclo import cyc_divides, divide_by_cyclotomics, divisors, expand_times
from .digitset import DigitSet
from .errors import (
    DirectSumCollision,
    InvalidBlocking,
    InvalidDecomposition,
    InvalidKernel,
    InvalidRegrouping,
    InvalidRepresentative,
    RecipeError,
)
from .intpoly import IntPoly, mask_polynomial
from .phitree import Blocking

RECIPE_SCHEMA = "cyclotile.recipe/1"

RECIPE_KINDS = (
    "product-form",
    "modulo-product-form",
    "weak-product-form",
    "higher-order-product-form",
)


def _checked_part(part) -> tuple[int, ...]:
    values = tuple(sorted(part))
    if len(values) < 2:
        raise InvalidDecomposition("parts need at least two digits")
    if len(set(values)) != len(values):
        raise InvalidDecomposition(f"part {values} repeats a digit")
    if any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in values):
        raise InvalidDecomposition(f"part {values} has a bad digit")
    if values[0] != 0:
        raise InvalidDecomposition(f"part {values} does not contain 0")
    return values


@dataclass(frozen=True)
class Decomposition:
    """Parts plus the scale exponents applied to every part after the first."""

    base: int
    parts: tuple[tuple[int, ...], ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise InvalidDecomposition("base must be at least 2")
        parts = tuple(_checked_part(part) for part in self.parts)
        object.__setattr__(self, "parts", parts)
        exponents = tuple(self.exponents)
        object.__setattr__(self, "exponents", exponents)
        if not parts:
            raise InvalidDecomposition("no parts")
        if len(exponents) != len(parts) - 1:
            raise InvalidDecomposition(
                f"{len(parts)} parts need {len(parts) - 1} exponents, got {len(exponents)}"
            )
        if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exponents):
            raise InvalidDecomposition("exponents must be non-negative integers")
        if any(a > b for a, b in zip(exponents, exponents[1:])):
            raise InvalidDecomposition("exponents must not decrease")

    @property
    def stage_exponents(self) -> tuple[int, ...]:
        """Exponents aligned with parts; the first stage is unscaled."""
        return (0,) + self.exponents

    def scales(self) -> tuple[int, ...]:
        return tuple(self.base**e for e in self.stage_exponents)

    def mask(self) -> IntPoly:
        """Mask of the scaled direct sum, built factor by factor."""
        out = IntPoly.one()
        for part, scale in zip(self.parts, self.scales()):
            out = out * mask_polynomial(part).compose_power(scale)
        return out


def validate_decomposition(dec: Decomposition) -> bool:
    """Do the unscaled parts sum directly onto the base residues?"""
    folded = IntPoly.one()
    for part in dec.parts:
        folded = (folded * mask_polynomial(part)).fold_mod(dec.base)
    return folded == IntPoly((1,) * dec.base)


@dataclass(frozen=True)
class StageTrace:
    """Per-stage divisor spectra, cumulative kernels, and moduli."""

    base: int
    stage_spectra: tuple[tuple[int, ...], ...]
    kernels: tuple[tuple[int, ...], ...]
    moduli: tuple[int, ...]

    @property
    def kernel_indices(self) -> tuple[int, ...]:
        return self.kernels[-1]


def stage_kernels(dec: Decomposition) -> StageTrace:
    """Trace the kernel growth across stages.

    Stage i contributes the base divisors dividing its part mask, expanded
    through the stage scale; the modulus is the least common multiple of
    everything seen so far.  Moduli are pinched between consecutive powers
    of the base times the stage scale.
    """
    if not validate_decomposition(dec):
        raise InvalidDecomposition("parts do not sum onto the base residues")
    b = dec.base
    spectra: list[tuple[int, ...]] = []
    kernels: list[tuple[int, ...]] = []
    moduli: list[int] = []
    running: set[int] = set()
    for part, l in zip(dec.parts, dec.stage_exponents):
        mask = mask_polynomial(part)
        spectrum = tuple(d for d in divisors(b) if d > 1 and cyc_divides(d, mask))
        assert spectrum, f"part {part} divides no base divisor despite validation"
        spectra.append(spectrum)
        running |= expand_times(spectrum, b, l)
        n = math.lcm(*running)
        assert n % b**l == 0 and b ** (l + 1) % n == 0
        kernels.append(tuple(sorted(running)))
        moduli.append(n)
    return StageTrace(
        base=b,
        stage_spectra=tuple(spectra),
        kernels=tuple(kernels),
        moduli=tuple(moduli),
    )


@dataclass(frozen=True)
class Construction:
    """A built digit set plus how it was put together."""

    kind: str
    digit_set: DigitSet
    order: int
    trace: StageTrace | None = None
    stage_digits: tuple[tuple[int, ...], ...] | None = None
    inner: "Construction | None" = None

    @property
    def base(self) -> int:
        return self.digit_set.base

    @property
    def digits(self) -> tuple[int, ...]:
        return self.digit_set.digits


def _direct_sum(digits, scaled_part, context: str) -> list[int]:
    out = [d + e for d in digits for e in scaled_part]
    if len(set(out)) != len(out):
        raise DirectSumCollision(f"{context}: sums collide")
    return sorted(out)


def _apply_representatives(values, reps, modulus: int, stage: int) -> list[int]:
    if not reps:
        return list(values)
    known = set(values)
    for old in reps:
        if old not in known:
            raise InvalidRepresentative(f"stage {stage} has no digit {old}")
    out = []
    for v in values:
        w = reps.get(v, v)
        if not isinstance(w, int) or isinstance(w, bool) or w < 0:
            raise InvalidRepresentative(f"{w!r} is not a usable digit")
        if (w - v) % modulus != 0:
            raise InvalidRepresentative(
                f"{w} is not congruent to {v} modulo {modulus}"
            )
        out.append(w)
    if len(set(out)) != len(out):
        raise DirectSumCollision(f"stage {stage}: representatives collide")
    return sorted(out)


def build_product_form(dec: Decomposition) -> Construction:
    """Scaled direct sum of the parts, with its kernel trace."""
    trace = stage_kernels(dec)
    digits = list(dec.parts[0])
    stage_digits = [tuple(digits)]
    for part, scale in zip(dec.parts[1:], dec.scales()[1:]):
        digits = _direct_sum(digits, [scale * e for e in part], "product form")
        stage_digits.append(tuple(digits))
    ds = DigitSet.of(dec.base, digits)
    ds.require_cardinality()
    return Construction(
        kind="product-form",
        digit_set=ds,
        order=1,
        trace=trace,
        stage_digits=tuple(stage_digits),
    )


def build_modulo_product_form(dec: Decomposition, representatives) -> Construction:
    """Product form whose stage digits may move by stage-modulus multiples.

    representatives is one mapping per stage (old digit to replacement);
    missing or empty mappings leave the stage alone.  The final mask keeps
    the full kernel, which is asserted rather than trusted.
    """
    reps = list(representatives)
    if len(reps) > len(dec.parts):
        raise InvalidRepresentative(
            f"{len(reps)} representative maps for {len(dec.parts)} stages"
        )
    while len(reps) < len(dec.parts):
        reps.append({})
    trace = stage_kernels(dec)
    digits = _apply_representatives(dec.parts[0], reps[0], trace.moduli[0], 0)
    stage_digits = [tuple(digits)]
    stages = zip(dec.parts[1:], dec.scales()[1:], reps[1:], trace.moduli[1:])
    for stage, (part, scale, stage_reps, modulus) in enumerate(stages, start=1):
        digits = _direct_sum(digits, [scale * e for e in part], f"stage {stage}")
        digits = _apply_representatives(digits, stage_reps, modulus, stage)
        stage_digits.append(tuple(digits))
    ds = DigitSet.of(dec.base, digits)
    ds.require_cardinality()
    assert divide_by_cyclotomics(ds.mask(), trace.kernel_indices) is not None, (
        "stage kernel lost by the modulo moves"
    )
    return Construction(
        kind="modulo-product-form",
        digit_set=ds,
        order=1,
        trace=trace,
        stage_digits=tuple(stage_digits),
    )


def build_weak_product_form(dec: Decomposition, representatives) -> Construction:
    """Product form with one modulo pass at the end.

    The single modulus is the base to the last exponent plus one, which the
    last stage modulus divides, so the kernel survives here too.
    """
    plain = build_product_form(dec)
    modulus = dec.base ** (dec.stage_exponents[-1] + 1)
    digits = _apply_representatives(
        plain.digit_set.digits, dict(representatives), modulus, len(dec.parts) - 1
    )
    ds = DigitSet.of(dec.base, digits)
    ds.require_cardinality()
    assert divide_by_cyclotomics(ds.mask(), plain.trace.kernel_indices) is not None, (
        "stage kernel lost by the final modulo"
    )
    return Construction(
        kind="weak-product-form",
        digit_set=ds,
        order=1,
        trace=plain.trace,
        stage_digits=plain.stage_digits + (ds.digits,),
    )


def build_higher_order(inner: Construction, parts, exponents) -> Construction:
    """Regroup a built digit set and scale the groups.

    The unscaled groups must sum directly onto the inner digits; the scaled
    sum is the new digit set, one order above the inner construction.
    """
    groups = tuple(_checked_part(part) for part in parts)
    exps = tuple(exponents)
    if len(exps) != len(groups) - 1:
        raise InvalidRegrouping(
            f"{len(groups)} groups need {len(groups) - 1} exponents, got {len(exps)}"
        )
    if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exps):
        raise InvalidRegrouping("exponents must be non-negative integers")
    if any(a > b for a, b in zip(exps, exps[1:])):
        raise InvalidRegrouping("exponents must not decrease")
    plain = list(groups[0])
    for part in groups[1:]:
        try:
            plain = _direct_sum(plain, part, "regrouping")
        except DirectSumCollision as exc:
            raise InvalidRegrouping(str(exc)) from exc
    if tuple(plain) != inner.digit_set.digits:
        raise InvalidRegrouping("groups do not sum onto the inner digit set")
    base = inner.base
    digits = list(groups[0])
    for part, e in zip(groups[1:], exps):
        digits = _direct_sum(digits, [base**e * v for v in part], "higher order")
    ds = DigitSet.of(base, digits)
    ds.require_cardinality()
    return Construction(
        kind="higher-order-product-form",
        digit_set=ds,
        order=inner.order + 1,
        trace=inner.trace,
        stage_digits=None,
        inner=inner,
    )


def lift_kernel(base: int, indices, cofactor: IntPoly) -> DigitSet | None:
    """Try to complete a kernel into a digit set via an integer cofactor.

    The kernel takes the value base at 1, so a unit cofactor keeps the
    cardinality; the product is a mask exactly when its coefficients are
    all zero or one.
    """
    try:
        kernel = Blocking.checked(base, indices)
    except InvalidBlocking as exc:
        raise InvalidKernel(str(exc)) from exc
    if cofactor.at_one() != 1:
        raise InvalidKernel(f"cofactor takes value {cofactor.at_one()} at 1, not 1")
    product = kernel.kernel() * cofactor
    if any(c not in (0, 1) for _, c in product.terms()):
        return None
    digits = tuple(e for e, _ in product.terms())
    assert len(digits) == base
    return DigitSet.of(base, digits)


# -- recipes -----------------------------------------------------------------


def _recipe_parts(payload: dict) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    try:
        parts = tuple(tuple(part) for part in payload["parts"])
        exponents = tuple(payload["exponents"])
    except (KeyError, TypeError) as exc:
        raise RecipeError(f"bad parts or exponents: {exc}") from exc
    return parts, exponents


def _recipe_representatives(raw) -> list[dict[int, int]]:
    if raw is None:
        return []
    if isinstance(raw, dict):
        raw = [raw]
    out = []
    try:
        for stage in raw:
            out.append({int(k): int(v) for k, v in stage.items()})
    except (AttributeError, TypeError, ValueError) as exc:
        raise RecipeError(f"bad representatives: {exc}") from exc
    return out


def build_recipe(payload: dict) -> Construction:
    """Build the construction a parsed recipe describes."""
    if not isinstance(payload, dict):
        raise RecipeError("recipe must be an object")
    kind = payload.get("kind")
    if kind not in RECIPE_KINDS:
        raise RecipeError(f"unknown recipe kind {kind!r}")
    base = payload.get("base")
    if not isinstance(base, int) or isinstance(base, bool) or base < 2:
        raise RecipeError(f"bad base {base!r}")
    if kind == "higher-order-product-form":
        inner_payload = payload.get("inner")
        if not isinstance(inner_payload, dict):
            raise RecipeError("higher-order recipe needs an inner recipe")
        inner = build_recipe({**inner_payload, "base": inner_payload.get("base", base)})
        if inner.base != base:
            raise RecipeError("inner recipe uses a different base")
        parts, exponents = _recipe_parts(payload)
        return build_higher_order(inner, parts, exponents)
    parts, exponents = _recipe_parts(payload)
    dec = Decomposition(base, parts, exponents)
    if kind == "product-form":
        return build_product_form(dec)
    reps = _recipe_representatives(payload.get("representatives"))
    if kind == "modulo-product-form":
        return build_modulo_product_form(dec, reps)
    if len(reps) > 1:
        raise RecipeError("weak form takes a single representative map")
    return build_weak_product_form(dec, reps[0] if reps else {})


def load_recipe(source: str | Path) -> Construction:
    """Parse a recipe from a JSON string or file path and build it."""
    text = source.read_text() if isinstance(source, Path) else source
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecipeError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("schema") != RECIPE_SCHEMA:
        raise RecipeError("missing or unsupported recipe schema")
    return build_recipe(payload)
