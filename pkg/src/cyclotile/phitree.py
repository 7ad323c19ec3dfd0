"""The cyclotomic divisibility tree and the tile decision procedure.

For a base b, the tree's roots are the divisors of b above 1; the children
of a node e are the indices of the cyclotomic factors of the e-th cyclotomic
with x replaced by x**b.  A *blocking* is a finite set of nodes that every
infinite root-to-leaf path meets exactly once.  A digit set with base-many
digits tiles exactly when some blocking consists entirely of indices whose
cyclotomics divide the digit mask; the product of those cyclotomics is the
*kernel*, the certificate everything here revolves around.

The search is a depth-first first-hit walk: take a node as soon as its
cyclotomic divides the mask, otherwise expand it, and give up on a branch
once the totient of its index exceeds the mask degree (totients only grow
along descendants, so nothing deeper can divide).  Index growth makes the
walk finite, and the first-hit rule makes the result canonical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .cyclo import (
    cyc_divides,
    cyclotomic_product,
    divide_by_cyclotomics,
    divisors,
    euler_phi,
    expand_indices,
    expand_times,
)
from .digitset import DigitSet
from .errors import CertificateError, InvalidBlocking, NotInTree
from .intpoly import IntPoly
from .spectra import SpectrumReport, spectrum_report

CERTIFICATE_SCHEMA = "cyclotile.certificate/1"


def root_indices(b: int) -> tuple[int, ...]:
    """Divisors of the base above 1, ascending: the tree's roots."""
    if b < 2:
        raise ValueError("base must be at least 2")
    return tuple(d for d in divisors(b) if d > 1)


def children(e: int, b: int) -> tuple[int, ...]:
    """Child indices of a tree node, ascending."""
    if math.gcd(e, b) == 1:
        raise NotInTree(f"{e} shares no factor with base {b}")
    return tuple(sorted(expand_indices(e, b)))


class _Divides:
    """Memoized cyclotomic divisibility against one fixed polynomial."""

    def __init__(self, p: IntPoly):
        self.p = p
        self.cache: dict[int, bool] = {}
        self.calls = 0

    def __call__(self, e: int) -> bool:
        hit = self.cache.get(e)
        if hit is None:
            self.calls += 1
            hit = self.cache[e] = cyc_divides(e, self.p)
        return hit


@dataclass
class SearchStats:
    nodes: int = 0
    divisions: int = 0
    max_depth: int = 0
    pruned: int = 0


@dataclass
class SearchTrace:
    """Explored edges and node outcomes, for rendering."""

    status: dict[int, str] = field(default_factory=dict)  # hit/expanded/pruned
    edges: list[tuple[int, int]] = field(default_factory=list)


def blocking_search(p: IntPoly, b: int):
    """First-hit blocking of the tree whose members all divide p.

    Returns (blocking indices or None, stats, trace).  None means some
    branch provably escapes: every node on it fails to divide and the
    totient bound rules out all deeper nodes.  Works for any nonzero p, not
    only base-cardinality masks; the absolute-continuity oracle relies on
    that.
    """
    if p.is_zero:
        raise ValueError("search against the zero polynomial")
    deg = p.degree
    divides = _Divides(p)
    stats = SearchStats()
    trace = SearchTrace()

    def walk(e: int, depth: int) -> frozenset | None:
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, depth)
        if divides(e):
            trace.status[e] = "hit"
            return frozenset((e,))
        if euler_phi(e) > deg:
            trace.status[e] = "pruned"
            stats.pruned += 1
            return None
        trace.status[e] = "expanded"
        hit: set[int] = set()
        for c in children(e, b):
            trace.edges.append((e, c))
            got = walk(c, depth + 1)
            if got is None:
                return None
            hit |= got
        return frozenset(hit)

    blocking: set[int] = set()
    for d in root_indices(b):
        got = walk(d, 0)
        if got is None:
            stats.divisions = divides.calls
            return None, stats, trace
        blocking |= got
    stats.divisions = divides.calls
    return frozenset(blocking), stats, trace


@dataclass(frozen=True)
class Blocking:
    """A finite antichain of tree nodes meeting every root path once."""

    base: int
    indices: tuple[int, ...]

    @classmethod
    def checked(cls, base: int, indices) -> "Blocking":
        ordered = tuple(sorted(set(indices)))
        ok, reason = _diagnose_blocking(base, ordered)
        if not ok:
            raise InvalidBlocking(reason)
        return cls(base, ordered)

    @property
    def kernel_degree(self) -> int:
        return sum(euler_phi(e) for e in self.indices)

    def kernel(self) -> IntPoly:
        """The kernel polynomial: product of the member cyclotomics."""
        return cyclotomic_product(self.indices)

    def divides(self, p: IntPoly) -> bool:
        return divide_by_cyclotomics(p, self.indices) is not None


def _descends(base: int, ancestor: int, target: int) -> bool:
    """Is target reachable from ancestor by repeated child expansion?"""
    frontier = {ancestor}
    while frontier:
        nxt = set()
        for e in frontier:
            for c in expand_indices(e, base):
                if c == target:
                    return True
                if c < target:
                    nxt.add(c)
        frontier = nxt
    return False


def _diagnose_blocking(base: int, indices: tuple[int, ...]):
    if base < 2:
        return False, "base must be at least 2"
    if not indices:
        return False, "blocking is empty"
    for e in indices:
        if e < 2 or math.gcd(e, base) == 1:
            return False, f"{e} is not a tree node for base {base}"
    members = set(indices)
    for m in indices:
        for m2 in indices:
            if m != m2 and m < m2 and _descends(base, m, m2):
                return False, f"{m2} lies below {m}; paths would be met twice"
    top = max(indices)
    hit: set[int] = set()
    memo: dict[int, bool] = {}

    def covered(e: int) -> bool:
        if e in memo:
            return memo[e]
        if e in members:
            hit.add(e)
            result = True
        elif e > top:
            result = False
        else:
            result = all(covered(c) for c in children(e, base))
        memo[e] = result
        return result

    for d in root_indices(base):
        if not covered(d):
            return False, f"a path from root {d} escapes the set"
    if hit != members:
        spare = sorted(members - hit)
        return False, f"members {spare} are unreachable or redundant"
    return True, None


def is_blocking(base: int, indices) -> bool:
    ok, _ = _diagnose_blocking(base, tuple(sorted(set(indices))))
    return ok


def kernel_polynomial(base: int, indices) -> IntPoly:
    """Kernel of a blocking, validating the blocking first."""
    return Blocking.checked(base, indices).kernel()


def refine_blocking(blocking: Blocking, d: int) -> Blocking:
    """Replace member d by its children; the result is again a blocking.

    Kernel bookkeeping: the new kernel is the old one times the expansion
    quotient, i.e. kernel * cyclotomic(d)(x**b) / cyclotomic(d).
    """
    if d not in blocking.indices:
        raise InvalidBlocking(f"{d} is not a member of the blocking")
    kept = [e for e in blocking.indices if e != d]
    return Blocking(blocking.base, tuple(sorted(kept + list(children(d, blocking.base)))))


def enumerate_blockings(base: int, max_degree: int) -> list[Blocking]:
    """All blockings with kernel degree at most max_degree.

    Breadth-first refinement from the root blocking; each refinement
    multiplies the replaced member's degree share by the base, so degrees
    grow strictly and the enumeration terminates.
    """
    start = Blocking(base, root_indices(base))
    out: list[Blocking] = []
    seen = {start.indices}
    queue = [start]
    while queue:
        current = queue.pop(0)
        if current.kernel_degree > max_degree:
            continue
        out.append(current)
        for d in current.indices:
            refined = refine_blocking(current, d)
            if refined.indices not in seen:
                seen.add(refined.indices)
                queue.append(refined)
    out.sort(key=lambda blk: (blk.kernel_degree, blk.indices))
    return out


def enumerate_dividing_blockings(base: int, digits, limit: int = 8) -> list[Blocking]:
    """Blockings whose kernels all divide the digit mask, smallest first.

    Starts from the first-hit blocking and refines members whose children
    all divide; members of a blocking are coprime cyclotomics, so member
    divisibility already gives kernel divisibility.
    """
    ds = _checked_digit_set(base, digits)
    p = ds.mask()
    divides = _Divides(p)
    first, _, _ = blocking_search(p, base)
    if first is None:
        return []
    start = Blocking(base, tuple(sorted(first)))
    out = [start]
    seen = {start.indices}
    queue = [start]
    while queue and len(out) < limit:
        current = queue.pop(0)
        for d in current.indices:
            cs = children(d, base)
            if all(divides(c) for c in cs):
                refined = refine_blocking(current, d)
                if refined.indices not in seen:
                    seen.add(refined.indices)
                    out.append(refined)
                    queue.append(refined)
                    if len(out) >= limit:
                        break
    return out


# -- product-form order ----------------------------------------------------


@dataclass(frozen=True)
class P1Report:
    holds: bool
    witnesses: dict[int, int]  # root divisor -> substitution exponent
    failing: int | None


def _full_divisibility_exponent(t: int, base: int, deg: int, divides) -> int | None:
    """Smallest j such that every factor index of the t-th cyclotomic in
    x**(base**j) divides, or None.  Degree of the substituted polynomial is
    euler_phi(t) * base**j, which bounds the search."""
    phi_t = euler_phi(t)
    j = 0
    current: frozenset[int] = frozenset((t,))
    while phi_t * base**j <= deg:
        if all(divides(e) for e in current):
            return j
        current = expand_times(current, base, 1)
        j += 1
    return None


def check_p1(base: int, digits) -> P1Report:
    """First-order condition: every root divisor has a substitution power
    whose full cyclotomic expansion divides the mask."""
    ds = _checked_digit_set(base, digits)
    p = ds.mask()
    divides = _Divides(p)
    witnesses: dict[int, int] = {}
    failing = None
    for d in root_indices(base):
        j = _full_divisibility_exponent(d, base, p.degree, divides)
        if j is None:
            failing = d
            break
        witnesses[d] = j
    return P1Report(holds=failing is None, witnesses=witnesses, failing=failing)


def pk_order(base: int, digits) -> int | None:
    """Smallest nesting depth of full-divisibility stages, or None.

    A root index has order 1 when some substitution power divides in full.
    Otherwise take the first power at which at least one expansion factor
    divides; the order is one more than the worst order among all factors
    at that power.  Indices strictly grow into territory where no factor
    can divide, so the recursion bottoms out.
    """
    ds = _checked_digit_set(base, digits)
    p = ds.mask()
    deg = p.degree
    divides = _Divides(p)
    memo: dict[int, int | None] = {}

    def order(t: int) -> int | None:
        if t in memo:
            return memo[t]
        if _full_divisibility_exponent(t, base, deg, divides) is not None:
            memo[t] = 1
            return 1
        current: frozenset[int] = frozenset((t,))
        while True:
            current = expand_times(current, base, 1)
            if any(divides(e) for e in current):
                break
            if min(euler_phi(e) for e in current) > deg:
                memo[t] = None
                return None
        worst = 0
        for e in sorted(current):
            sub = order(e)
            if sub is None:
                memo[t] = None
                return None
            worst = max(worst, sub)
        memo[t] = 1 + worst
        return memo[t]

    orders = []
    for d in root_indices(base):
        got = order(d)
        if got is None:
            return None
        orders.append(got)
    return max(orders)


# -- certificates ------------------------------------------------------------


@dataclass
class Certificate:
    """Outcome of the decision procedure, self-verifying via its kernel."""

    base: int
    digits: tuple[int, ...]
    verdict: str  # "tile" or "not-tile"
    blocking: tuple[int, ...] | None
    order: int | None
    report: SpectrumReport
    stats: SearchStats | None = None
    trace: SearchTrace | None = None
    protasov_blocking: tuple[str, ...] | None = None

    @property
    def is_tile(self) -> bool:
        return self.verdict == "tile"

    @property
    def kernel_indices(self) -> tuple[int, ...] | None:
        return self.blocking

    def kernel(self) -> IntPoly | None:
        if self.blocking is None:
            return None
        return cyclotomic_product(self.blocking)


def _checked_digit_set(base: int, digits) -> DigitSet:
    ds = DigitSet.of(base, digits)
    ds.require_cardinality()
    ds.require_normalized()
    return ds


def decide_tile_digit_set(base: int, digits, spectrum_cap: int | None = None) -> Certificate:
    """Decide whether the digits tile for the base, with a full certificate.

    The digit set must have base-many distinct non-negative members
    including 0 and digit gcd 1; anything else raises instead of guessing a
    normalization.
    """
    ds = _checked_digit_set(base, digits)
    p = ds.mask()
    blocking, stats, trace = blocking_search(p, base)
    report = spectrum_report(base, ds.digits, cap=spectrum_cap)
    order = None
    if blocking is not None:
        order = pk_order(base, ds.digits)
    return Certificate(
        base=base,
        digits=ds.digits,
        verdict="tile" if blocking is not None else "not-tile",
        blocking=tuple(sorted(blocking)) if blocking is not None else None,
        order=order,
        report=report,
        stats=stats,
        trace=trace,
    )


def certificate_to_json(cert: Certificate, indent: int | None = None) -> str:
    """Serialize with a fixed field order and version tag."""
    structure = cert.report.structure
    payload: dict = {
        "schema": CERTIFICATE_SCHEMA,
        "base": cert.base,
        "digits": list(cert.digits),
        "verdict": cert.verdict,
        "blocking": list(cert.blocking) if cert.blocking is not None else None,
        "kernel": list(cert.blocking) if cert.blocking is not None else None,
        "pk_order": cert.order,
        "prime_power_spectrum": list(cert.report.prime_powers),
        "t1": cert.report.t1,
        "t2": cert.report.t2,
        "thm42": (
            {str(p): list(v) for p, v in sorted(structure.exponents.items())}
            if structure is not None
            else None
        ),
        "thm42_pass": structure.passed if structure is not None else None,
        "thm42_violation": structure.violation if structure is not None else None,
        "general_spectrum": {
            "indices": list(cert.report.general.indices),
            "cap": cert.report.general.cap,
            "threshold": cert.report.general.threshold,
            "complete": cert.report.general.complete,
        },
    }
    if cert.stats is not None:
        payload["search"] = {
            "nodes": cert.stats.nodes,
            "divisions": cert.stats.divisions,
            "max_depth": cert.stats.max_depth,
            "pruned": cert.stats.pruned,
        }
    if cert.protasov_blocking is not None:
        payload["protasov_blocking"] = list(cert.protasov_blocking)
    return json.dumps(payload, indent=indent)


def certificate_from_json(text: str, verify: bool = True) -> Certificate:
    """Parse a serialized certificate, re-verifying it rather than trusting it.

    Verification rebuilds the kernel from the blocking indices and divides
    the mask by it exactly; a tile certificate that fails either step raises
    CertificateError.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("schema") != CERTIFICATE_SCHEMA:
        raise CertificateError("missing or unsupported certificate schema")
    try:
        base = payload["base"]
        digits = tuple(payload["digits"])
        verdict = payload["verdict"]
        blocking = payload["blocking"]
    except KeyError as exc:
        raise CertificateError(f"missing field {exc}") from exc
    if verdict not in ("tile", "not-tile"):
        raise CertificateError(f"unknown verdict {verdict!r}")
    if verify:
        ds = DigitSet.of(base, digits)
        if verdict == "tile":
            if blocking is None:
                raise CertificateError("tile verdict without a blocking")
            try:
                blk = Blocking.checked(base, blocking)
            except InvalidBlocking as exc:
                raise CertificateError(f"invalid blocking: {exc}") from exc
            if not blk.divides(ds.mask()):
                raise CertificateError("kernel does not divide the digit mask")
    report = spectrum_report(base, digits)
    return Certificate(
        base=base,
        digits=tuple(digits),
        verdict=verdict,
        blocking=tuple(blocking) if blocking is not None else None,
        order=payload.get("pk_order"),
        report=report,
        protasov_blocking=(
            tuple(payload["protasov_blocking"])
            if payload.get("protasov_blocking") is not None
            else None
        ),
    )


def search_dot(cert: Certificate) -> str:
    """Graphviz rendering of the explored tree; blocking members doubled."""
    if cert.trace is None:
        raise ValueError("certificate carries no search trace")
    lines = [
        "digraph blocking_search {",
        "  rankdir=TB;",
        '  node [shape=circle, fontname="Helvetica"];',
    ]
    shapes = {"hit": "doublecircle", "pruned": "octagon"}
    for e in sorted(cert.trace.status):
        status = cert.trace.status[e]
        attrs = [f"shape={shapes[status]}"] if status in shapes else []
        if status == "hit":
            attrs.append("style=filled")
            attrs.append('fillcolor="palegreen"')
        if status == "pruned":
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{e}"{suffix};')
    for parent, child in cert.trace.edges:
        lines.append(f'  "{parent}" -> "{child}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
