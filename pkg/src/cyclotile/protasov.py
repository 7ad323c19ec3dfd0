"""Integer residue tree: the second, independent route to the tile decision.

Vertices at level k are residues m with 1 <= m < b**k whose last base-b
digit is nonzero; the children of m are l*b**k + m for each digit l.  Each
vertex carries a cyclotomic index b**k / gcd(m, b**k), and a digit set tiles
exactly when the vertices whose index divides the mask block every infinite
path.  Nothing here consults the divisor tree in phitree; agreement of the
two searches is checked in the tests, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cyclo import cyc_divides, euler_phi
from .digitset import DigitSet
from .errors import NotInTree

__all__ = [
    "Vertex",
    "tau_index",
    "vertex_label",
    "parse_label",
    "level_vertices",
    "vertex_children",
    "fiber",
    "default_level_bound",
    "ProtasovStats",
    "ProtasovResult",
    "protasov_decide",
    "KenyonReport",
    "kenyon_check",
]


@dataclass(frozen=True, order=True)
class Vertex:
    """A residue m at tree level k, ordered by (level, value)."""

    level: int
    value: int


def tau_index(value: int, level: int, base: int) -> int:
    """Cyclotomic index carried by the residue: base**level / gcd."""
    if level < 1 or value < 1:
        raise ValueError("need a positive residue at level >= 1")
    power = base**level
    return power // math.gcd(value, power)


def _check_vertex(v: Vertex, base: int) -> None:
    if v.level < 1 or not 1 <= v.value < base**v.level:
        raise NotInTree(f"{v.value} is out of range for level {v.level}")
    if v.value % base == 0:
        raise NotInTree(f"{v.value} ends in a zero digit for base {base}")


def vertex_label(v: Vertex, base: int) -> str:
    """Digit string, most significant first; dots separate digits past base 10."""
    _check_vertex(v, base)
    out = []
    value = v.value
    for _ in range(v.level):
        out.append(value % base)
        value //= base
    text = [str(d) for d in reversed(out)]
    return ".".join(text) if base > 10 else "".join(text)


def parse_label(text: str, base: int) -> Vertex:
    # Past base 10 every label is dot-separated, even a single digit;
    # otherwise "11" for base 12 would read as two digits.
    parts = text.split(".") if base > 10 else list(text)
    if not parts:
        raise NotInTree("empty vertex label")
    value = 0
    for part in parts:
        d = int(part)
        if not 0 <= d < base:
            raise NotInTree(f"digit {part} is out of range for base {base}")
        value = value * base + d
    v = Vertex(level=len(parts), value=value)
    _check_vertex(v, base)
    return v


def level_vertices(base: int, level: int) -> tuple[Vertex, ...]:
    """All vertices at a level, ascending by value."""
    return tuple(
        Vertex(level, m) for m in range(1, base**level) if m % base != 0
    )


def vertex_children(v: Vertex, base: int) -> tuple[Vertex, ...]:
    _check_vertex(v, base)
    step = base**v.level
    return tuple(Vertex(v.level + 1, l * step + v.value) for l in range(base))


def fiber(base: int, level: int, index: int) -> tuple[Vertex, ...]:
    """All level vertices carrying the given index.

    These are r * (base**level / index) for r coprime to the index; when the
    index belongs to some vertex at the level, every member is a vertex, and
    the fiber has totient-many elements.
    """
    power = base**level
    if index < 1 or power % index != 0:
        raise ValueError(f"{index} does not divide base**{level}")
    unit = power // index
    out = []
    for r in range(1, index):
        if math.gcd(r, index) == 1:
            v = Vertex(level, r * unit)
            _check_vertex(v, base)
            out.append(v)
    return tuple(out)


def default_level_bound(degree: int) -> int:
    """Depth past which no vertex index can divide a mask of this degree.

    A vertex at level k keeps a prime shortfall from its last digit, so its
    index is at least 2**k and the totient at least 2**(k-1).
    """
    return max(2, degree.bit_length() + 1)


@dataclass
class ProtasovStats:
    vertices: int = 0
    divisions: int = 0
    max_level: int = 0


@dataclass
class ProtasovResult:
    status: str  # "blocking" | "absent" | "inconclusive"
    base: int
    blocking: tuple[Vertex, ...] | None
    stats: ProtasovStats = field(default_factory=ProtasovStats)

    @property
    def is_tile(self) -> bool:
        return self.status == "blocking"

    def labels(self) -> tuple[str, ...] | None:
        if self.blocking is None:
            return None
        return tuple(vertex_label(v, self.base) for v in self.blocking)


_OK, _ABSENT, _DEEP = 0, 1, 2


def protasov_decide(base: int, digits, max_level: int | None = None) -> ProtasovResult:
    """Search the residue tree for a blocking of dividing vertices.

    Fail-fast: one vertex that neither divides nor can be outgrown by any
    descendant settles absence.  With the default level bound the outcome is
    always definite; a smaller explicit bound may return inconclusive.
    """
    ds = DigitSet.of(base, digits)
    ds.require_cardinality()
    p = ds.mask()
    deg = p.degree
    bound = default_level_bound(deg) if max_level is None else max_level
    stats = ProtasovStats()
    memo: dict[int, bool] = {}

    def divides(t: int) -> bool:
        hit = memo.get(t)
        if hit is None:
            stats.divisions += 1
            hit = memo[t] = cyc_divides(t, p)
        return hit

    blocked: list[Vertex] = []

    def walk(value: int, level: int) -> int:
        stats.vertices += 1
        stats.max_level = max(stats.max_level, level)
        t = tau_index(value, level, base)
        if divides(t):
            blocked.append(Vertex(level, value))
            return _OK
        if euler_phi(t) > deg:
            return _ABSENT
        if level >= bound:
            return _DEEP
        step = base**level
        saw_deep = False
        for l in range(base):
            got = walk(l * step + value, level + 1)
            if got == _ABSENT:
                return _ABSENT
            saw_deep = saw_deep or got == _DEEP
        return _DEEP if saw_deep else _OK

    outcome = _OK
    for m in range(1, base):
        got = walk(m, 1)
        if got == _ABSENT:
            return ProtasovResult("absent", base, None, stats)
        outcome = max(outcome, got)
    if outcome == _DEEP:
        return ProtasovResult("inconclusive", base, None, stats)

    # Close under fibers: vertices sharing an index stand or fall together,
    # so the certificate lists whole fibers, never representatives.
    closure = set(blocked)
    for v in blocked:
        closure.update(fiber(base, v.level, tau_index(v.value, v.level, base)))
    return ProtasovResult("blocking", base, tuple(sorted(closure)), stats)


@dataclass(frozen=True)
class KenyonReport:
    holds: bool
    witnesses: dict[int, int]  # integer -> first level whose index divides
    failing: int | None
    limit: int


def kenyon_check(base: int, digits, m_limit: int = 200) -> KenyonReport:
    """Root-of-unity vanishing along base-power denominators, per integer.

    For each m up to the limit the indices base**k / gcd(m, base**k) form a
    divisor chain, so the first level whose totient outruns the mask degree
    without a division settles failure for that m.
    """
    ds = DigitSet.of(base, digits)
    ds.require_cardinality()
    p = ds.mask()
    deg = p.degree
    memo: dict[int, bool] = {}

    def divides(t: int) -> bool:
        hit = memo.get(t)
        if hit is None:
            hit = memo[t] = cyc_divides(t, p)
        return hit

    witnesses: dict[int, int] = {}
    for m in range(1, m_limit + 1):
        k = 1
        while True:
            power = base**k
            t = power // math.gcd(m, power)
            if divides(t):
                witnesses[m] = k
                break
            if euler_phi(t) > deg:
                return KenyonReport(False, witnesses, m, m_limit)
            k += 1
    return KenyonReport(True, witnesses, None, m_limit)
