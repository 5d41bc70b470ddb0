"""Degrees with a cyclic modulus, permutations, and graded permutation signs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GradingError, ShapeError


@dataclass(frozen=True)
class Degree:
    """An integer grading lift together with an even cyclic modulus.

    ``modulus == 0`` means the grading is over the full integers.  Two
    degrees are equal when their lifts agree modulo the (shared) modulus.
    """

    lift: int
    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0:
            raise GradingError("modulus must be non-negative")

    @property
    def parity(self) -> int:
        if self.modulus % 2 != 0:
            raise GradingError(
                "parity undefined for odd modulus %d" % self.modulus
            )
        return self.lift % 2

    def normalized(self) -> int:
        return self.lift % self.modulus if self.modulus else self.lift

    def shifted(self, k: int) -> "Degree":
        return Degree(self.lift + k, self.modulus)

    def negated(self) -> "Degree":
        return Degree(-self.lift, self.modulus)

    def __eq__(self, other):
        if not isinstance(other, Degree):
            return NotImplemented
        return self.modulus == other.modulus and self.normalized() == other.normalized()

    def __hash__(self):
        return hash((self.modulus, self.normalized()))


def _parity(deg) -> int:
    if isinstance(deg, Degree):
        return deg.parity
    return int(deg) % 2


def check_permutation(rho) -> tuple:
    rho = tuple(rho)
    if sorted(rho) != list(range(1, len(rho) + 1)):
        raise ShapeError("not a permutation of 1..%d: %r" % (len(rho), rho))
    return rho


def reorder(rho, items):
    """Apply ``rho`` to a tuple: result[i] = items[rho[i] - 1]."""
    rho = check_permutation(rho)
    if len(items) != len(rho):
        raise ShapeError("permutation size %d vs %d items" % (len(rho), len(items)))
    return tuple(items[r - 1] for r in rho)


def compose(rho, sigma):
    """Permutation with reorder(compose(rho, sigma), t) == reorder(rho, reorder(sigma, t))."""
    return reorder(rho, check_permutation(sigma))


def invert(rho):
    rho = check_permutation(rho)
    out = [0] * len(rho)
    for i, r in enumerate(rho):
        out[r - 1] = i + 1
    return tuple(out)


def permutation_sign(seq) -> int:
    """Sign of a sequence of distinct comparable values by inversion count."""
    inv = 0
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def graded_sign(rho, degrees) -> int:
    """Sign of ``rho`` on the odd-degree positions only.

    ``degrees`` lists the degree of each source position; even-degree
    entries are deleted and the sign of the remaining permutation is
    returned.  Raises ``GradingError`` when some parity is undefined.
    """
    rho = check_permutation(rho)
    if len(degrees) != len(rho):
        raise ShapeError(
            "permutation on %d letters with %d degrees" % (len(rho), len(degrees))
        )
    parities = [_parity(d) for d in degrees]
    return permutation_sign([r for r in rho if parities[r - 1]])
