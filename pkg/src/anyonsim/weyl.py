"""Z_d generalization of the Pauli algebra (clock/shift Weyl strings).

Conventions: Z is the clock matrix diag(1, w, w^2, ...) and X the shift
|j> -> |j+1 mod d>, with w = exp(2*pi*i/d), so X Z = w^-1 Z X on one site.
A string is ``w**(phase/2) * prod_j X_j**a_j Z_j**b_j``; phases are stored
mod 2d in half-units of w so products stay exact for even d, and reduce to
a physical w power only at scalar extraction.  d = 2 reproduces PauliString
arithmetic exactly (w^(1/2) = i).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .errors import UsageError


@dataclass(frozen=True)
class WeylString:
    """Sparse Z_d Weyl operator; identity sites absent."""

    d: int
    phase: int = 0  # power of w^(1/2), mod 2d
    support: dict[int, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 2:
            raise UsageError("Weyl dimension d must be >= 2")
        object.__setattr__(self, "phase", self.phase % (2 * self.d))
        clean = {q: (a % self.d, b % self.d) for q, (a, b) in self.support.items()
                 if a % self.d or b % self.d}
        object.__setattr__(self, "support", clean)

    @classmethod
    def identity(cls, d: int) -> "WeylString":
        return cls(d, 0, {})

    @classmethod
    def z_power(cls, d: int, sites, b: int) -> "WeylString":
        return cls(d, 0, {int(q): (0, b) for q in sites})

    @classmethod
    def x_power(cls, d: int, sites, a: int) -> "WeylString":
        return cls(d, 0, {int(q): (a, 0) for q in sites})

    def is_scalar(self) -> bool:
        return not self.support

    def scalar(self) -> complex:
        """The complex value of a scalar string, w**(phase/2)."""
        if not self.is_scalar():
            raise UsageError("string is not a scalar")
        return cmath.exp(1j * cmath.pi * self.phase / self.d)

    def inverse(self) -> "WeylString":
        cross = sum(a * b for a, b in self.support.values())
        support = {q: (-a, -b) for q, (a, b) in self.support.items()}
        return WeylString(self.d, -self.phase + 2 * cross, support)

    def __mul__(self, other: "WeylString") -> "WeylString":
        return weyl_multiply(self, other)


def weyl_multiply(p: WeylString, q: WeylString) -> WeylString:
    """Exact product p * q with w-phase bookkeeping (p applied after q)."""
    if p.d != q.d:
        raise UsageError("Weyl strings have different d")
    d = p.d
    phase = p.phase + q.phase
    support = dict(p.support)
    for site, (aq, bq) in q.support.items():
        ap, bp = support.get(site, (0, 0))
        phase += 2 * bp * aq  # Z^bp X^aq = w^(bp aq) X^aq Z^bp
        a, b = (ap + aq) % d, (bp + bq) % d
        if a or b:
            support[site] = (a, b)
        elif site in support:
            del support[site]
    return WeylString(d, phase, support)


def weyl_braiding_phase(zstr: WeylString, xstr: WeylString) -> int:
    """Exponent k of the scalar w**k = Z~^-a X~^-b Z~^a X~^b.

    For closed crossing strings carrying charge a and flux b the result is
    a*b*crossings mod d.
    """
    if zstr.d != xstr.d:
        raise UsageError("Weyl strings have different d")
    commutator = weyl_multiply(
        weyl_multiply(zstr.inverse(), xstr.inverse()),
        weyl_multiply(zstr, xstr))
    if not commutator.is_scalar():
        raise UsageError("braiding strings are not closed (non-scalar result)")
    if commutator.phase % 2:
        raise UsageError("braiding commutator carries a half phase")
    return (commutator.phase // 2) % zstr.d


def weyl_gate_count(d: int) -> int:
    """Global gates needed to realize a charge-a string operator: d - 1."""
    if d < 2:
        raise UsageError("d must be >= 2")
    return d - 1
