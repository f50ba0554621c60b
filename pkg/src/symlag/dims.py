"""Index bookkeeping for double branched covers and their moduli spaces.

Everything here is a total integer function.  Negative "dimensions" are
returned unchanged; they mean dimension minus the size of a generic
automorphism group.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CoverData:
    k: int
    l: int
    orbifold_flags: tuple = field(default=())
    chi_S: int = 1
    mu: int = 2
    crit_count: int = 0

    def __post_init__(self):
        flags = tuple(bool(f) for f in self.orbifold_flags) or (False,) * self.l
        object.__setattr__(self, "orbifold_flags", flags)
        if self.k < 0 or self.l < 0 or self.crit_count < 0:
            raise ValueError("k, l and crit_count are nonnegative")
        if len(flags) != self.l:
            raise ValueError(f"need {self.l} orbifold flags, got {len(flags)}")
        if self.mu < 0 or self.mu % 2:
            raise ValueError(f"Maslov index must be even and nonnegative, got {self.mu}")

    @property
    def orbifold_count(self) -> int:
        return sum(self.orbifold_flags)

    @property
    def smooth_count(self) -> int:
        return self.l - self.orbifold_count

    def report(self) -> dict:
        dom = vdim_domain(self.k, self.l)
        mp = vdim_map(self.orbifold_count, self.mu)
        tot = vdim_total(self.k, self.smooth_count, self.mu)
        return {
            "k": self.k, "l": self.l, "mu": self.mu,
            "orbifold_count": self.orbifold_count, "smooth_count": self.smooth_count,
            "chi_Sigma": riemann_hurwitz(self.chi_S, self.crit_count),
            "vdim_domain": dom, "vdim_map": mp, "vdim_total": tot,
            "identity_holds": dom + mp == tot,
            "coh_degree": coh_degree(self.mu),
        }


def riemann_hurwitz(chi_S: int, crit_count: int) -> int:
    """Euler characteristic of a double cover of S with the given branch count."""
    return 2 * chi_S - crit_count


def vdim_domain(k: int, l: int) -> int:
    return (k + 1) + 2 * l - 3


def vdim_map(orbifold_count: int, mu: int) -> int:
    return 2 * (2 - orbifold_count) + mu


def vdim_total(k: int, smooth_count: int, mu: int) -> int:
    return 4 + (k + 1) + 2 * smooth_count + mu - 3


def coh_degree(mu: int) -> int:
    return 2 - mu
