"""Chern numbers of q-th root covers branched along a resolved arrangement.

A branch assignment attaches a multiplicity in {1, .., q-1} to every
component; the cover's Chern numbers are the degree-q leading terms of the
log Chern numbers corrected by one Dedekind-sum/length contribution per
node. The residue of a node is determined by the two multiplicities
meeting there.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .geometry import ResolvedConfiguration, log_chern_pair
from .numtheory import DomainError, ceil_isqrt, dedekind_data, is_prime


class InvalidAssignmentError(ValueError):
    """A multiplicity collapsed to 0 mod q, or fell outside {1, .., q-1}."""


def node_residue(nu_i: int, nu_j: int, q: int) -> int:
    """The unique 0 < a < q with nu_i * a + nu_j = 0 (mod q).

    Swapping the two multiplicities replaces a by its inverse mod q; the
    node invariants c and l are insensitive to the swap.
    """
    if not is_prime(q):
        raise DomainError(f"q must be prime, got {q}")
    if not (0 < nu_i < q and 0 < nu_j < q):
        raise InvalidAssignmentError(f"multiplicities {nu_i}, {nu_j} not in (0, {q})")
    return (-nu_j * pow(nu_i, -1, q)) % q


@dataclass(frozen=True)
class BranchAssignment:
    """Multiplicities for every component of a configuration, mod q."""

    q: int
    nus: Mapping[str, int]

    def __post_init__(self) -> None:
        for cid, nu in self.nus.items():
            if not 0 < nu < self.q:
                raise InvalidAssignmentError(f"nu({cid}) = {nu} not in (0, {self.q})")
        object.__setattr__(self, "nus", MappingProxyType(dict(self.nus)))

    @classmethod
    def from_base(
        cls, config: ResolvedConfiguration, q: int, base: Mapping[str, int]
    ) -> "BranchAssignment":
        """Extend multiplicities on the non-exceptional components to the
        chains: over a tangency with section multiplicities a, b and fiber
        multiplicity y, the k-th chain curve carries k(a + b) + y mod q."""
        nus: dict[str, int] = {}
        for comp in config.components:
            if comp.kind == "exceptional":
                continue
            if comp.cid not in base:
                raise InvalidAssignmentError(f"no multiplicity given for {comp.cid}")
            nu = base[comp.cid] % q
            if nu == 0:
                raise InvalidAssignmentError(f"nu({comp.cid}) = 0 mod {q}")
            nus[comp.cid] = nu
        for tang in config.tangencies:
            s = (nus[tang.sections[0]] + nus[tang.sections[1]]) % q
            y = nus[tang.fiber]
            for k, gid in enumerate(tang.chain, start=1):
                nu = (k * s + y) % q
                if nu == 0:
                    raise InvalidAssignmentError(f"nu({gid}) = 0 mod {q}")
                nus[gid] = nu
        return cls(q=q, nus=nus)

    def residues(self, config: ResolvedConfiguration) -> list[tuple[tuple[str, str, int], int]]:
        """(node, residue) for every node of the configuration."""
        out = []
        for node in config.nodes:
            a, b, _count = node
            out.append((node, node_residue(self.nus[a], self.nus[b], self.q)))
        return out


@dataclass(frozen=True)
class SingularityRecord:
    node: tuple[str, str, int]
    a: int
    hj_digits: tuple[int, ...]
    c: Fraction
    l: int


@dataclass(frozen=True)
class CoverInvariants:
    q: int
    c1sq: Fraction
    c2: Fraction
    chi: Fraction
    slope: Fraction
    c_correction: Fraction  # sum over nodes of c(a, q) * multiplicity
    l_correction: int       # sum over nodes of l(a, q) * multiplicity
    defect_bound: int | None
    singularities: tuple[SingularityRecord, ...]

    @property
    def chi_is_integral(self) -> bool:
        return self.chi.denominator == 1


def defect_bound(q: int, t2: int) -> int:
    """(6 ceil(sqrt(q)) + 7) * t2, the conservative node-correction cap."""
    if q < 17:
        raise DomainError(f"defect bound needs q >= 17, got {q}")
    return (6 * ceil_isqrt(q) + 7) * t2


def chern_of_cover(config: ResolvedConfiguration, assign: BranchAssignment) -> CoverInvariants:
    q = assign.q
    c1b, c2b = log_chern_pair(config)
    c1, c2 = config.c1sq_ambient, config.c2_ambient

    residues = assign.residues(config)
    counts = Counter()
    for node, a in residues:
        counts[a] += node[2]
    data = {a: dedekind_data(q, a) for a in counts}

    c_corr = sum((data[a].c * n for a, n in counts.items()), Fraction(0))
    l_corr = sum(data[a].length * n for a, n in counts.items())

    c1sq_x = c1b * q + 2 * (c2 - c2b) + Fraction(c1 - c1b + 2 * c2b - 2 * c2, q) - c_corr
    c2_x = Fraction(c2b * q + (c2 - c2b) + l_corr)
    if c2_x == 0:
        raise InvalidAssignmentError("cover has vanishing c2")
    chi = (c1sq_x + c2_x) / 12

    sings = tuple(
        SingularityRecord(node=node, a=a, hj_digits=data[a].digits, c=data[a].c, l=data[a].length)
        for node, a in residues
    )
    bound = defect_bound(q, config.t2) if q >= 17 else None
    return CoverInvariants(
        q=q,
        c1sq=c1sq_x,
        c2=c2_x,
        chi=chi,
        slope=c1sq_x / c2_x,
        c_correction=c_corr,
        l_correction=l_corr,
        defect_bound=bound,
        singularities=sings,
    )
