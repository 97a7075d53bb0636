"""Summability calculus over lattice sectors.

This module carries the sequence-space side of the decision engine:

* lattice sectors (lines, products, punctured lattices with radial
  weights, and constrained pair sectors of the form |m| <= ceil(2^(lam*n))
  + shift),
* exp-poly weights, finite sums of atoms 2^(a*n) * |n|^c per coordinate
  with per-orthant exponents,
* an exact decider for membership of such a weight in l^theta,
* an independent numeric truncation oracle that classifies the same
  membership question from partial sums alone, and
* the two directions of the weighted sequence embedding test: a Hoelder
  constant for the positive direction and a growing witness family for
  the negative one.

The decider and the oracle share no logic.  The decider manipulates
exponents as exact rationals and never evaluates the weight; the oracle
evaluates the weight numerically and never looks at the exponents.  Test
suites drive both against each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

import numpy as np

from .errors import UnsupportedWeight

__all__ = [
    "LineSector",
    "ProductSector",
    "RadialSector",
    "PairSector",
    "CoordFactor",
    "Atom",
    "ExpPolyWeight",
    "Membership",
    "TailClassification",
    "decide_lp_membership",
    "decide_sequence_embedding",
    "truncated_oracle",
    "holder_constant",
    "sequence_norm",
    "witness_norm_ratios",
    "sector_from_json",
    "expweight_from_json",
    "rat_from_json",
    "rat_to_json",
]

RatLike = Union[int, Fraction]


# ---------------------------------------------------------------------------
# small numeric / rational helpers
# ---------------------------------------------------------------------------

def rat_from_json(obj: object) -> Fraction:
    """Parse a rational literal: int, [num, den], or "a/b" string."""
    if isinstance(obj, bool):
        raise ValueError("bool is not a rational")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, float):
        cand = Fraction(obj).limit_denominator(10**6)
        if float(cand) != obj:
            raise ValueError(f"{obj!r} is not exactly rational at denominator <= 1e6")
        return cand
    if (
        isinstance(obj, (list, tuple))
        and len(obj) == 2
        and all(isinstance(x, int) and not isinstance(x, bool) for x in obj)
    ):
        return Fraction(obj[0], obj[1])
    raise ValueError(f"not a rational literal: {obj!r}")


def rat_to_json(fr: Fraction) -> object:
    if fr.denominator == 1:
        return fr.numerator
    return [fr.numerator, fr.denominator]


def pow2f(x: float) -> float:
    """2**x in float, saturating instead of raising OverflowError."""
    if x > 1100.0:
        return math.inf
    if x < -1100.0:
        return 0.0
    return 2.0 ** x


def ceil_pow2(fr: Fraction) -> int:
    """ceil(2**fr) for rational fr, computed in integer arithmetic."""
    if fr <= 0:
        # 2**fr lies in (0, 1]
        return 1
    p, q = fr.numerator, fr.denominator
    lo = 1 << (p // q)
    target = 1 << p
    if lo**q >= target:
        return lo
    hi = lo * 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid**q >= target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------

_LINE_DOMAINS = ("Z", "N0", "Nneg", "Z_nonzero")


@dataclass(frozen=True)
class LineSector:
    """A one-dimensional integer sector.

    domain is one of "Z", "N0" (n >= 0), "Nneg" (n <= -1), "Z_nonzero".
    """

    domain: str = "Z"

    def __post_init__(self) -> None:
        if self.domain not in _LINE_DOMAINS:
            raise ValueError(f"unknown line domain {self.domain!r}")

    @property
    def dims(self) -> int:
        return 1

    def contains(self, pt: tuple[int, ...]) -> bool:
        (n,) = pt
        if self.domain == "N0":
            return n >= 0
        if self.domain == "Nneg":
            return n <= -1
        if self.domain == "Z_nonzero":
            return n != 0
        return True

    def coord_values(self, radius: int) -> list[int]:
        if self.domain == "N0":
            return list(range(0, radius + 1))
        if self.domain == "Nneg":
            return list(range(-radius, 0))
        vals = list(range(-radius, radius + 1))
        if self.domain == "Z_nonzero":
            vals.remove(0)
        return vals

    def iter_window(self, radius: int) -> Iterator[tuple[int, ...]]:
        for n in self.coord_values(radius):
            yield (n,)

    @staticmethod
    def point_radius(pt: tuple[int, ...]) -> int:
        return abs(pt[0])

    def to_json(self) -> object:
        return {"kind": self.domain}


@dataclass(frozen=True)
class ProductSector:
    """A product of line sectors, one per coordinate."""

    lines: tuple[LineSector, ...]

    @property
    def dims(self) -> int:
        return len(self.lines)

    def contains(self, pt: tuple[int, ...]) -> bool:
        return len(pt) == self.dims and all(
            line.contains((n,)) for line, n in zip(self.lines, pt)
        )

    def iter_window(self, radius: int) -> Iterator[tuple[int, ...]]:
        axes = [line.coord_values(radius) for line in self.lines]
        return itertools.product(*axes)

    @staticmethod
    def point_radius(pt: tuple[int, ...]) -> int:
        return max(abs(n) for n in pt)

    def to_json(self) -> object:
        return {"kind": "product", "domains": [line.domain for line in self.lines]}


@dataclass(frozen=True)
class RadialSector:
    """The punctured lattice Z^d minus the origin, with radial atoms."""

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def dims(self) -> int:
        return self.d

    def contains(self, pt: tuple[int, ...]) -> bool:
        return len(pt) == self.d and any(n != 0 for n in pt)

    def iter_window(self, radius: int) -> Iterator[tuple[int, ...]]:
        rng = range(-radius, radius + 1)
        for pt in itertools.product(*([rng] * self.d)):
            if any(n != 0 for n in pt):
                yield pt

    @staticmethod
    def point_radius(pt: tuple[int, ...]) -> int:
        return max(abs(n) for n in pt)

    def to_json(self) -> object:
        return {"kind": "radial", "d": self.d}


@dataclass(frozen=True)
class PairSector:
    """Pairs (n, m) with n in a half-line and |m| constrained by 2^(lam*n).

    side "inside" means |m| <= ceil(2^(lam*n)) + shift, side "outside"
    means |m| >= ceil(2^(lam*n)) + shift.  The sign of lam must make
    lam*n >= 0 on the n-domain; the closed-form reduction rules assume
    the bound never collapses below 1 by more than the shift.
    """

    n_domain: str = "N0"  # "N0" or "Nneg"
    lam: Fraction = Fraction(0)
    side: str = "inside"
    shift: int = 0

    def __post_init__(self) -> None:
        if self.n_domain not in ("N0", "Nneg"):
            raise ValueError(f"pair sector n-domain must be N0 or Nneg, got {self.n_domain!r}")
        if self.side not in ("inside", "outside"):
            raise ValueError(f"pair sector side must be inside or outside, got {self.side!r}")
        if self.shift not in (-1, 0, 1):
            raise ValueError("pair sector shift must be in {-1, 0, 1}")
        object.__setattr__(self, "lam", Fraction(self.lam))

    @property
    def dims(self) -> int:
        return 2

    def n_values(self, radius: int) -> list[int]:
        if self.n_domain == "N0":
            return list(range(0, radius + 1))
        return list(range(-radius, 0))

    def m_bound(self, n: int) -> int:
        """The row bound ceil(2^(lam*n)) + shift for row n."""
        return ceil_pow2(self.lam * n) + self.shift

    def contains(self, pt: tuple[int, ...]) -> bool:
        n, m = pt
        if self.n_domain == "N0" and n < 0:
            return False
        if self.n_domain == "Nneg" and n >= 0:
            return False
        bound = self.m_bound(n)
        if self.side == "inside":
            return abs(m) <= bound
        return abs(m) >= bound

    def iter_window(self, radius: int) -> Iterator[tuple[int, ...]]:
        if self.side == "outside":
            raise UnsupportedWeight(
                "outside pair sectors have unbounded rows; no finite window"
            )
        for n in self.n_values(radius):
            bound = self.m_bound(n)
            for m in range(-bound, bound + 1):
                yield (n, m)

    @staticmethod
    def point_radius(pt: tuple[int, ...]) -> int:
        return abs(pt[0])

    def to_json(self) -> object:
        return {
            "kind": "pairs",
            "n_domain": self.n_domain,
            "lam": rat_to_json(self.lam),
            "side": self.side,
            "shift": self.shift,
        }


Sector = Union[LineSector, ProductSector, RadialSector, PairSector]


def sector_from_json(obj: object) -> Sector:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"not a sector descriptor: {obj!r}")
    kind = obj["kind"]
    if kind in _LINE_DOMAINS:
        return LineSector(kind)
    if kind == "product":
        return ProductSector(tuple(LineSector(d) for d in obj["domains"]))
    if kind == "radial":
        return RadialSector(int(obj["d"]))
    if kind == "pairs":
        return PairSector(
            n_domain=obj.get("n_domain", "N0"),
            lam=rat_from_json(obj.get("lam", 0)),
            side=obj.get("side", "inside"),
            shift=int(obj.get("shift", 0)),
        )
    raise ValueError(f"unknown sector kind {kind!r}")


# ---------------------------------------------------------------------------
# atoms and weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordFactor:
    """Per-coordinate factor 2^(a*n) * |n|^c with separate orthant exponents.

    On n >= 0 the factor is 2^(exp2_pos*n) * |n|^pow_pos, on n < 0 it is
    2^(exp2_neg*n) * |n|^pow_neg.  |0|^c is read as 1.
    """

    exp2_pos: Fraction = Fraction(0)
    exp2_neg: Fraction = Fraction(0)
    pow_pos: Fraction = Fraction(0)
    pow_neg: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("exp2_pos", "exp2_neg", "pow_pos", "pow_neg"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def symmetric(cls, exp2: RatLike = 0, power: RatLike = 0) -> "CoordFactor":
        return cls(Fraction(exp2), Fraction(exp2), Fraction(power), Fraction(power))

    @property
    def is_trivial(self) -> bool:
        return not any((self.exp2_pos, self.exp2_neg, self.pow_pos, self.pow_neg))

    def value(self, n: int) -> float:
        return pow2f(self.log2_value(n))

    def log2_value(self, n: int) -> float:
        if n >= 0:
            a, c = self.exp2_pos, self.pow_pos
        else:
            a, c = self.exp2_neg, self.pow_neg
        out = float(a) * n
        if c and n != 0:
            out += float(c) * math.log2(abs(n))
        return out

    def sub(self, other: "CoordFactor") -> "CoordFactor":
        return CoordFactor(
            self.exp2_pos - other.exp2_pos,
            self.exp2_neg - other.exp2_neg,
            self.pow_pos - other.pow_pos,
            self.pow_neg - other.pow_neg,
        )


@dataclass(frozen=True)
class Atom:
    """coeff * prod_j factor_j(n_j) * |n|_2^radial_pow, strictly positive."""

    coeff: Fraction = Fraction(1)
    factors: tuple[CoordFactor, ...] = ()
    radial_pow: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "radial_pow", Fraction(self.radial_pow))
        if self.coeff <= 0:
            raise ValueError("atom coefficient must be positive")

    @classmethod
    def line(cls, exp2: RatLike = 0, power: RatLike = 0, coeff: RatLike = 1) -> "Atom":
        return cls(Fraction(coeff), (CoordFactor.symmetric(exp2, power),))

    @classmethod
    def radial(cls, d: int, power: RatLike, coeff: RatLike = 1) -> "Atom":
        return cls(
            Fraction(coeff),
            tuple(CoordFactor() for _ in range(d)),
            Fraction(power),
        )

    @classmethod
    def pair(
        cls,
        n_exp2: RatLike = 0,
        n_power: RatLike = 0,
        m_power: RatLike = 0,
        coeff: RatLike = 1,
    ) -> "Atom":
        return cls(
            Fraction(coeff),
            (
                CoordFactor.symmetric(n_exp2, n_power),
                CoordFactor.symmetric(0, m_power),
            ),
        )

    def evaluate(self, pt: tuple[int, ...]) -> float:
        # sum exponents before exponentiating: saturated per-factor values
        # would otherwise meet as inf * 0 = nan on steep mixed-rate atoms
        log2mag = 0.0
        for factor, n in zip(self.factors, pt):
            log2mag += factor.log2_value(n)
        if self.radial_pow:
            rr = math.sqrt(sum(n * n for n in pt))
            if rr == 0.0:
                return float(self.coeff) * pow2f(log2mag) * rr ** float(self.radial_pow)
            log2mag += float(self.radial_pow) * math.log2(rr)
        return float(self.coeff) * pow2f(log2mag)

    def quotient(self, den: "Atom") -> "Atom":
        if len(den.factors) != len(self.factors):
            raise UnsupportedWeight("quotient of atoms over different lattices")
        return Atom(
            self.coeff / den.coeff,
            tuple(f.sub(g) for f, g in zip(self.factors, den.factors)),
            self.radial_pow - den.radial_pow,
        )


@dataclass(frozen=True)
class Piece:
    sector: Sector
    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("piece needs at least one atom")
        for atom in self.atoms:
            if len(atom.factors) != self.sector.dims:
                raise ValueError("atom arity does not match sector dimension")


@dataclass(frozen=True)
class ExpPolyWeight:
    """A positive weight given piecewise as sums of atoms over sectors.

    Pieces partition the intended index set; membership in l^theta is the
    conjunction of membership on every piece.
    """

    pieces: tuple[Piece, ...]

    @classmethod
    def single(cls, sector: Sector, *atoms: Atom) -> "ExpPolyWeight":
        return cls((Piece(sector, tuple(atoms)),))

    @property
    def dims(self) -> int:
        return self.pieces[0].sector.dims

    def evaluate(self, pt: tuple[int, ...]) -> float:
        for piece in self.pieces:
            if piece.sector.contains(pt):
                return sum(atom.evaluate(pt) for atom in piece.atoms)
        raise ValueError(f"point {pt} lies in no piece of this weight")

    def contains(self, pt: tuple[int, ...]) -> bool:
        return any(piece.sector.contains(pt) for piece in self.pieces)

    def iter_points(self, radius: int) -> Iterator[tuple[int, ...]]:
        for piece in self.pieces:
            yield from piece.sector.iter_window(radius)

    def quotient(self, den: "ExpPolyWeight") -> "ExpPolyWeight":
        """Pointwise self/den; den must carry one atom per matching sector."""
        if len(den.pieces) != len(self.pieces):
            raise UnsupportedWeight("quotient across different piece layouts")
        out = []
        for num_piece, den_piece in zip(self.pieces, den.pieces):
            if num_piece.sector != den_piece.sector:
                raise UnsupportedWeight("quotient across different sectors")
            if len(den_piece.atoms) != 1:
                raise UnsupportedWeight("denominator weight must be a single atom per sector")
            den_atom = den_piece.atoms[0]
            out.append(
                Piece(
                    num_piece.sector,
                    tuple(atom.quotient(den_atom) for atom in num_piece.atoms),
                )
            )
        return ExpPolyWeight(tuple(out))

    def to_json(self) -> object:
        def atom_json(atom: Atom) -> dict:
            doc: dict[str, object] = {}
            if atom.coeff != 1:
                doc["coeff"] = rat_to_json(atom.coeff)
            if atom.factors:
                doc["exp2"] = [
                    {"pos": rat_to_json(f.exp2_pos), "neg": rat_to_json(f.exp2_neg)}
                    for f in atom.factors
                ]
                doc["pow"] = [
                    {"pos": rat_to_json(f.pow_pos), "neg": rat_to_json(f.pow_neg)}
                    for f in atom.factors
                ]
            if atom.radial_pow:
                doc["radial_pow"] = rat_to_json(atom.radial_pow)
            return doc

        pieces = [
            {
                "lattice": piece.sector.to_json(),
                "atoms": [atom_json(a) for a in piece.atoms],
            }
            for piece in self.pieces
        ]
        if len(pieces) == 1:
            return pieces[0]
        return {"pieces": pieces}


def _factor_from_json(obj: object) -> tuple[Fraction, Fraction]:
    """Parse a scalar-or-{pos,neg} exponent entry."""
    if isinstance(obj, dict):
        pos = rat_from_json(obj.get("pos", 0))
        neg = rat_from_json(obj.get("neg", 0))
        return pos, neg
    val = rat_from_json(obj)
    return val, val


def _atom_from_json(obj: object, dims: int) -> Atom:
    if not isinstance(obj, dict):
        raise ValueError(f"not an atom descriptor: {obj!r}")
    coeff = rat_from_json(obj.get("coeff", 1))
    exp2 = obj.get("exp2", [0] * dims)
    powers = obj.get("pow", [0] * dims)
    if not isinstance(exp2, list):
        exp2 = [exp2]
    if not isinstance(powers, list):
        powers = [powers]
    if len(exp2) != dims or len(powers) != dims:
        raise ValueError("atom exponent lists must match the sector dimension")
    factors = []
    for e_entry, p_entry in zip(exp2, powers):
        e_pos, e_neg = _factor_from_json(e_entry)
        p_pos, p_neg = _factor_from_json(p_entry)
        factors.append(CoordFactor(e_pos, e_neg, p_pos, p_neg))
    radial = rat_from_json(obj.get("radial_pow", 0))
    return Atom(coeff, tuple(factors), radial)


def expweight_from_json(obj: object) -> ExpPolyWeight:
    """Parse {"lattice": ..., "atoms": [...]} or {"pieces": [...]}."""
    if isinstance(obj, dict) and "pieces" in obj:
        piece_docs = obj["pieces"]
    else:
        piece_docs = [obj]
    pieces = []
    for doc in piece_docs:
        if not isinstance(doc, dict) or "lattice" not in doc:
            raise ValueError(f"not a weight descriptor: {doc!r}")
        sector = sector_from_json(doc["lattice"])
        atom_docs = doc.get("atoms", [{}])
        atoms = tuple(_atom_from_json(a, sector.dims) for a in atom_docs)
        pieces.append(Piece(sector, atoms))
    return ExpPolyWeight(tuple(pieces))


# ---------------------------------------------------------------------------
# exact membership decision
# ---------------------------------------------------------------------------

class Membership(str, Enum):
    MEMBER = "Member"
    NOT_MEMBER = "NotMember"


def _halfline_summable(a: Fraction, c: Fraction) -> bool:
    """Finiteness of sum over n >= 1 of 2^(a*n) * n^c."""
    if a < 0:
        return True
    if a == 0:
        return c < -1
    return False


def _halfline_bounded(a: Fraction, c: Fraction) -> bool:
    """Boundedness of 2^(a*n) * n^c over n >= 1."""
    if a < 0:
        return True
    if a == 0:
        return c <= 0
    return False


def _line_member(domain: str, f: CoordFactor, theta: Fraction | None) -> bool:
    if theta is None:
        pos_ok = _halfline_bounded(f.exp2_pos, f.pow_pos)
        neg_ok = _halfline_bounded(-f.exp2_neg, f.pow_neg)
    else:
        pos_ok = _halfline_summable(theta * f.exp2_pos, theta * f.pow_pos)
        neg_ok = _halfline_summable(-theta * f.exp2_neg, theta * f.pow_neg)
    if domain == "N0":
        return pos_ok
    if domain == "Nneg":
        return neg_ok
    return pos_ok and neg_ok


def _pair_atom_member(sector: PairSector, atom: Atom, theta: Fraction | None) -> bool:
    n_factor, m_factor = atom.factors
    if m_factor.exp2_pos or m_factor.exp2_neg:
        raise UnsupportedWeight("pair sectors support only power factors in m")
    if m_factor.pow_pos != m_factor.pow_neg:
        raise UnsupportedWeight("pair sectors need a symmetric m power")
    rho = m_factor.pow_pos
    lam = sector.lam
    if sector.n_domain == "N0":
        if lam < 0:
            raise UnsupportedWeight("pair sector with lam < 0 on n >= 0")
        a, c = n_factor.exp2_pos, n_factor.pow_pos
        mirror = False
    else:
        if lam > 0:
            raise UnsupportedWeight("pair sector with lam > 0 on n < 0")
        a, c = n_factor.exp2_neg, n_factor.pow_neg
        mirror = True

    def halfline(a_eff: Fraction, c_eff: Fraction, bounded: bool) -> bool:
        a_use = -a_eff if mirror else a_eff
        if bounded:
            return _halfline_bounded(a_use, c_eff)
        return _halfline_summable(a_use, c_eff)

    if theta is None:
        # sup over the sector; the extremal |m| is the row bound when the
        # m power points outward, otherwise the smallest admissible |m|
        if sector.side == "outside" and rho > 0:
            return False
        if (sector.side == "inside" and rho > 0) or (
            sector.side == "outside" and rho <= 0
        ):
            return halfline(a + lam * rho, c, bounded=True)
        return halfline(a, c, bounded=True)

    a_bar = theta * a
    c_bar = theta * c
    rho_bar = theta * rho
    if sector.side == "outside":
        if rho_bar >= -1:
            return False  # every row has a divergent m-tail
        return halfline(a_bar + lam * (1 + rho_bar), c_bar, bounded=False)
    # inside rows: the m-sum behaves like bound^(1+rho_bar) above rho_bar=-1,
    # like log(bound) at rho_bar=-1, and like a constant below
    if rho_bar > -1:
        return halfline(a_bar + lam * (1 + rho_bar), c_bar, bounded=False)
    if rho_bar == -1:
        bump = Fraction(1) if lam != 0 else Fraction(0)
        return halfline(a_bar, c_bar + bump, bounded=False)
    return halfline(a_bar, c_bar, bounded=False)


def _atom_member(sector: Sector, atom: Atom, theta: Fraction | None) -> bool:
    if isinstance(sector, RadialSector):
        if any(not f.is_trivial for f in atom.factors):
            raise UnsupportedWeight("radial sectors support only radial powers")
        if theta is None:
            return atom.radial_pow <= 0
        return theta * atom.radial_pow < -sector.d
    if atom.radial_pow:
        raise UnsupportedWeight("radial powers are only supported on radial sectors")
    if isinstance(sector, LineSector):
        return _line_member(sector.domain, atom.factors[0], theta)
    if isinstance(sector, ProductSector):
        return all(
            _line_member(line.domain, f, theta)
            for line, f in zip(sector.lines, atom.factors)
        )
    if isinstance(sector, PairSector):
        return _pair_atom_member(sector, atom, theta)
    raise UnsupportedWeight(f"unknown sector type {type(sector).__name__}")


def decide_lp_membership(w: ExpPolyWeight, theta) -> Membership:
    """Exact decision of w in l^theta over the weight's lattice.

    For finite theta a sum of atoms is summable exactly when every atom
    is (the theta-power of a finite sum of positive terms is comparable
    to the sum of theta-powers), so the decision distributes over atoms
    and pieces.
    """
    theta_frac = None if theta.is_inf else theta.frac
    for piece in w.pieces:
        for atom in piece.atoms:
            if not _atom_member(piece.sector, atom, theta_frac):
                return Membership.NOT_MEMBER
    return Membership.MEMBER


def decide_sequence_embedding(u: ExpPolyWeight, v: ExpPolyWeight, r, s) -> str:
    """Whether the r-summable sequences against v embed into the s-summable
    sequences against u; decided through membership of u/v at the compound
    exponent of (s, r).

    Returns "Embeds" or "DoesNotEmbed".
    """
    from .exponents import compound

    theta = compound(s, r)
    quot = u.quotient(v)
    if decide_lp_membership(quot, theta) is Membership.MEMBER:
        return "Embeds"
    return "DoesNotEmbed"


# ---------------------------------------------------------------------------
# numeric truncation oracle
# ---------------------------------------------------------------------------

BLOWUP_THRESHOLD = 1e12
GROWTH_FACTOR = 1.5
SHELL_RATIO = 0.9
RATIO_WINDOW = 3

_ROW_STEP_CAP = 200_000
_ROW_NEGLIGIBLE = 1e-12
# a truncated row only blocks a Convergent verdict when the missing mass
# could move a shell ratio; 1e-6 relative mass cannot cross the 0.9 gate.
# both thresholds are read relative to the global partial sum, so tiny
# rows with fat relative tails do not block certification
_ROW_SIGNIFICANT = 1e-6


@dataclass
class TailClassification:
    """Outcome of truncated l^theta summation over nested windows."""

    verdict: str  # "Convergent", "Divergent" or "Inconclusive"
    window_radius: int
    partial_sum: float | None = None
    tail_bound: float | None = None
    growth: float | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "window_radius": self.window_radius,
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "growth": self.growth,
        }


def default_radii(dims: int, has_pair: bool) -> tuple[int, ...]:
    if has_pair:
        return (3, 5, 7, 10, 13, 16, 20)
    if dims == 1:
        return (16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384)
    if dims == 2:
        return (8, 16, 32, 64, 128, 256)
    return (4, 8, 16, 32)


def _grid_axes(sector: Sector, radius: int) -> list[np.ndarray]:
    if isinstance(sector, LineSector):
        return [np.array(sector.coord_values(radius), dtype=np.float64)]
    if isinstance(sector, ProductSector):
        return [
            np.array(line.coord_values(radius), dtype=np.float64)
            for line in sector.lines
        ]
    if isinstance(sector, RadialSector):
        rng = np.arange(-radius, radius + 1, dtype=np.float64)
        return [rng] * sector.d
    raise UnsupportedWeight("no grid form for this sector")


def _factor_on_axis(f: CoordFactor, n: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", under="ignore"):
        return np.exp2(np.clip(_factor_log2_on_axis(f, n), -1100.0, 1100.0))


def _factor_log2_on_axis(f: CoordFactor, n: np.ndarray) -> np.ndarray:
    a = np.where(n >= 0, float(f.exp2_pos), float(f.exp2_neg))
    c = np.where(n >= 0, float(f.pow_pos), float(f.pow_neg))
    absn = np.abs(n)
    safe = np.where(absn == 0, 1.0, absn)  # |0|^c reads as 1
    return a * n + c * np.log2(safe)


def _grid_values(piece: Piece, radius: int) -> tuple[np.ndarray, np.ndarray]:
    """Values and sup-norm radii of a piece on its window, as flat arrays."""
    sector = piece.sector
    axes = _grid_axes(sector, radius)
    shape = tuple(len(ax) for ax in axes)
    total = np.zeros(shape, dtype=np.float64)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        for atom in piece.atoms:
            # same rationale as Atom.evaluate: add exponents, then
            # exponentiate once, so saturation cannot produce inf * 0
            log2mag = np.zeros(shape)
            for dim, (factor, ax) in enumerate(zip(atom.factors, axes)):
                fv = _factor_log2_on_axis(factor, ax)
                log2mag = log2mag + fv.reshape(
                    [-1 if i == dim else 1 for i in range(len(axes))]
                )
            if atom.radial_pow:
                sq = np.zeros(shape)
                for dim, ax in enumerate(axes):
                    sq = sq + (ax**2).reshape(
                        [-1 if i == dim else 1 for i in range(len(axes))]
                    )
                log2mag = log2mag + 0.5 * float(atom.radial_pow) * np.log2(sq)
            vals = np.exp2(np.clip(log2mag, -1100.0, 1100.0))
            total = total + float(atom.coeff) * vals
    radii = np.zeros(shape)
    for dim, ax in enumerate(axes):
        radii = np.maximum(
            radii, np.abs(ax).reshape([-1 if i == dim else 1 for i in range(len(axes))])
        )
    values = total.ravel()
    radii = radii.ravel()
    if isinstance(sector, RadialSector):
        keep = radii > 0
        values, radii = values[keep], radii[keep]
    return values, radii


@dataclass
class _RowSum:
    value: float
    sup: float
    truncated_significant: bool


def _row_values(piece: Piece, n: int, ms: np.ndarray) -> np.ndarray:
    """Vectorized piece values along one row n of a pair sector."""
    total = np.zeros_like(ms)
    for atom in piece.atoms:
        if atom.radial_pow:
            raise UnsupportedWeight("radial powers are not supported on pair sectors")
        base = float(atom.coeff) * atom.factors[0].value(n)
        total = total + base * _factor_on_axis(atom.factors[1], ms)
    return total


def _powered(vals: np.ndarray, theta_f: float | None) -> np.ndarray:
    if theta_f is None:
        return vals
    with np.errstate(over="ignore", under="ignore"):
        return np.where(vals > 0, vals**theta_f, 0.0)


def _pair_row(
    piece: Piece, n: int, theta_f: float | None, scale: float = 0.0
) -> _RowSum:
    """Sum (or sup) of the theta-powers over one row of a pair sector.

    Outside rows are summed in chunks of increasing |m| until the latest
    chunk is negligible relative to the running global sum (``scale``);
    if the step cap is reached while terms still matter, the row is
    flagged so that the caller can refuse to certify convergence.
    """
    sector: PairSector = piece.sector  # type: ignore[assignment]
    bound = sector.m_bound(n)

    if sector.side == "inside":
        if bound < 0:
            return _RowSum(0.0, 0.0, False)
        cap = _ROW_STEP_CAP // 2
        half = min(bound, cap)
        truncated = bound > cap
        ms = np.arange(-half, half + 1, dtype=np.float64)
        powered = _powered(_row_values(piece, n, ms), theta_f)
        if theta_f is None:
            sup = float(powered.max())
            return _RowSum(sup, sup, truncated)
        return _RowSum(float(powered.sum()), 0.0, truncated)

    start = max(bound, 1)
    total = 0.0
    sup = 0.0
    if bound <= 0:
        z = _powered(_row_values(piece, n, np.zeros(1)), theta_f)
        total += float(z.sum())
        sup = max(sup, float(z.max()))
    chunk = 4096
    steps = 0
    last_chunk = 0.0
    while steps < _ROW_STEP_CAP:
        ms = np.arange(start + steps, start + steps + chunk, dtype=np.float64)
        pos = _powered(_row_values(piece, n, ms), theta_f)
        neg = _powered(_row_values(piece, n, -ms), theta_f)
        vals = np.maximum(pos, neg) if theta_f is None else pos + neg
        last_chunk = float(vals.sum())
        total += last_chunk
        sup = max(sup, float(vals.max()))
        steps += chunk
        if not math.isfinite(total):
            return _RowSum(total, sup, False)
        if last_chunk <= _ROW_NEGLIGIBLE * max(total, scale, 1e-300):
            return _RowSum(total, sup, False)
    significant = last_chunk >= _ROW_SIGNIFICANT * max(total, scale, 1e-300)
    if theta_f is None:
        return _RowSum(sup, sup, significant)
    return _RowSum(total, 0.0, significant)


_LN2 = math.log(2.0)


def _sup_exp_poly(a: float, c: float, lo: float, hi: float) -> float:
    """sup of 2^(a*j) * j^c over real j in [lo, hi], lo >= 1, hi may be inf."""
    if lo > hi:
        return 0.0
    if math.isinf(hi) and (a > 0 or (a == 0 and c > 0)):
        return math.inf
    cands = [lo] if math.isinf(hi) else [lo, hi]
    if a != 0.0:
        jstar = -c / (a * _LN2)
        if lo <= jstar <= hi:
            cands.append(jstar)
    return max(pow2f(a * j + c * math.log2(j)) for j in cands)


def _sum_exp_poly(a: float, c: float, lo: float, hi: float) -> float:
    """Upper bound for the sum of 2^(a*j) * j^c over integers j in [lo, hi].

    lo >= 1; hi may be inf.  Splitting off half the exponential rate turns
    the summand into a geometric envelope, so the bound is finite exactly
    when the true series converges.
    """
    if lo > hi:
        return 0.0
    if a < 0:
        peak = _sup_exp_poly(a / 2.0, c, lo, hi)
        return peak * pow2f(a * lo / 2.0) / (1.0 - pow2f(a / 2.0))
    if a > 0:
        if math.isinf(hi):
            return math.inf
        peak = _sup_exp_poly(a / 2.0, c, lo, hi)
        return peak * pow2f(a * hi / 2.0) / (1.0 - pow2f(-a / 2.0))
    if c >= 0:
        if math.isinf(hi):
            return math.inf
        return (hi - lo + 1.0) * pow2f(c * math.log2(hi))
    head = pow2f(c * math.log2(lo))
    if c > -1.0:
        if math.isinf(hi):
            return math.inf
        return head + pow2f((c + 1.0) * math.log2(hi)) / (c + 1.0)
    if c == -1.0:
        if math.isinf(hi):
            return math.inf
        return head + math.log(hi / lo)
    return head + pow2f((c + 1.0) * math.log2(lo)) / (-c - 1.0)


def _pair_tail_bound(piece: Piece, last_radius: int, theta_f: float | None) -> float:
    """Upper bound for the powered mass (sup when theta_f is None) of the
    piece on the rows beyond the last scheduled radius.

    Exponentially widening rows can hide a divergence past any finite
    window; a shell record that looks geometric is only certified when
    this structural bound on the unexplored remainder is finite.
    """
    sector: PairSector = piece.sector  # type: ignore[assignment]
    wsign = 1 if sector.n_domain == "N0" else -1
    lam = float(sector.lam) * wsign
    shift = sector.shift
    lo = float(last_radius + 1)
    th = 1.0 if theta_f is None else theta_f
    sup_mode = theta_f is None

    def mside(a_m: float, c_m: float, mlo: float, mhi: float) -> float:
        if sup_mode:
            return _sup_exp_poly(a_m, c_m, mlo, mhi)
        return _sum_exp_poly(a_m, c_m, mlo, mhi)

    total = 0.0
    for atom in piece.atoms:
        f0, f1 = atom.factors
        if wsign > 0:
            en, fn = th * float(f0.exp2_pos), th * float(f0.pow_pos)
        else:
            en, fn = -th * float(f0.exp2_neg), th * float(f0.pow_neg)
        sides = (
            (th * float(f1.exp2_pos), th * float(f1.pow_pos)),
            (-th * float(f1.exp2_neg), th * float(f1.pow_neg)),
        )
        # each part bounds a slice of the row mass by
        # kpart * 2^(de*j) * j^df over rows j in (last_radius, hi_n]
        parts: list[tuple[float, float, float, float]] = []
        if sector.side == "inside" and lam > 0:
            kb = math.log2(2.0 + max(shift, 0))  # width <= 2^(lam*j + kb)
            parts.append((1.0, 0.0, 0.0, math.inf))  # m = 0 column
            for a_m, c_m in sides:
                if a_m > 0:
                    return math.inf
                if sup_mode:
                    if a_m == 0 and c_m > 0:
                        parts.append((pow2f(kb * c_m), lam * c_m, 0.0, math.inf))
                    else:
                        parts.append(
                            (_sup_exp_poly(a_m, c_m, 1.0, math.inf), 0.0, 0.0, math.inf)
                        )
                elif a_m < 0:
                    parts.append(
                        (_sum_exp_poly(a_m, c_m, 1.0, math.inf), 0.0, 0.0, math.inf)
                    )
                elif c_m > -1.0:
                    parts.append(
                        (
                            (1.0 / (c_m + 1.0) + 1.0) * pow2f(kb * (c_m + 1.0)),
                            lam * (c_m + 1.0),
                            0.0,
                            math.inf,
                        )
                    )
                elif c_m == -1.0:
                    parts.append((1.0 + _LN2 * (kb + lam), 0.0, 1.0, math.inf))
                else:
                    parts.append(
                        (_sum_exp_poly(0.0, c_m, 1.0, math.inf), 0.0, 0.0, math.inf)
                    )
        elif sector.side == "inside":
            # width no longer grows along the tail: ceil(2^(lam*n)) = 1 there
            bc = 1 + shift
            if bc >= 0:
                parts.append((1.0, 0.0, 0.0, math.inf))
            if bc >= 1:
                for a_m, c_m in sides:
                    parts.append((mside(a_m, c_m, 1.0, float(bc)), 0.0, 0.0, math.inf))
        elif lam > 0:
            # outside rows keep |m| >= B(j) with B(j) >= 2^(lam*j - 1) once
            # 2^(lam*j) clears twice the negative shift
            n1 = lo
            if shift < 0:
                n1 = max(lo, (1.0 + math.log2(-shift)) / lam)
                parts.append((1.0, 0.0, 0.0, math.log2(-shift) / lam))  # m = 0
            for a_m, c_m in sides:
                if a_m > 0 or (a_m == 0 and c_m > 0):
                    return math.inf
                if a_m == 0 and not sup_mode and c_m >= -1.0:
                    return math.inf
                if a_m < 0:
                    # no credit for the widening hole; sound but coarse
                    parts.append((mside(a_m, c_m, 1.0, math.inf), 0.0, 0.0, math.inf))
                    continue
                # a_m == 0 with polynomial decay: the hole does the work
                if n1 > lo:
                    parts.append((mside(0.0, c_m, 1.0, math.inf), 0.0, 0.0, n1))
                if sup_mode:
                    parts.append((pow2f(-c_m), lam * c_m, 0.0, math.inf))
                else:
                    kpart = (1.0 + 1.0 / (-c_m - 1.0)) * pow2f(-(c_m + 1.0))
                    parts.append((kpart, lam * (c_m + 1.0), 0.0, math.inf))
        else:
            bc = max(1, 1 + shift)
            if shift <= -1:
                parts.append((1.0, 0.0, 0.0, math.inf))
            for a_m, c_m in sides:
                parts.append((mside(a_m, c_m, float(bc), math.inf), 0.0, 0.0, math.inf))
        atom_total = 0.0
        for kpart, de, df, hi_n in parts:
            if kpart == 0.0 or hi_n < lo:
                continue
            if sup_mode:
                grow = _sup_exp_poly(en + de, fn + df, lo, hi_n)
            else:
                grow = _sum_exp_poly(en + de, fn + df, lo, hi_n)
            if math.isinf(kpart) or math.isinf(grow):
                return math.inf
            atom_total += kpart * grow
        total += (float(atom.coeff) ** th) * atom_total
    if not sup_mode and th > 1.0 and len(piece.atoms) > 1:
        total *= float(len(piece.atoms)) ** th
    return total


def truncated_oracle(
    weight: ExpPolyWeight | Callable[[tuple[int, ...]], float],
    theta,
    radii: Sequence[int] | None = None,
    *,
    sector: Sector | None = None,
    blowup: float = BLOWUP_THRESHOLD,
    growth_factor: float = GROWTH_FACTOR,
    shell_ratio: float = SHELL_RATIO,
) -> TailClassification:
    """Classify l^theta membership from partial sums over nested windows.

    Declares Divergent when partial sums exceed the blow-up threshold or
    grow by at least ``growth_factor`` between the last two radii.
    Declares Convergent, with a geometric tail bound, when the per-shell
    contributions over the last three radii decay with ratio at most
    ``shell_ratio``.  Everything else is Inconclusive.  The verdict is
    deterministic given the radius schedule.
    """
    if isinstance(weight, ExpPolyWeight):
        pieces = weight.pieces
    else:
        if sector is None:
            raise ValueError("callable weights need an explicit sector")
        dummy = Atom(Fraction(1), tuple(CoordFactor() for _ in range(sector.dims)))
        pieces = (Piece(sector, (dummy,)),)  # atoms unused in callable mode

    eval_fn = None if isinstance(weight, ExpPolyWeight) else weight
    has_pair = any(isinstance(p.sector, PairSector) for p in pieces)
    dims = max(p.sector.dims for p in pieces)
    if radii is None:
        radii = default_radii(dims, has_pair)
    radii = sorted({int(r) for r in radii})
    if has_pair:
        # keep only radii whose inside rows fit the per-row step cap, so
        # that complete shells stay certifiable
        kept = []
        for r in radii:
            fits = True
            for piece in pieces:
                sec = piece.sector
                if isinstance(sec, PairSector) and sec.side == "inside":
                    n_edge = -r if sec.n_domain == "Nneg" else r
                    if 2 * sec.m_bound(n_edge) + 1 > _ROW_STEP_CAP:
                        fits = False
                        break
            if not fits:
                break
            kept.append(r)
        radii = kept or radii[:1]
    theta_f = None if theta.is_inf else float(theta)

    # per-piece cached flat arrays for grid sectors (largest window once)
    grid_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for idx, piece in enumerate(pieces):
        if isinstance(piece.sector, PairSector) or eval_fn is not None:
            continue
        grid_cache[idx] = _grid_values(piece, max(radii))

    def shell_contrib(idx: int, r_prev: int, r: int, scale: float) -> _RowSum:
        piece = pieces[idx]
        if eval_fn is not None:
            total, sup = 0.0, 0.0
            flagged = False
            if isinstance(piece.sector, PairSector):
                if piece.sector.side == "outside":
                    raise UnsupportedWeight(
                        "callable weights on outside pair sectors are not supported"
                    )
                for n in piece.sector.n_values(r):
                    if abs(n) <= r_prev:
                        continue
                    bound = piece.sector.m_bound(n)
                    half = min(bound, _ROW_STEP_CAP // 2)
                    flagged = flagged or bound > half
                    for m in range(-half, half + 1):
                        val = eval_fn((n, m))
                        t = val if theta_f is None else (val**theta_f if val > 0 else 0.0)
                        total += t
                        sup = max(sup, t)
                return _RowSum(total, sup, flagged)
            for pt in piece.sector.iter_window(r):
                if piece.sector.point_radius(pt) <= r_prev:
                    continue
                val = eval_fn(pt)
                t = val if theta_f is None else (val**theta_f if val > 0 else 0.0)
                total += t
                sup = max(sup, t)
            return _RowSum(total, sup, flagged)
        if isinstance(piece.sector, PairSector):
            total, sup = 0.0, 0.0
            flagged = False
            for n in piece.sector.n_values(r):
                if abs(n) <= r_prev:
                    continue
                row = _pair_row(piece, n, theta_f, scale=max(scale, total))
                total += row.value
                sup = max(sup, row.sup)
                flagged = flagged or row.truncated_significant
            return _RowSum(total, sup, flagged)
        values, pt_radii = grid_cache[idx]
        mask = (pt_radii > r_prev) & (pt_radii <= r)
        vals = values[mask]
        if theta_f is None:
            sup = float(vals.max()) if vals.size else 0.0
            return _RowSum(sup, sup, False)
        with np.errstate(over="ignore", under="ignore"):
            powered = np.where(vals > 0, vals**theta_f, 0.0)
        return _RowSum(float(powered.sum()), 0.0, False)

    def pair_tail(radius: int) -> float:
        """Structural bound for the mass past ``radius``; see _pair_tail_bound."""
        out = 0.0
        if eval_fn is not None:
            return out
        for piece in pieces:
            if isinstance(piece.sector, PairSector):
                b = _pair_tail_bound(piece, radius, theta_f)
                out = max(out, b) if theta_f is None else out + b
        return out

    partials: list[float] = []
    shells: list[float] = []
    flagged_any = False
    running = 0.0
    r_prev = -1
    last_radius = radii[0]
    for r in radii:
        shell_total = 0.0
        for idx in range(len(pieces)):
            contrib = shell_contrib(idx, r_prev, r, running)
            flagged_any = flagged_any or contrib.truncated_significant
            if theta_f is None:
                shell_total = max(shell_total, contrib.value)
            else:
                shell_total += contrib.value
        if theta_f is None:
            running = max(running, shell_total)
        else:
            running += shell_total
        shells.append(shell_total)
        partials.append(running)
        last_radius = r
        r_prev = r
        if not math.isfinite(running) or running > blowup:
            # row masses on pair sectors can hump upward well inside a
            # convergent sum; a finite structural tail overrules the gate
            if not (has_pair and math.isfinite(pair_tail(r))):
                return TailClassification(
                    "Divergent", last_radius, partial_sum=running, growth=math.inf
                )

    if len(partials) >= 2 and partials[-2] > 0:
        g = partials[-1] / partials[-2]
        if g >= growth_factor:
            if not (has_pair and math.isfinite(pair_tail(last_radius))):
                return TailClassification(
                    "Divergent", last_radius, partial_sum=partials[-1], growth=g
                )

    # decaying shells certify nothing about the rows an exponentially
    # widening pair sector keeps past the window; bound those structurally
    beyond = pair_tail(last_radius)

    if len(shells) >= RATIO_WINDOW and not flagged_any and math.isfinite(beyond):
        window = shells[-RATIO_WINDOW:]
        if theta_f is None:
            # sup semantics: certify boundedness when newer shells stop
            # raising the running max (monotone tail within fp slack)
            flat = all(
                cur <= prev * (1.0 + 1e-12) for prev, cur in zip(window, window[1:])
            )
            if flat:
                return TailClassification(
                    "Convergent",
                    last_radius,
                    partial_sum=partials[-1],
                    tail_bound=max(window[-1], beyond),
                )
        else:
            ratios = []
            ok = True
            for prev, cur in zip(window, window[1:]):
                if prev <= 0.0:
                    if cur > 0.0:
                        ok = False
                    continue
                ratios.append(cur / prev)
            ratio_max = max(ratios) if ratios else 0.0
            if ok and ratio_max <= shell_ratio:
                last_shell = window[-1]
                tail = (
                    last_shell * ratio_max / (1.0 - ratio_max)
                    if ratio_max > 0
                    else 0.0
                )
                return TailClassification(
                    "Convergent",
                    last_radius,
                    partial_sum=partials[-1],
                    tail_bound=tail + beyond,
                )

    return TailClassification("Inconclusive", last_radius, partial_sum=partials[-1])


# ---------------------------------------------------------------------------
# the two directions of the sequence embedding, numerically
# ---------------------------------------------------------------------------

def sequence_norm(
    values: dict[tuple[int, ...], float],
    weight: ExpPolyWeight | Callable[[tuple[int, ...]], float],
    p,
) -> float:
    """The weighted l^p norm of a finitely supported sequence."""
    get = weight.evaluate if isinstance(weight, ExpPolyWeight) else weight
    terms = [get(pt) * abs(c) for pt, c in values.items()]
    if p.is_inf:
        return max(terms, default=0.0)
    pf = float(p)
    return sum(t**pf for t in terms) ** (1.0 / pf)


def holder_constant(u: ExpPolyWeight, v: ExpPolyWeight, r, s, radius: int) -> float:
    """The l^theta norm of u/v over the window, theta = compound(s, r).

    This is the constant of the positive direction: for sequences
    supported in the window, the weighted l^s norm against u is at most
    this constant times the weighted l^r norm against v.
    """
    from .exponents import compound

    theta = compound(s, r)
    ratios = [
        u.evaluate(pt) / v.evaluate(pt) for pt in dict.fromkeys(u.iter_points(radius))
    ]
    if theta.is_inf:
        return max(ratios, default=0.0)
    tf = float(theta)
    return sum(x**tf for x in ratios) ** (1.0 / tf)


def witness_norm_ratios(
    u: ExpPolyWeight,
    v: ExpPolyWeight,
    r,
    s,
    radii: Sequence[int] = (4, 8, 16),
) -> list[tuple[int, float]]:
    """Norm ratios of the canonical witness family across window radii.

    When u/v fails membership at the compound exponent, the sequence
    c = (u/v)^(theta/s) / u (for finite theta; a scaled delta at the
    worst index when theta is infinite) drives the ratio of the two
    weighted norms to infinity; callers check the growth across radii.
    """
    from .exponents import compound

    theta = compound(s, r)
    out = []
    for radius in radii:
        points = list(dict.fromkeys(u.iter_points(radius)))
        if theta.is_inf:
            ratio = max(u.evaluate(pt) / v.evaluate(pt) for pt in points)
        else:
            beta = float(theta) / float(s)
            coeffs = {
                pt: (u.evaluate(pt) / v.evaluate(pt)) ** beta / u.evaluate(pt)
                for pt in points
            }
            num = sequence_norm(coeffs, u, s)
            den = sequence_norm(coeffs, v, r)
            ratio = num / den if den > 0 else math.inf
        out.append((radius, ratio))
    return out
