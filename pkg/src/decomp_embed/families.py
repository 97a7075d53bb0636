"""Registered model families.

Each family bundles four things behind one name:

* a structured covering (affine images of a fixed base set over an index
  scheme),
* the closed-form weight of its sequence space on the matching lattice,
* quotient weights ready for the summability tests of the decision engine,
* optional sharpened criteria that extend the generic tests in the regime
  q in (2, inf).

The closed forms use normal-form surrogates for the operator norms that are
exact for the isotropic families and accurate up to uniform constants for
the anisotropic ones; :mod:`decomp_embed.weights` cross-checks the two
representations on finite windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .covering import (
    AnnulusSet,
    BallSet,
    BoxSet,
    CoorbitScheme,
    Covering,
    DiagonalScheme,
    Index,
    N0Scheme,
    ShearletScheme,
    ZScheme,
    ZdPuncturedScheme,
    cone_trapezoid,
    custom_covering_from_json,
)
from .errors import InvalidParams, SchemaError
from .exponents import INF, ExtExponent, lower_conjugate
from .seqspace import (
    Atom,
    CoordFactor,
    ExpPolyWeight,
    LineSector,
    PairSector,
    Piece,
    ProductSector,
    RadialSector,
    rat_from_json,
)

__all__ = [
    "FAMILY_NAMES",
    "get_family",
    "covering_from_json",
]

_TWO = ExtExponent(2)

# Evidence anchors for the family-specific sharpened criteria.  These are
# opaque labels fixed by the output contract; downstream tooling matches on
# them verbatim.
ANCHOR_INHOM_REFINED = "Ex 7.2 (refined)"
ANCHOR_ALPHA_REFINED = "Ex 7.3 (refined)"
ANCHOR_SHEARLET_REFINED = "Ex 7.4 (refined)"


def _zeros(d: int) -> tuple:
    return tuple([Fraction(0)] * d)


def _diag(values) -> tuple:
    vals = list(values)
    d = len(vals)
    return tuple(
        tuple(vals[i] if i == j else Fraction(0) for j in range(d)) for i in range(d)
    )


def _scaled(atom: Atom, factor) -> Atom:
    return Atom(atom.coeff * Fraction(factor), atom.factors, atom.radial_pow)


def _kind_atoms(kind: str, det_atom: Atom, norm_atoms: list[Atom]) -> tuple[Atom, ...]:
    """Assemble the atom list for one weight kind.

    ``det_atom`` is the pure determinant power, ``norm_atoms`` the terms of
    (|b|^k + ||T||^k) times that power for k >= 1; an empty list means
    k == 0, where the norm polynomial collapses to a constant.
    """
    if kind == "v0":
        return (det_atom,)
    if kind == "w_k":
        if not norm_atoms:
            return (_scaled(det_atom, 2),)
        return tuple(norm_atoms)
    # u_kpq and w_t share the formula 1 + |b|^k + ||T||^k
    if not norm_atoms:
        return (_scaled(det_atom, 3),)
    return (det_atom, *norm_atoms)


def _pos(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(0)


def _cmp_word(lhs: Fraction, rhs: Fraction) -> str:
    if lhs > rhs:
        return "above"
    if lhs == rhs:
        return "at"
    return "below"


def _int_param(doc: dict, key: str, family: str, *, default=None, minimum=1) -> int:
    if key not in doc:
        if default is None:
            raise InvalidParams(f"{family}: missing parameter {key!r}")
        return default
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise InvalidParams(f"{family}: parameter {key!r} must be an integer")
    if val < minimum:
        raise InvalidParams(f"{family}: parameter {key!r} must be >= {minimum}")
    return val


def _rat_param(doc: dict, key: str, family: str, *, default=None) -> Fraction:
    if key not in doc:
        if default is None:
            raise InvalidParams(f"{family}: missing parameter {key!r}")
        return Fraction(default)
    try:
        return rat_from_json(doc[key])
    except (ValueError, TypeError) as exc:
        raise InvalidParams(f"{family}: parameter {key!r}: {exc}") from exc


def _check_keys(doc: dict, allowed: set[str], family: str) -> None:
    if not isinstance(doc, dict):
        raise InvalidParams(f"{family}: parameters must be a JSON object")
    extra = sorted(set(doc) - allowed)
    if extra:
        raise InvalidParams(f"{family}: unknown parameter(s) {extra}")


class Family:
    """Common surface of a registered family; subclasses fill in the math."""

    name = ""
    symbolic_mode = "exact"  # "exact" or "ratio" agreement with the covering
    khintchine: Optional[str] = None  # "N0", "full", or None when unavailable

    def parse_params(self, doc: dict):
        raise NotImplementedError

    def covering(self, params) -> Covering:
        raise NotImplementedError

    def space_weight(self, params, r: ExtExponent) -> ExpPolyWeight:
        raise NotImplementedError

    def weight_symbolic(
        self, params, kind: str, k: int, p: ExtExponent, t: ExtExponent
    ) -> ExpPolyWeight:
        raise NotImplementedError

    def quotient_weight(
        self, params, k: int, p: ExtExponent, t: ExtExponent, r: ExtExponent
    ) -> ExpPolyWeight:
        """The ratio w^(t)/u that the summability criteria test."""
        w = self.weight_symbolic(params, "w_t", k, p, t)
        return w.quotient(self.space_weight(params, r))

    def khintchine_quotient(
        self, params, k: int, p: ExtExponent, t: ExtExponent, r: ExtExponent
    ) -> Optional[ExpPolyWeight]:
        """w^(t)/u restricted to the expanding part of the covering.

        Families whose expanding part differs from the whole index set by
        more than finitely many indices restrict explicitly; None means the
        restriction is not modeled and the corresponding tests are skipped.
        """
        if self.khintchine is None:
            return None
        quo = self.quotient_weight(params, k, p, t, r)
        if self.khintchine == "full":
            return quo
        (piece,) = quo.pieces
        return ExpPolyWeight((Piece(LineSector("N0"), piece.atoms),))

    def to_point(self, index: Index) -> Optional[tuple]:
        return index

    def refined_criteria(
        self, params, k: int, p: ExtExponent, q: ExtExponent, r: ExtExponent
    ) -> list[dict]:
        return []


# ---------------------------------------------------------------------------
# dyadic families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicParams:
    d: int
    s: Fraction


class HomBesovFamily(Family):
    """Dyadic annuli 2^n A over n in Z with weight 2^(s n)."""

    name = "hom_besov"
    khintchine = "N0"

    def parse_params(self, doc: dict) -> DyadicParams:
        _check_keys(doc, {"d", "s"}, self.name)
        return DyadicParams(
            _int_param(doc, "d", self.name, default=1),
            _rat_param(doc, "s", self.name, default=0),
        )

    def covering(self, params: DyadicParams) -> Covering:
        d = params.d
        base = AnnulusSet(d, Fraction(1, 4), Fraction(4))

        def transform(i: Index):
            (n,) = i
            return _diag([Fraction(2) ** n] * d), _zeros(d)

        return Covering(
            label=f"hom_besov(d={d})",
            dimension=d,
            scheme=ZScheme(),
            transform=transform,
            base_set=lambda i: base,
        )

    def space_weight(self, params: DyadicParams, r: ExtExponent) -> ExpPolyWeight:
        return ExpPolyWeight.single(LineSector("Z"), Atom.line(exp2=params.s))

    def weight_symbolic(self, params, kind, k, p, t):
        dp = p.reciprocal() - t.reciprocal()
        det_atom = Atom.line(exp2=params.d * dp)
        norm_atoms = [Atom.line(exp2=params.d * dp + k)] if k >= 1 else []
        return ExpPolyWeight.single(
            LineSector("Z"), *_kind_atoms(kind, det_atom, norm_atoms)
        )


class InhomBesovFamily(Family):
    """Dyadic annuli over n >= 1 plus a ball at the origin, weight 2^(s n)."""

    name = "inhom_besov"
    khintchine = "full"

    def parse_params(self, doc: dict) -> DyadicParams:
        _check_keys(doc, {"d", "s"}, self.name)
        return DyadicParams(
            _int_param(doc, "d", self.name, default=1),
            _rat_param(doc, "s", self.name, default=0),
        )

    def covering(self, params: DyadicParams) -> Covering:
        d = params.d
        annulus = AnnulusSet(d, Fraction(1, 4), Fraction(4))
        ball = BallSet(_zeros(d), Fraction(2))

        def transform(i: Index):
            (n,) = i
            return _diag([Fraction(2) ** n] * d), _zeros(d)

        return Covering(
            label=f"inhom_besov(d={d})",
            dimension=d,
            scheme=N0Scheme(),
            transform=transform,
            base_set=lambda i: ball if i == (0,) else annulus,
        )

    def space_weight(self, params: DyadicParams, r: ExtExponent) -> ExpPolyWeight:
        return ExpPolyWeight.single(LineSector("N0"), Atom.line(exp2=params.s))

    def weight_symbolic(self, params, kind, k, p, t):
        # T_n = 2^n id for every n >= 0, so one formula covers the whole ray
        dp = p.reciprocal() - t.reciprocal()
        det_atom = Atom.line(exp2=params.d * dp)
        norm_atoms = [Atom.line(exp2=params.d * dp + k)] if k >= 1 else []
        return ExpPolyWeight.single(
            LineSector("N0"), *_kind_atoms(kind, det_atom, norm_atoms)
        )

    def refined_criteria(self, params, k, p, q, r):
        if not _TWO < q < INF:
            return []
        thr = Fraction(k) + params.d * (p.reciprocal() - q.reciprocal())
        s = params.s
        word = _cmp_word(s, thr)
        suff = p <= q and (s > thr or (s == thr and r <= _TWO))
        nec = s > thr or (s == thr and r <= q)
        return [
            {
                "id": "S2",
                "anchor": ANCHOR_INHOM_REFINED,
                "role": "sufficient",
                "holds": suff,
                "detail": f"smoothness {word} threshold {thr}; equality admits r <= 2",
            },
            {
                "id": "N5",
                "anchor": ANCHOR_INHOM_REFINED,
                "role": "necessary",
                "holds": nec,
                "detail": f"smoothness {word} threshold {thr}; equality requires r <= q",
            },
        ]


# ---------------------------------------------------------------------------
# alpha modulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaModParams:
    d: int
    alpha: Fraction
    s: Fraction
    base_radius: Fraction


class AlphaModulationFamily(Family):
    """Balls |k|^a0 B_r shifted to |k|^a0 k, where a0 = alpha/(1 - alpha).

    The index lattice is Z^d without the origin and the space weight is
    |k|^(s/(1 - alpha)).  alpha = 0 recovers the uniform covering, and the
    limit alpha -> 1 leaves this scale, so alpha must stay in [0, 1).  The
    base radius is exposed because admissibility of the covering asks it to
    be large enough relative to alpha and d; the default suits the moderate
    alpha range this package exercises.
    """

    name = "alpha_modulation"
    khintchine = "full"

    def parse_params(self, doc: dict) -> AlphaModParams:
        _check_keys(doc, {"d", "alpha", "s", "base_radius"}, self.name)
        alpha = _rat_param(doc, "alpha", self.name, default=0)
        if not 0 <= alpha < 1:
            raise InvalidParams(f"{self.name}: alpha must lie in [0, 1)")
        radius = _rat_param(doc, "base_radius", self.name, default=2)
        if radius <= 0:
            raise InvalidParams(f"{self.name}: base_radius must be positive")
        return AlphaModParams(
            _int_param(doc, "d", self.name, default=1),
            alpha,
            _rat_param(doc, "s", self.name, default=0),
            radius,
        )

    @staticmethod
    def _a0(params: AlphaModParams) -> Fraction:
        return params.alpha / (1 - params.alpha)

    def covering(self, params: AlphaModParams) -> Covering:
        d = params.d
        a0 = self._a0(params)
        exact = params.alpha == 0 or (d == 1 and a0.denominator == 1)
        base = BallSet(_zeros(d), params.base_radius)

        def transform(i: Index):
            if params.alpha == 0:
                scale = Fraction(1)
            elif exact:
                scale = Fraction(abs(i[0])) ** a0.numerator
            else:
                norm2 = sum(x * x for x in i)
                scale = float(norm2) ** (float(a0) / 2.0)
            return _diag([scale] * d), tuple(scale * x for x in i)

        return Covering(
            label=f"alpha_modulation(d={d}, alpha={params.alpha})",
            dimension=d,
            scheme=ZdPuncturedScheme(d),
            transform=transform,
            base_set=lambda i: base,
            exact=exact,
        )

    def space_weight(self, params: AlphaModParams, r: ExtExponent) -> ExpPolyWeight:
        power = params.s / (1 - params.alpha)
        return ExpPolyWeight.single(
            RadialSector(params.d), Atom.radial(params.d, power)
        )

    def weight_symbolic(self, params, kind, k, p, t):
        a0 = self._a0(params)
        dp = p.reciprocal() - t.reciprocal()
        base = params.d * a0 * dp
        det_atom = Atom.radial(params.d, base)
        norm_atoms = []
        if k >= 1:
            # |b| = |k|^(a0 + 1) and ||T|| = |k|^a0, in that order
            norm_atoms = [
                Atom.radial(params.d, base + (a0 + 1) * k),
                Atom.radial(params.d, base + a0 * k),
            ]
        return ExpPolyWeight.single(
            RadialSector(params.d), *_kind_atoms(kind, det_atom, norm_atoms)
        )

    def refined_criteria(self, params, k, p, q, r):
        if not _TWO < q < INF:
            return []
        tail = _pos(lower_conjugate(q).reciprocal() - r.reciprocal())
        rhs = Fraction(k) + params.d * (
            params.alpha * (p.reciprocal() - q.reciprocal())
            + (1 - params.alpha) * tail
        )
        g = params.s
        word = _cmp_word(g, rhs)
        sharp = params.alpha == 0 and p == q
        cutoff = q if sharp else _TWO
        suff = p <= q and (g > rhs or (g == rhs and r <= cutoff))
        nec = g > rhs or (g == rhs and r <= q)
        cut_txt = "q" if sharp else "2"
        return [
            {
                "id": "S2",
                "anchor": ANCHOR_ALPHA_REFINED,
                "role": "sufficient",
                "holds": suff,
                "detail": f"weight exponent {word} threshold {rhs}; "
                f"equality admits r <= {cut_txt}",
            },
            {
                "id": "N5",
                "anchor": ANCHOR_ALPHA_REFINED,
                "role": "necessary",
                "holds": nec,
                "detail": f"weight exponent {word} threshold {rhs}; "
                "equality requires r <= q",
            },
        ]


# ---------------------------------------------------------------------------
# shearlet smoothness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShearletSmoothnessParams:
    s: Fraction


_SWAP = ((0, 1), (1, 0))


class ShearletSmoothnessFamily(Family):
    """Parabolic cone covering of the plane with weight 2^(2 n s).

    Cone indices are (n, m, eps, delta) with |m| <= 2^n; the extra index
    (0,) caps the low frequencies and carries no asymptotic content, so the
    closed forms live on the (n, m) pairs alone.
    """

    name = "shearlet_smoothness"
    symbolic_mode = "ratio"
    khintchine = "full"

    def parse_params(self, doc: dict) -> ShearletSmoothnessParams:
        _check_keys(doc, {"s"}, self.name)
        return ShearletSmoothnessParams(_rat_param(doc, "s", self.name, default=0))

    def covering(self, params: ShearletSmoothnessParams) -> Covering:
        base = cone_trapezoid(Fraction(1, 3), Fraction(3), Fraction(-1), Fraction(1))

        def transform(i: Index):
            if i == (0,):
                return _diag([Fraction(4)] * 2), (Fraction(-4), Fraction(0))
            n, m, eps, delta = i
            rows = [
                (Fraction(4) ** n, Fraction(0)),
                (Fraction(2) ** n * m, Fraction(2) ** n),
            ]
            if delta:
                rows.reverse()
            if eps < 0:
                rows = [tuple(-x for x in row) for row in rows]
            return tuple(rows), _zeros(2)

        return Covering(
            label="shearlet_smoothness",
            dimension=2,
            scheme=ShearletScheme(),
            transform=transform,
            base_set=lambda i: base,
        )

    @staticmethod
    def _sector() -> PairSector:
        return PairSector("N0", Fraction(1), "inside", 0)

    def to_point(self, index: Index) -> Optional[tuple]:
        if index == (0,):
            return None
        n, m, _eps, _delta = index
        return (n, m)

    def space_weight(self, params, r: ExtExponent) -> ExpPolyWeight:
        return ExpPolyWeight.single(self._sector(), Atom.pair(n_exp2=2 * params.s))

    def weight_symbolic(self, params, kind, k, p, t):
        dp = p.reciprocal() - t.reciprocal()
        det_atom = Atom.pair(n_exp2=3 * dp)
        # ||T|| is comparable to 2^(2n) throughout the cone
        norm_atoms = [Atom.pair(n_exp2=3 * dp + 2 * k)] if k >= 1 else []
        return ExpPolyWeight.single(
            self._sector(), *_kind_atoms(kind, det_atom, norm_atoms)
        )

    def refined_criteria(self, params, k, p, q, r):
        if not _TWO < q < INF:
            return []
        tail = _pos(lower_conjugate(q).reciprocal() - r.reciprocal())
        thr = (
            Fraction(k)
            + Fraction(3, 2) * (p.reciprocal() - q.reciprocal())
            + Fraction(1, 2) * tail
        )
        s = params.s
        word = _cmp_word(s, thr)
        suff = p <= q and (s > thr or (s == thr and r <= _TWO))
        nec = s > thr or (s == thr and r <= q)
        return [
            {
                "id": "S2",
                "anchor": ANCHOR_SHEARLET_REFINED,
                "role": "sufficient",
                "holds": suff,
                "detail": f"smoothness {word} threshold {thr}; equality admits r <= 2",
            },
            {
                "id": "N5",
                "anchor": ANCHOR_SHEARLET_REFINED,
                "role": "necessary",
                "holds": nec,
                "detail": f"smoothness {word} threshold {thr}; equality requires r <= q",
            },
        ]


# ---------------------------------------------------------------------------
# shearlet coorbit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoorbitParams:
    c: Fraction
    alpha: Fraction
    beta: Fraction


class ShearletCoorbitFamily(Family):
    """Shearlet-type group covering over (n, m) in Z^2 with anisotropy c.

    The operator norm of T = [[2^n, 0], [2^(n c) m, 2^(n c)]] behaves like
    2^n + 2^(n c)(1 + |m|); the index set splits into four sectors on which
    a single term dominates, and all closed forms are built per sector.
    The space weight is det^(1/2 - 1/r) * 2^(-n alpha) * ||T||^beta.
    """

    name = "shearlet_coorbit"
    symbolic_mode = "ratio"
    khintchine = None

    def parse_params(self, doc: dict) -> CoorbitParams:
        _check_keys(doc, {"c", "alpha", "beta"}, self.name)
        return CoorbitParams(
            _rat_param(doc, "c", self.name, default=1),
            _rat_param(doc, "alpha", self.name, default=0),
            _rat_param(doc, "beta", self.name, default=0),
        )

    def covering(self, params: CoorbitParams) -> Covering:
        c = params.c
        exact = c.denominator == 1
        base = cone_trapezoid(Fraction(1, 2), Fraction(2), Fraction(-1), Fraction(1))

        def transform(i: Index):
            n, m, eps = i
            if exact:
                p2n = Fraction(2) ** n
                p2nc = Fraction(2) ** (n * c.numerator)
            else:
                p2n = 2.0 ** n
                p2nc = 2.0 ** (n * float(c))
            rows = [(p2n, p2n * 0), (p2nc * m, p2nc)]
            if eps < 0:
                rows = [tuple(-x for x in row) for row in rows]
            return tuple(rows), _zeros(2)

        return Covering(
            label=f"shearlet_coorbit(c={c})",
            dimension=2,
            scheme=CoorbitScheme(),
            transform=transform,
            base_set=lambda i: base,
            exact=exact,
        )

    def to_point(self, index: Index) -> Optional[tuple]:
        n, m, _eps = index
        return (n, m)

    @staticmethod
    def _sectors(params: CoorbitParams):
        """The four dominance sectors with (a, rho): ||T|| ~ 2^(a n) |m|^rho."""
        c = params.c
        if c >= 1:
            sectors = (
                PairSector("N0", Fraction(0), "outside", 0),
                PairSector("N0", Fraction(0), "inside", -1),
                PairSector("Nneg", 1 - c, "outside", 0),
                PairSector("Nneg", 1 - c, "inside", -1),
            )
            surrogates = ((c, 1), (c, 0), (c, 1), (Fraction(1), 0))
        else:
            sectors = (
                PairSector("N0", 1 - c, "inside", 0),
                PairSector("N0", 1 - c, "outside", 1),
                PairSector("Nneg", Fraction(0), "outside", 0),
                PairSector("Nneg", Fraction(0), "inside", -1),
            )
            surrogates = ((Fraction(1), 0), (c, 1), (c, 1), (c, 0))
        return sectors, surrogates

    def space_weight(self, params: CoorbitParams, r: ExtExponent) -> ExpPolyWeight:
        c, alpha, beta = params.c, params.alpha, params.beta
        base = -(1 + c) * (Fraction(1, 2) - r.reciprocal()) - alpha
        sectors, surrogates = self._sectors(params)
        pieces = []
        for sector, (a, rho) in zip(sectors, surrogates):
            atom = Atom.pair(n_exp2=base + a * beta, m_power=rho * beta)
            pieces.append(Piece(sector, (atom,)))
        return ExpPolyWeight(tuple(pieces))

    def weight_symbolic(self, params, kind, k, p, t):
        c = params.c
        dp = p.reciprocal() - t.reciprocal()
        det_exp = (1 + c) * dp
        sectors, surrogates = self._sectors(params)
        pieces = []
        for sector, (a, rho) in zip(sectors, surrogates):
            det_atom = Atom.pair(n_exp2=det_exp)
            norm_atoms = (
                [Atom.pair(n_exp2=det_exp + a * k, m_power=rho * k)] if k >= 1 else []
            )
            pieces.append(Piece(sector, _kind_atoms(kind, det_atom, norm_atoms)))
        return ExpPolyWeight(tuple(pieces))


# ---------------------------------------------------------------------------
# diagonal group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalParams:
    d: int
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]


class DiagonalFamily(Family):
    """Coverings by diagonal dilations diag(eps_l 2^(-k_l)) of a fixed box.

    Weights are orthant-wise exponentials: coordinate l contributes
    2^(k_l (alpha_l + 1/2 - 1/r)) on k_l >= 0 and the beta exponent on
    k_l < 0.  The sign multiplicities eps collapse onto the k lattice.
    """

    name = "diagonal"
    symbolic_mode = "ratio"
    khintchine = None

    def parse_params(self, doc: dict) -> DiagonalParams:
        _check_keys(doc, {"d", "alpha", "beta"}, self.name)
        d = _int_param(doc, "d", self.name, default=1)

        def vector(key: str) -> tuple[Fraction, ...]:
            # a top-level list is always per-coordinate; scalars broadcast
            val = doc.get(key, 0)
            if isinstance(val, list):
                if len(val) != d:
                    raise InvalidParams(
                        f"{self.name}: parameter {key!r} must have {d} entries"
                    )
                vals = val
            else:
                vals = [val] * d
            try:
                return tuple(rat_from_json(v) for v in vals)
            except (ValueError, TypeError) as exc:
                raise InvalidParams(f"{self.name}: parameter {key!r}: {exc}") from exc

        return DiagonalParams(d, vector("alpha"), vector("beta"))

    def covering(self, params: DiagonalParams) -> Covering:
        d = params.d
        base = BoxSet((Fraction(1, 2),) * d, (Fraction(2),) * d)

        def transform(i: Index):
            ks, eps = i[:d], i[d:]
            return _diag(
                [eps[j] * Fraction(2) ** (-ks[j]) for j in range(d)]
            ), _zeros(d)

        return Covering(
            label=f"diagonal(d={d})",
            dimension=d,
            scheme=DiagonalScheme(d),
            transform=transform,
            base_set=lambda i: base,
        )

    def to_point(self, index: Index) -> Optional[tuple]:
        return index[: self.dim_of(index)]

    @staticmethod
    def dim_of(index: Index) -> int:
        return len(index) // 2

    @staticmethod
    def _sector(d: int) -> ProductSector:
        return ProductSector(tuple(LineSector("Z") for _ in range(d)))

    def space_weight(self, params: DiagonalParams, r: ExtExponent) -> ExpPolyWeight:
        shift = Fraction(1, 2) - r.reciprocal()
        factors = tuple(
            CoordFactor(a + shift, b + shift, 0, 0)
            for a, b in zip(params.alpha, params.beta)
        )
        return ExpPolyWeight.single(self._sector(params.d), Atom(Fraction(1), factors))

    def weight_symbolic(self, params, kind, k, p, t):
        d = params.d
        dp = p.reciprocal() - t.reciprocal()
        det_atom = Atom(
            Fraction(1), tuple(CoordFactor.symmetric(-dp) for _ in range(d))
        )
        norm_atoms = []
        if k >= 1:
            # ||T|| = max_l 2^(-k_l), comparable to the sum over l
            for axis in range(d):
                factors = tuple(
                    CoordFactor.symmetric(-dp - (k if j == axis else 0))
                    for j in range(d)
                )
                norm_atoms.append(Atom(Fraction(1), factors))
        return ExpPolyWeight.single(
            self._sector(d), *_kind_atoms(kind, det_atom, norm_atoms)
        )


FAMILIES = {
    fam.name: fam
    for fam in (
        HomBesovFamily(),
        InhomBesovFamily(),
        AlphaModulationFamily(),
        ShearletSmoothnessFamily(),
        ShearletCoorbitFamily(),
        DiagonalFamily(),
    )
}

FAMILY_NAMES = tuple(FAMILIES)


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise InvalidParams(
            f"unknown family {name!r}; expected one of {sorted(FAMILIES)}"
        ) from None


def covering_from_json(doc: object) -> Covering:
    """Build a covering from {"family": ..., "params": ...} or {"custom": ...}."""
    if not isinstance(doc, dict):
        raise SchemaError(f"covering document must be an object, got {type(doc).__name__}")
    if "custom" in doc:
        return custom_covering_from_json(doc["custom"])
    if "family" in doc:
        name = doc["family"]
        if name not in FAMILIES:
            raise SchemaError(f"unknown family {name!r} in covering document")
        fam = FAMILIES[name]
        params = fam.parse_params(doc.get("params", {}))
        return fam.covering(params)
    raise SchemaError("covering document needs a 'family' or 'custom' key")
