"""Classification of contact toric manifolds by their moment cones.

`classify` dispatches a moment cone to one of the cases of the
classification theorem:

    Free3D        rank 2, whole plane: T^3 with one of the forms alpha_n
    Lens3D        rank 2, pointed wedge: a lens space L(q, p)
    SplitProduct  nonzero lineality k: T^k x S^{2n-1-k}
    FreeBundle    rank >= 3, whole space: principal T^n-bundle over S^{n-1}
    GoodCone      rank >= 3, pointed and good: the cone is a complete invariant
    NotRealizable the cone fails the good-cone test

plus the invariants used along the way: homology of the three-dimensional
cases, lens canonical pairs, the orbit-space interval of a rank-2 wedge and
GL(n, Z) equivalence of cones.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional, Sequence, Tuple

from .cone import Cone, dual_cone, quotient_by_lineality, transform_cone
from .errors import CapExceeded, DegenerateWedge, InvalidInput, NotPrimitive, RankMismatch
from .goodness import GoodnessReport, is_good_facewise
from .lattice import (
    FiniteAbelianGroup,
    IntegerMatrix,
    LatticeVector,
    det2,
    quotient_invariants,
    rational_determinant,
    rational_inverse,
    rational_rank,
)

logger = logging.getLogger(__name__)

DEFAULT_RAY_CAP = 10


class Case(str, Enum):
    FREE_3D = "Free3D"
    LENS_3D = "Lens3D"
    FREE_BUNDLE = "FreeBundle"
    GOOD_CONE = "GoodCone"
    SPLIT_PRODUCT = "SplitProduct"
    NOT_REALIZABLE = "NotRealizable"


@dataclass(frozen=True)
class MomentInput:
    """A moment cone, plus the winding number for the whole-plane case.

    The whole plane is the moment cone of every form alpha_n on T^3, so the
    cone alone does not determine n there.
    """

    rank: int
    cone: Cone
    winding: Optional[int] = None

    def validate(self) -> None:
        """
        Raises:
            InvalidInput: If the rank is below 2, the cone has another rank, or
                a winding is given for anything but the whole plane
        """
        if self.rank < 2:
            raise InvalidInput(f"moment cones have rank at least 2, got {self.rank}")
        if self.cone.rank != self.rank:
            raise InvalidInput(f"cone of rank {self.cone.rank} given for rank {self.rank}")
        if self.winding is not None:
            if isinstance(self.winding, bool) or not isinstance(self.winding, int) or self.winding < 1:
                raise InvalidInput(f"winding must be a positive integer, got {self.winding!r}")
            if self.rank != 2 or not self.cone.is_full_space():
                raise InvalidInput("a winding number is only meaningful for the whole plane in rank 2")


@dataclass(frozen=True)
class LensInterval:
    """Orbit-space interval [t1, t2] of a non-free three-dimensional action.

    The endpoints are the directions of the two edge weights; t2 - t1 is the
    counterclockwise angle from mu1 to mu2 plus `extra_turns` full turns.

    Attributes:
        mu1, mu2: Endpoint weights
        tan_t1, tan_t2: Slopes of the endpoints, None for vertical directions
        arc: "short" (below a half-turn), "half-turn-multiple" or "long"
    """

    mu1: LatticeVector
    mu2: LatticeVector
    tan_t1: Optional[Fraction]
    tan_t2: Optional[Fraction]
    arc: str
    extra_turns: int = 0

    def to_dict(self) -> dict:
        return {
            "mu1": list(self.mu1.coords),
            "mu2": list(self.mu2.coords),
            "tan_t1": str(self.tan_t1) if self.tan_t1 is not None else None,
            "tan_t2": str(self.tan_t2) if self.tan_t2 is not None else None,
            "arc": self.arc,
            "extra_turns": self.extra_turns,
        }


@dataclass(frozen=True)
class ClassificationRecord:
    """One case of the classification with the payload that case carries."""

    case: Case
    rank: int
    model: str
    cone: Cone
    winding: Optional[int] = None
    winding_defaulted: bool = False
    lens: Optional[Tuple[int, int]] = None
    homology: Optional[Tuple[FiniteAbelianGroup, FiniteAbelianGroup]] = None
    interval: Optional[LensInterval] = None
    base_sphere_dim: Optional[int] = None
    bundle_classes: Optional[FiniteAbelianGroup] = None
    lineality: Optional[int] = None
    quotient_cone: Optional[Cone] = None
    goodness: Optional[GoodnessReport] = field(default=None, compare=False)
    reason: Optional[str] = None

    @property
    def is_realizable(self) -> bool:
        return self.case is not Case.NOT_REALIZABLE

    def summary(self) -> str:
        if self.case is Case.FREE_3D:
            return f"Free3D n={self.winding} {self.model}"
        if self.case is Case.LENS_3D:
            q, p = self.lens
            return f"Lens3D q={q} p={p} H2={self.homology[1]}"
        if self.case is Case.FREE_BUNDLE:
            return f"FreeBundle base=S^{self.base_sphere_dim} classes={self.bundle_classes}"
        if self.case is Case.SPLIT_PRODUCT:
            return f"SplitProduct k={self.lineality} {self.model}"
        if self.case is Case.GOOD_CONE:
            return f"GoodCone rank={self.rank} normals={len(self.cone.normals)}"
        if self.reason is not None:
            return f"NotRealizable: {self.reason}"
        return f"NotRealizable: {self.goodness.summary()}"

    def to_dict(self) -> dict:
        data = {
            "case": self.case.value,
            "rank": self.rank,
            "model": self.model,
            "normals": [list(v.coords) for v in self.cone.normals],
        }
        if self.winding is not None:
            data["winding"] = self.winding
            data["winding_defaulted"] = self.winding_defaulted
        if self.lens is not None:
            data["lens"] = {"q": self.lens[0], "p": self.lens[1]}
        if self.homology is not None:
            data["H1"] = str(self.homology[0])
            data["H2"] = str(self.homology[1])
        if self.interval is not None:
            data["interval"] = self.interval.to_dict()
        if self.base_sphere_dim is not None:
            data["base_sphere_dim"] = self.base_sphere_dim
            data["bundle_classes"] = str(self.bundle_classes)
        if self.lineality is not None:
            data["lineality"] = self.lineality
        if self.quotient_cone is not None:
            data["quotient_normals"] = [list(v.coords) for v in self.quotient_cone.normals]
        if self.reason is not None:
            data["reason"] = self.reason
        if self.goodness is not None and not self.goodness.is_good:
            data["failures"] = [f.to_dict() for f in self.goodness.failures]
        return data


# =============================================================================
# Three-dimensional invariants
# =============================================================================


def _require_rank2_primitive(*weights: LatticeVector) -> None:
    for mu in weights:
        if mu.rank != 2:
            raise RankMismatch(f"{mu} is not a rank-2 weight")
        if not mu.is_primitive():
            raise NotPrimitive(f"{mu} is not primitive")


def homology_3d(mu1: LatticeVector, mu2: LatticeVector) -> Tuple[FiniteAbelianGroup, FiniteAbelianGroup]:
    """H^1 and H^2 of the three-manifold with edge weights mu1, mu2.

    H^1 is the lattice of relations n1 mu1 + n2 mu2 = 0, H^2 is Z^2 modulo
    the span of the weights (Mayer-Vietoris over the two singular orbits).

    Raises:
        NotPrimitive: If either weight is not primitive
    """
    _require_rank2_primitive(mu1, mu2)
    relations = 2 - rational_rank([mu1.coords, mu2.coords], 2)
    h1 = FiniteAbelianGroup.free(relations)
    h2 = quotient_invariants([mu1, mu2], 2)
    return h1, h2


def _bezout(x: int, y: int) -> Tuple[int, int]:
    """(s, t) with s*x + t*y = gcd(x, y)."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def lens_canonical_form(mu1: LatticeVector, mu2: LatticeVector) -> Tuple[int, int]:
    """Canonical pair (q, p) of the wedge spanned by mu1 and mu2.

    q = |det(mu1, mu2)|. Completing mu1 to a basis (mu1, w) with det 1 and
    writing mu2 = a mu1 + det w gives a mod q; swapping the weights replaces
    a by its inverse, so the smaller of a and a^-1 mod q is returned. Negating
    a is not a symmetry: (1,0),(1,3) and (1,0),(-1,3) are inequivalent wedges.

    Raises:
        NotPrimitive: If either weight is not primitive
        DegenerateWedge: If the weights are parallel
    """
    _require_rank2_primitive(mu1, mu2)
    det = det2(mu1, mu2)
    if det == 0:
        raise DegenerateWedge(f"{mu1} and {mu2} are parallel")
    q = abs(det)
    if q == 1:
        return 1, 0
    s, t = _bezout(mu1[0], mu1[1])
    w = (-t, s)
    a = det2(mu2, w) % q
    return q, min(a, pow(a, -1, q))


def lens_interval(mu1: LatticeVector, mu2: LatticeVector, extra_turns: int = 0) -> LensInterval:
    """Endpoints and arc class of the orbit-space interval from mu1 to mu2.

    Raises:
        NotPrimitive: If either weight is not primitive
    """
    _require_rank2_primitive(mu1, mu2)
    if extra_turns < 0:
        raise InvalidInput("extra_turns must be nonnegative")

    def slope(mu: LatticeVector) -> Optional[Fraction]:
        return Fraction(mu[1], mu[0]) if mu[0] != 0 else None

    det = det2(mu1, mu2)
    if det == 0:
        arc = "half-turn-multiple"
    elif det > 0 and extra_turns == 0:
        arc = "short"
    else:
        arc = "long"
    return LensInterval(mu1, mu2, slope(mu1), slope(mu2), arc, extra_turns)


def bundle_class_group(rank: int) -> FiniteAbelianGroup:
    """H^2(S^{rank-1}, Z^rank): principal T^rank-bundles over the sphere."""
    return FiniteAbelianGroup.free(rank) if rank - 1 == 2 else FiniteAbelianGroup.trivial()


def _lens_model(q: int, p: int) -> str:
    if q == 1:
        return "S^3"
    if q == 2:
        return "RP^3"
    return f"L({q},{p})"


def edge_weights(C: Cone) -> Tuple[LatticeVector, LatticeVector]:
    """The two boundary weights of a rank-2 cone, ordered counterclockwise through C.

    For a half-plane these are the two directions of its boundary line.

    Raises:
        InvalidInput: If C is not a full-dimensional rank-2 cone with a boundary
    """
    if C.rank != 2 or C.is_full_space() or not C.is_full_dimensional:
        raise InvalidInput(f"{C} is not a rank-2 wedge or half-plane")
    if C.lineality_dim == 1:
        line = C.lineality_basis[0]
        return (line, -line) if det2(C.normals[0], line) < 0 else (-line, line)
    mu1, mu2 = C.rays
    return (mu1, mu2) if det2(mu1, mu2) > 0 else (mu2, mu1)


# =============================================================================
# Dispatch
# =============================================================================


def _classify_rank2(moment: MomentInput) -> ClassificationRecord:
    C = moment.cone
    if C.is_full_space():
        defaulted = moment.winding is None
        winding = 1 if defaulted else moment.winding
        if defaulted:
            logger.warning("No winding number given for the whole plane; using n = 1")
        return ClassificationRecord(
            case=Case.FREE_3D,
            rank=2,
            model="T^3",
            cone=C,
            winding=winding,
            winding_defaulted=defaulted,
            homology=(FiniteAbelianGroup.free(3), FiniteAbelianGroup.free(3)),
        )
    mu1, mu2 = edge_weights(C)
    if C.lineality_dim == 1:
        return ClassificationRecord(
            case=Case.SPLIT_PRODUCT,
            rank=2,
            model="T^1 x S^2",
            cone=C,
            homology=homology_3d(mu1, mu2),
            interval=lens_interval(mu1, mu2),
            lineality=1,
            goodness=is_good_facewise(C),
        )
    q, p = lens_canonical_form(mu1, mu2)
    return ClassificationRecord(
        case=Case.LENS_3D,
        rank=2,
        model=_lens_model(q, p),
        cone=C,
        lens=(q, p),
        homology=homology_3d(mu1, mu2),
        interval=lens_interval(mu1, mu2),
    )


def _classify_higher(moment: MomentInput) -> ClassificationRecord:
    C = moment.cone
    n = moment.rank
    if C.is_full_space():
        return ClassificationRecord(
            case=Case.FREE_BUNDLE,
            rank=n,
            model=f"principal T^{n}-bundle over S^{n - 1}",
            cone=C,
            base_sphere_dim=n - 1,
            bundle_classes=bundle_class_group(n),
        )

    # The lineality face is one of the faces checked, which forces the
    # projected cone to be a unimodular simplicial cone as well as good.
    report = is_good_facewise(C)
    k = C.lineality_dim
    if not report.is_good:
        return ClassificationRecord(
            case=Case.NOT_REALIZABLE,
            rank=n,
            model="not the moment cone of a contact toric manifold",
            cone=C,
            lineality=k if k else None,
            goodness=report,
        )
    if k:
        quotient, _ = quotient_by_lineality(C)
        return ClassificationRecord(
            case=Case.SPLIT_PRODUCT,
            rank=n,
            model=f"T^{k} x S^{2 * n - 1 - k}",
            cone=C,
            lineality=k,
            quotient_cone=quotient,
            goodness=report,
        )
    return ClassificationRecord(
        case=Case.GOOD_CONE,
        rank=n,
        model=f"contact toric manifold of dimension {2 * n - 1}",
        cone=C,
        goodness=report,
    )


def _empty_interior_record(moment: MomentInput) -> ClassificationRecord:
    C = moment.cone
    k = C.lineality_dim
    return ClassificationRecord(
        case=Case.NOT_REALIZABLE,
        rank=moment.rank,
        model="not the moment cone of a contact toric manifold",
        cone=C,
        lineality=k if k else None,
        reason=f"EMPTY INTERIOR (dimension {C.dimension} of {moment.rank})",
    )


def classify(moment: MomentInput) -> ClassificationRecord:
    """Classify a moment cone.

    A cone with empty interior is never a moment cone and is reported as
    NotRealizable.

    Raises:
        InvalidInput: If the rank is below 2 or the winding is misplaced
    """
    moment.validate()
    if not moment.cone.is_full_dimensional:
        logger.info(f"{moment.cone} has empty interior")
        return _empty_interior_record(moment)
    record = _classify_rank2(moment) if moment.rank == 2 else _classify_higher(moment)
    logger.debug(f"Classified {moment.cone} as {record.case.value}")
    return record


# =============================================================================
# Equivalence
# =============================================================================


@dataclass(frozen=True)
class EquivalenceResult:
    matrix: Optional[IntegerMatrix]
    cap_exceeded: bool = False
    candidates_checked: int = 0

    @property
    def equivalent(self) -> bool:
        return self.matrix is not None

    def summary(self) -> str:
        if self.cap_exceeded:
            return "UNDECIDED: ray cap exceeded"
        if self.matrix is None:
            return "NOT EQUIVALENT"
        return f"EQUIVALENT A={self.matrix}"

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "cap_exceeded": self.cap_exceeded,
            "candidates_checked": self.candidates_checked,
            "matrix": [list(row) for row in self.matrix.entries] if self.matrix is not None else None,
        }


def _columns(vectors: Sequence[LatticeVector]) -> list:
    return [[v[i] for v in vectors] for i in range(len(vectors))]


def _solve_change_of_basis(source_inverse: list, targets: Sequence[LatticeVector]) -> Optional[IntegerMatrix]:
    """The A with A s_i = t_i, given the inverse of the matrix with columns s_i, if A is unimodular."""
    target_columns = _columns(targets)
    n = len(targets)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            value = sum((target_columns[i][m] * source_inverse[m][j] for m in range(n)), Fraction(0))
            if value.denominator != 1:
                return None
            row.append(int(value))
        entries.append(tuple(row))
    A = IntegerMatrix(tuple(entries), n)
    return A if A.is_unimodular() else None


def _pointed_equivalence(C1: Cone, C2: Cone, ray_cap: int) -> EquivalenceResult:
    """Ray-matching search between pointed full-dimensional cones.

    Orientation-preserving witnesses are preferred; the first
    orientation-reversing one is kept as a fallback.
    """
    n = C1.rank
    rays1, rays2 = list(C1.rays), list(C2.rays)
    if len(rays1) > ray_cap:
        logger.warning(f"Equivalence search skipped: {len(rays1)} rays exceed the cap of {ray_cap}")
        return EquivalenceResult(None, cap_exceeded=True)

    if n == 2 and lens_canonical_form(*edge_weights(C1)) != lens_canonical_form(*edge_weights(C2)):
        return EquivalenceResult(None)

    base = next(
        subset for subset in combinations(rays1, n)
        if rational_determinant(_columns(subset)) != 0
    )
    base_inverse = rational_inverse(_columns(base))
    target_set = set(rays2)
    fallback = None
    checked = 0
    for image in permutations(rays2, n):
        checked += 1
        A = _solve_change_of_basis(base_inverse, image)
        if A is None:
            continue
        if {A @ r for r in rays1} != target_set or transform_cone(C1, A) != C2:
            continue
        if A.determinant() == 1:
            logger.debug(f"Equivalence found after {checked} candidates")
            return EquivalenceResult(A, candidates_checked=checked)
        if fallback is None:
            fallback = A
    logger.debug(f"Ray matching checked {checked} candidates, witness found: {fallback is not None}")
    return EquivalenceResult(fallback, candidates_checked=checked)


def _block_identity(A: IntegerMatrix, k: int) -> IntegerMatrix:
    """diag(A, I_k)."""
    n = A.rows + k
    rows = []
    for i in range(n):
        if i < A.rows:
            rows.append(tuple(A.entries[i]) + (0,) * k)
        else:
            rows.append(tuple(int(i == j) for j in range(n)))
    return IntegerMatrix(tuple(rows), n)


def find_equivalence(C1: Cone, C2: Cone, ray_cap: int = DEFAULT_RAY_CAP) -> EquivalenceResult:
    """Search for A in GL(n, Z) with A·C1 = C2.

    Cones with lineality are compared through their pointed quotients and
    pointed cones with empty interior through their duals, so the search
    proper only ever sees pointed full-dimensional cones. There it matches a
    fixed set of n independent rays of C1 against every ordered n-subset of
    rays of C2.

    Raises:
        RankMismatch: If the cones have different ranks
    """
    if C1.rank != C2.rank:
        raise RankMismatch(f"cannot compare cones of rank {C1.rank} and {C2.rank}")
    n = C1.rank
    if C1 == C2:
        return EquivalenceResult(IntegerMatrix.identity(n))
    # Normal lists are only canonical for full-dimensional cones.
    if (
        (C1.is_full_dimensional and len(C1.normals) != len(C2.normals))
        or len(C1.rays) != len(C2.rays)
        or C1.lineality_dim != C2.lineality_dim
        or C1.dimension != C2.dimension
    ):
        return EquivalenceResult(None)

    k = C1.lineality_dim
    if k:
        Q1, B1 = quotient_by_lineality(C1)
        Q2, B2 = quotient_by_lineality(C2)
        result = find_equivalence(Q1, Q2, ray_cap)
        if result.matrix is None:
            return result
        # C_i = B_i^T (Q_i x Q^k), so B2^T diag(A, I) B1^-T maps C1 onto C2.
        A = B2.transpose() @ _block_identity(result.matrix, k) @ B1.inverse().transpose()
        return EquivalenceResult(A, candidates_checked=result.candidates_checked)

    if not C1.is_full_dimensional:
        # A·C1 = C2 exactly when A^-T·C1* = C2*.
        result = find_equivalence(dual_cone(C1), dual_cone(C2), ray_cap)
        if result.matrix is None:
            return result
        return EquivalenceResult(result.matrix.inverse().transpose(), candidates_checked=result.candidates_checked)

    return _pointed_equivalence(C1, C2, ray_cap)


def cones_equivalent(
    C1: Cone, C2: Cone, ray_cap: int = DEFAULT_RAY_CAP, raise_on_cap: bool = True
) -> Optional[IntegerMatrix]:
    """A unimodular A with A·C1 = C2, or None if the cones are inequivalent.

    Raises:
        RankMismatch: If the cones have different ranks
        CapExceeded: If the search is over the ray cap and raise_on_cap is set
    """
    result = find_equivalence(C1, C2, ray_cap)
    if result.cap_exceeded and raise_on_cap:
        raise CapExceeded(f"equivalence search needs more than {ray_cap} rays")
    return result.matrix

