"""Rational polyhedral cones with exact H- and V-representations.

A cone is stored by its minimal list of primitive inward normals,
C = {eta | <eta, v_i> >= 0 for all i}. Extreme rays (modulo the lineality
space) and a lineality basis are computed at construction time by the double
description method, so a Cone never changes after it is built.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidInput, RankMismatch, ZeroVector
from .lattice import (
    IntegerMatrix,
    LatticeVector,
    RationalVector,
    complete_to_unimodular,
    primitivize,
    rational_rank,
    saturation,
    solve_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Face:
    """A nonzero proper face F = C ∩ {<eta, v_j> = 0 for j in J}.

    Attributes:
        active_normal_indices: The full set J of normals vanishing on F (0-based, sorted)
        codim: n - dim span_R(F); also the rank of the isotropy subtorus of points over F
        span_basis: Basis of span_R(F) ∩ Z^n
        rays: Extreme rays of the cone lying in F
    """

    active_normal_indices: Tuple[int, ...]
    codim: int
    span_basis: Tuple[LatticeVector, ...]
    rays: Tuple[LatticeVector, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.span_basis)

    @property
    def isotropy_rank(self) -> int:
        """Dimension of the isotropy subtorus of points lying over the relative interior."""
        return self.codim

    @property
    def kind(self) -> str:
        """'facet', 'edge' (one-dimensional) or 'face'."""
        if self.codim == 1:
            return "facet"
        if self.dimension == 1:
            return "edge"
        return "face"

    def to_dict(self) -> dict:
        return {
            "active_normals": list(self.active_normal_indices),
            "codim": self.codim,
            "span_basis": [list(v.coords) for v in self.span_basis],
        }


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone in Q^n, C = {eta | <eta, v> >= 0 for every stored normal v}.

    Build cones with `cone_from_normals` or `cone_from_rays`; the constructor
    trusts that `normals` is already minimal and that the caches match.
    Equality compares rank and normals only.
    """

    rank: int
    normals: Tuple[LatticeVector, ...]
    rays: Tuple[LatticeVector, ...] = field(default=(), compare=False)
    lineality_basis: Tuple[LatticeVector, ...] = field(default=(), compare=False)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality_basis)

    @property
    def dimension(self) -> int:
        """Dimension of span_R(C)."""
        return rational_rank([r.coords for r in self.rays + self.lineality_basis], self.rank)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dimension == self.rank

    @property
    def is_pointed(self) -> bool:
        return self.lineality_dim == 0

    def is_full_space(self) -> bool:
        return not self.normals

    def contains(self, eta) -> bool:
        return all(v.dot(eta) >= 0 for v in self.normals)

    def in_interior(self, eta) -> bool:
        """Strictly positive on every normal (meaningful for full-dimensional cones)."""
        return all(v.dot(eta) > 0 for v in self.normals)

    def normal_matrix(self) -> IntegerMatrix:
        """The n x N matrix whose columns are the normals, in stored order."""
        return IntegerMatrix.from_columns([v.coords for v in self.normals], self.rank)

    def __str__(self) -> str:
        normals = ", ".join(str(v) for v in self.normals)
        return f"Cone(rank={self.rank}, normals=[{normals}])"


# =============================================================================
# Double description
# =============================================================================


def _double_description(
    rank: int, constraints: Sequence[LatticeVector]
) -> Tuple[List[LatticeVector], List[LatticeVector]]:
    """Extreme rays (modulo lineality) and a lineality basis of {x | <a, x> >= 0 for a in constraints}.

    Constraints are inserted one at a time starting from the whole space.
    Adjacency of rays is decided algebraically: two rays are adjacent iff the
    processed constraints tight on both have rank n - dim(lineality) - 2.
    """
    lineality = [LatticeVector.unit(rank, i) for i in range(rank)]
    rays: List[LatticeVector] = []
    processed: List[LatticeVector] = []

    for a in constraints:
        on_lineality = [a.dot(l) for l in lineality]
        moving = next((k for k, value in enumerate(on_lineality) if value != 0), None)

        if moving is not None:
            # The constraint cuts the lineality space: one lineality direction
            # becomes a ray and everything else is projected onto a^perp.
            l0 = lineality[moving]
            s = on_lineality[moving]
            if s < 0:
                l0, s = -l0, -s
            lineality = [
                primitivize(l.scaled(s) - l0.scaled(value))
                for k, (l, value) in enumerate(zip(lineality, on_lineality))
                if k != moving
            ]
            rays = [primitivize(r.scaled(s) - l0.scaled(a.dot(r))) for r in rays]
            rays.append(l0)
        else:
            values = [a.dot(r) for r in rays]
            positive = [r for r, value in zip(rays, values) if value > 0]
            negative = [r for r, value in zip(rays, values) if value < 0]
            new_rays = [r for r, value in zip(rays, values) if value >= 0]
            target = rank - len(lineality) - 2
            for p in positive:
                tight_p = [c for c in processed if c.dot(p) == 0]
                for q in negative:
                    common = [c.coords for c in tight_p if c.dot(q) == 0]
                    if rational_rank(common, rank) != target:
                        continue
                    new_rays.append(primitivize(q.scaled(a.dot(p)) - p.scaled(a.dot(q))))
            rays = new_rays
        processed.append(a)

    return rays, lineality


def _project_off(vector: LatticeVector, basis: Sequence[LatticeVector]) -> LatticeVector:
    """Primitive direction of the orthogonal projection of vector onto basis^perp."""
    if not basis:
        return primitivize(vector)
    gram = [[b.dot(c) for c in basis] for b in basis]
    coefficients = solve_rational(gram, [b.dot(vector) for b in basis])
    projected = vector.to_rational()
    for c, b in zip(coefficients, basis):
        projected = projected - b.to_rational().scaled(c)
    return projected.primitive_direction()


def _canonical_generators(
    rank: int, rays: Sequence[LatticeVector], lineality: Sequence[LatticeVector]
) -> Tuple[Tuple[LatticeVector, ...], Tuple[LatticeVector, ...]]:
    lineality_basis = tuple(saturation(list(lineality))) if lineality else ()
    canonical = sorted({_project_off(r, lineality_basis) for r in rays})
    return tuple(canonical), lineality_basis


# =============================================================================
# Construction
# =============================================================================


def _validate(rank: int, vectors: Iterable[LatticeVector], what: str) -> List[LatticeVector]:
    if rank < 0:
        raise ValueError(f"negative rank {rank}")
    checked = []
    for v in vectors:
        v = v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
        if v.rank != rank:
            raise RankMismatch(f"{what} {v} has rank {v.rank}, expected {rank}")
        if v.is_zero():
            raise ZeroVector(f"zero {what} in a rank {rank} cone")
        checked.append(v)
    return checked


def _is_redundant(rank: int, v: LatticeVector, others: Sequence[LatticeVector]) -> bool:
    rays, lineality = _double_description(rank, others)
    return all(v.dot(r) >= 0 for r in rays) and all(v.dot(l) == 0 for l in lineality)


def cone_from_normals(rank: int, raw_normals: Iterable) -> Cone:
    """Build the cone {eta | <eta, v> >= 0} with a minimal primitive normal list.

    Args:
        rank: Ambient rank n
        raw_normals: Inward normals (LatticeVector or integer sequences)

    Returns:
        Cone with normals primitivized, deduplicated, stripped of redundant
        inequalities and sorted lexicographically

    Raises:
        ZeroVector: If a normal is zero
        RankMismatch: If a normal has the wrong length
    """
    normals = sorted({primitivize(v) for v in _validate(rank, raw_normals, "normal")})
    rays, lineality = _double_description(rank, normals)
    full_dimensional = rational_rank([g.coords for g in rays + lineality], rank) == rank

    if full_dimensional:
        # A normal is needed iff its hyperplane supports a facet.
        minimal = []
        for v in normals:
            on_hyperplane = [r.coords for r in rays if v.dot(r) == 0] + [l.coords for l in lineality]
            if rational_rank(on_hyperplane, rank) == rank - 1:
                minimal.append(v)
    else:
        # No unique facet normals here; drop redundant ones greedily in sorted order.
        minimal = list(normals)
        index = 0
        while index < len(minimal):
            others = minimal[:index] + minimal[index + 1:]
            if _is_redundant(rank, minimal[index], others):
                minimal = others
            else:
                index += 1
        rays, lineality = _double_description(rank, minimal)

    canonical_rays, lineality_basis = _canonical_generators(rank, rays, lineality)
    logger.debug(
        f"Cone of rank {rank}: {len(normals)} normals -> {len(minimal)} minimal, "
        f"{len(canonical_rays)} rays, lineality {len(lineality_basis)}"
    )
    return Cone(rank, tuple(minimal), canonical_rays, lineality_basis)


def cone_from_rays(rank: int, rays: Iterable, lineality: Iterable = ()) -> Cone:
    """Build the cone generated by rays plus a linear subspace.

    The normals are the generators of the dual cone, found by running the
    double description method on the rays as constraints.
    """
    generators = [primitivize(r) for r in _validate(rank, rays, "ray")]
    for l in _validate(rank, lineality, "lineality vector"):
        generators.extend([primitivize(l), -primitivize(l)])
    dual_rays, dual_lineality = _double_description(rank, sorted(set(generators)))
    normals = list(dual_rays)
    for l in dual_lineality:
        normals.extend([l, -l])
    return cone_from_normals(rank, normals)


def rays_of(C: Cone) -> List[LatticeVector]:
    """Primitive extreme rays of C modulo its lineality space, sorted lexicographically."""
    return list(C.rays)


def lineality_dimension(C: Cone) -> int:
    """dim(C ∩ -C) = n - rank of the normal matrix."""
    return C.rank - rational_rank([v.coords for v in C.normals], C.rank)


def dual_cone(C: Cone) -> Cone:
    """C* = {v | <v, eta> >= 0 for all eta in C}, generated by the normals of C."""
    return cone_from_rays(C.rank, C.normals)


def transform_cone(C: Cone, A: IntegerMatrix) -> Cone:
    """The image A·C for a unimodular A."""
    if A.shape != (C.rank, C.rank):
        raise RankMismatch(f"{A.rows}x{A.cols} matrix cannot act on a rank {C.rank} cone")
    if not A.is_unimodular():
        raise InvalidInput("only unimodular matrices preserve the lattice")
    # <A^-1 xi, v> = <xi, A^-T v>
    inverse_transpose = A.inverse().transpose()
    return cone_from_normals(C.rank, [inverse_transpose @ v for v in C.normals])


def quotient_by_lineality(C: Cone) -> Tuple[Cone, IntegerMatrix]:
    """Project C to Z^n / (lineality lattice).

    Returns:
        Tuple of (pointed cone of rank n - k, unimodular basis matrix B). The
        rows of B are a lattice basis whose first n - k rows complement the
        lineality lattice and whose last k rows span it; the quotient normals
        are the first n - k coordinates of B v.
    """
    k = C.lineality_dim
    if k == 0:
        return C, IntegerMatrix.identity(C.rank)
    lineality_first = complete_to_unimodular(list(C.lineality_basis), C.rank)
    # Reorder so that the complement comes first.
    basis = IntegerMatrix(lineality_first.entries[k:] + lineality_first.entries[:k], C.rank)
    quotient_normals = []
    for v in C.normals:
        image = basis @ v
        quotient_normals.append(LatticeVector(image.coords[: C.rank - k]))
    return cone_from_normals(C.rank - k, quotient_normals), basis


# =============================================================================
# Faces
# =============================================================================


def _face_closure(C: Cone, indices: Iterable[int]) -> Optional[Tuple[FrozenSet[int], List[LatticeVector]]]:
    """Maximal active set and contained rays of C ∩ {v_j = 0, j in indices}, or None for the zero face."""
    indices = list(indices)
    contained = [r for r in C.rays if all(C.normals[j].dot(r) == 0 for j in indices)]
    if not contained and not C.lineality_basis:
        return None
    generators = contained + list(C.lineality_basis)
    active = frozenset(i for i, v in enumerate(C.normals) if all(v.dot(g) == 0 for g in generators))
    return active, contained


def faces_of(C: Cone) -> List[Face]:
    """All nonzero proper faces of C, one per geometric face.

    The search starts from the closures of single normals and repeatedly adds
    one more normal, taking closures; the zero face and C itself are skipped.
    Faces are ordered by codimension, then by active index set.
    """
    if not C.normals:
        return []
    whole_dimension = C.dimension
    seen: Dict[FrozenSet[int], List[LatticeVector]] = {}
    queue = deque()

    def visit(indices: Iterable[int]):
        closure = _face_closure(C, indices)
        if closure is None:
            return
        active, contained = closure
        if active not in seen:
            seen[active] = contained
            queue.append(active)

    for i in range(len(C.normals)):
        visit([i])
    while queue:
        active = queue.popleft()
        for i in range(len(C.normals)):
            if i not in active:
                visit(sorted(active | {i}))

    faces = []
    for active, contained in seen.items():
        generators = contained + list(C.lineality_basis)
        span = saturation(generators)
        if len(span) == whole_dimension:
            continue
        faces.append(
            Face(
                active_normal_indices=tuple(sorted(active)),
                codim=C.rank - len(span),
                span_basis=tuple(span),
                rays=tuple(contained),
            )
        )
    faces.sort(key=lambda f: (f.codim, f.active_normal_indices))
    logger.debug(f"{C} has {len(faces)} nonzero proper faces")
    return faces


def rational_point_in_relative_interior(C: Cone, face: Optional[Face] = None) -> RationalVector:
    """Sum of the generators of a face (or of C), a point of its relative interior."""
    generators = list(face.rays) if face is not None else list(C.rays)
    total = RationalVector((Fraction(0),) * C.rank)
    for g in generators:
        total = total + g.to_rational()
    return total
