"""Reduction presentation of a cone as a torus quotient of the sphere.

For a cone with normals v_1..v_N the map W: Z^N -> Z^n sending e_j to v_j
induces a surjection of tori T^N -> T^n whose kernel K acts on C^N. The
contact manifold of a good cone is (level set ∩ S^{2N-1}) / K, where the
level set is {z | (|z_1|^2, ..., |z_N|^2) lies in the image of W^T}. This
module builds that data exactly and checks the level-set identity on
rational samples, with t_j = |z_j|^2 standing in for the complex point z.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .cone import Cone, Face, faces_of
from .errors import InvalidInput, NoNormals, NotFullDimensional, RankMismatch
from .lattice import (
    FiniteAbelianGroup,
    IntegerMatrix,
    RationalVector,
    kernel_torus,
    solve_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FaceIsotropy:
    """Isotropy group of the points lying over a face.

    The group is {a in R^J | sum a_j v_j in Z^n} / Z^J for the active set J:
    its free rank is the dimension of the isotropy torus, its invariant
    factors give the component group.
    """

    face: Face
    group: FiniteAbelianGroup

    def to_dict(self) -> dict:
        return {"active_normals": list(self.face.active_normal_indices), "group": str(self.group)}


@dataclass(frozen=True)
class ReductionData:
    rank: int
    N: int
    W: IntegerMatrix
    kernel_basis: Tuple[RationalVector, ...]
    component_group: FiniteAbelianGroup
    component_generators: Tuple[RationalVector, ...]
    face_isotropies: Tuple[FaceIsotropy, ...]

    @property
    def torus_dimension(self) -> int:
        return len(self.kernel_basis)

    def is_free(self) -> bool:
        return all(isotropy.group.is_trivial() for isotropy in self.face_isotropies)

    def isotropy_of(self, active_normal_indices: Sequence[int]) -> Optional[FiniteAbelianGroup]:
        key = tuple(sorted(active_normal_indices))
        for isotropy in self.face_isotropies:
            if isotropy.face.active_normal_indices == key:
                return isotropy.group
        return None

    def describe(self) -> dict:
        """Symbolic description of the total space."""
        manifold_dimension = 2 * self.N - 1 - 2 * self.torus_dimension
        return {
            "N": self.N,
            "torus_dimension": self.torus_dimension,
            "component_group": str(self.component_group),
            "sphere": f"S^{2 * self.N - 1}",
            "manifold_dimension": manifold_dimension,
            "total_space": f"M = (level set ∩ S^{2 * self.N - 1}) / K, dim K = {self.torus_dimension}",
            "free": self.is_free(),
        }

    def to_dict(self) -> dict:
        return {
            **self.describe(),
            "rank": self.rank,
            "W": [list(row) for row in self.W.entries],
            "kernel_basis": [[str(x) for x in k] for k in self.kernel_basis],
            "component_generators": [[str(x) for x in g] for g in self.component_generators],
            "face_isotropies": [isotropy.to_dict() for isotropy in self.face_isotropies],
        }


def build_reduction(C: Cone) -> ReductionData:
    """Reduction data for a full-dimensional cone with at least one normal.

    Raises:
        NotFullDimensional: If C has empty interior
        NoNormals: If C is the whole space
    """
    if not C.is_full_dimensional:
        raise NotFullDimensional(f"{C} has empty interior")
    if C.is_full_space():
        raise NoNormals(f"the whole of Q^{C.rank} has no reduction presentation")

    W = C.normal_matrix()
    torus = kernel_torus(W)
    isotropies = []
    for face in faces_of(C):
        local = kernel_torus(W.column_submatrix(face.active_normal_indices))
        group = FiniteAbelianGroup(local.dimension, local.component_group.invariant_factors)
        isotropies.append(FaceIsotropy(face, group))

    logger.debug(
        f"Reduction of {C}: N={W.cols}, dim K={torus.dimension}, "
        f"components {torus.component_group}, {len(isotropies)} faces"
    )
    return ReductionData(
        rank=C.rank,
        N=W.cols,
        W=W,
        kernel_basis=torus.kernel_basis,
        component_group=torus.component_group,
        component_generators=torus.component_generators,
        face_isotropies=tuple(isotropies),
    )


# =============================================================================
# Level-set verification
# =============================================================================


@dataclass(frozen=True)
class SampleCheck:
    """Result for one sample.

    Attributes:
        kind: "moment" for a point eta of Q^n, "level" for a point t of Q^N
        point: The sample as supplied
        image: t = W^T eta for moment samples; the solved eta (if any) for level samples
        inside: Whether the sample lies in C (moment) or in the level set (level)
        passed: Whether the level-set identity held for this sample
        detail: One-line explanation
    """

    kind: str
    point: RationalVector
    image: Optional[RationalVector]
    inside: bool
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "point": [str(x) for x in self.point],
            "image": [str(x) for x in self.image] if self.image is not None else None,
            "inside": self.inside,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationOutcome:
    checks: Tuple[SampleCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[SampleCheck]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [check.to_dict() for check in self.checks]}


def _pairing(W: IntegerMatrix, eta: RationalVector) -> RationalVector:
    """t = W^T eta, i.e. t_j = <eta, v_j>."""
    return W.transpose() @ eta


def _annihilates_kernel(R: ReductionData, t: RationalVector) -> bool:
    return all(k.dot(t) == 0 for k in R.kernel_basis)


def _check_moment_sample(R: ReductionData, C: Cone, eta: RationalVector) -> SampleCheck:
    t = _pairing(R.W, eta)
    inside = C.contains(eta)
    if inside:
        nonnegative = all(x >= 0 for x in t)
        strict = all(x > 0 for x in t) if C.in_interior(eta) else True
        annihilates = _annihilates_kernel(R, t)
        passed = nonnegative and strict and annihilates
        detail = "level-set point" if passed else "image of a cone point left the level set"
    else:
        passed = any(x < 0 for x in t)
        detail = "outside: negative coordinate" if passed else "outside the cone but no negative coordinate"
    return SampleCheck("moment", eta, t, inside, passed, detail)


def _check_level_sample(R: ReductionData, C: Cone, t: RationalVector) -> SampleCheck:
    if t.rank != R.N:
        raise RankMismatch(f"level sample has {t.rank} coordinates, expected N = {R.N}")
    nonnegative = all(x >= 0 for x in t)
    annihilates = _annihilates_kernel(R, t)
    # W^T eta = t is solvable exactly when t annihilates ker W.
    solution = solve_rational([list(v.coords) for v in C.normals], list(t.coords), R.rank)
    eta = RationalVector(tuple(solution)) if solution is not None else None
    inside = nonnegative and annihilates
    if (solution is not None) != annihilates:
        return SampleCheck("level", t, eta, inside, False, "solvability disagrees with kernel annihilation")
    if eta is None:
        return SampleCheck("level", t, None, inside, True, "not in the image of W^T")
    in_cone = C.contains(eta)
    passed = in_cone == nonnegative
    detail = "preimage lies in the cone" if in_cone else "preimage lies outside the cone"
    if not passed:
        detail = "preimage membership disagrees with the sign of t"
    return SampleCheck("level", t, eta, inside, passed, detail)


def verify_level_set_samples(
    R: ReductionData,
    C: Cone,
    samples: Sequence[RationalVector],
    level_points: Sequence[RationalVector] = (),
) -> VerificationOutcome:
    """Check the level-set identity exactly on rational samples.

    Args:
        R: Reduction data built from C
        C: The cone
        samples: Points eta of Q^n, inside or outside C
        level_points: Points t of Q^N; those that are nonnegative and
            annihilate the kernel must pull back to points of C

    Returns:
        VerificationOutcome with one check per sample, in input order

    Raises:
        RankMismatch: If a sample has the wrong number of coordinates
    """
    checks = []
    for eta in samples:
        if eta.rank != R.rank:
            raise RankMismatch(f"sample {eta} has rank {eta.rank}, expected {R.rank}")
        checks.append(_check_moment_sample(R, C, eta))
    for t in level_points:
        checks.append(_check_level_sample(R, C, t))
    outcome = VerificationOutcome(tuple(checks))
    logger.debug(f"Level-set verification: {len(checks)} samples, {len(outcome.failures)} failures")
    return outcome


def rational_grid(rank: int, radius: int, denominator: int = 1) -> List[RationalVector]:
    """All points of [-radius, radius]^rank with coordinates in (1/denominator)Z."""
    if radius < 0 or denominator < 1:
        raise InvalidInput("radius must be nonnegative and denominator positive")
    steps = [Fraction(k, denominator) for k in range(-radius * denominator, radius * denominator + 1)]
    return [RationalVector(coords) for coords in product(steps, repeat=rank)]
