"""Good-cone test, decided two independent ways.

A full-dimensional cone is good when, for every nonzero proper face F of
codimension k, exactly k normals vanish on F and those normals form a basis
of the lattice points of their real span. `is_good_facewise` checks this
directly with Smith normal forms; `is_good_via_isotropy` builds the
reduction presentation and asks whether every face isotropy group is
trivial. Both report the same obstruction group per failing face.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .cone import Cone, Face, faces_of
from .errors import NotFullDimensional
from .lattice import (
    FiniteAbelianGroup,
    LatticeVector,
    coordinates_in_basis,
    is_basis_of_saturation,
    quotient_invariants,
    saturation,
)
from .reduction import build_reduction

logger = logging.getLogger(__name__)

REASON_EXCESS = "active normals exceed codimension"
REASON_NOT_BASIS = "active normals are not a basis of the lattice points of their span"
REASON_ISOTROPY = "nontrivial isotropy group"

METHOD_FACEWISE = "facewise"
METHOD_ISOTROPY = "isotropy"


@dataclass(frozen=True)
class FaceFailure:
    face: Face
    reason: str
    obstruction: FiniteAbelianGroup

    def to_dict(self) -> dict:
        return {
            "face": self.face.to_dict(),
            "kind": self.face.kind,
            "reason": self.reason,
            "obstruction": str(self.obstruction),
        }


@dataclass(frozen=True)
class GoodnessReport:
    """Outcome of a goodness check.

    Attributes:
        is_good: True iff no face failed
        failures: Failing faces sorted by (codim, active normal indices)
        checked_faces: Number of nonzero proper faces examined
        method: "facewise" or "isotropy"
        faces: Every face examined, with its isotropy rank (codimension)
    """

    is_good: bool
    failures: Tuple[FaceFailure, ...]
    checked_faces: int
    method: str = METHOD_FACEWISE
    faces: Tuple[Face, ...] = ()

    def obstructions(self) -> Dict[Tuple[int, ...], FiniteAbelianGroup]:
        """Obstruction group per failing face, keyed by active normal indices."""
        return {f.face.active_normal_indices: f.obstruction for f in self.failures}

    def summary(self) -> str:
        if self.is_good:
            return f"GOOD ({self.checked_faces} faces checked)"
        groups = Counter((f.face.kind, str(f.obstruction)) for f in self.failures)
        parts = []
        for (kind, group), count in sorted(groups.items()):
            noun = "obstruction" if count == 1 else "obstructions"
            parts.append(f"{count} {kind} {noun} {group}")
        return "NOT GOOD: " + "; ".join(parts)

    def to_dict(self) -> dict:
        return {
            "is_good": self.is_good,
            "method": self.method,
            "checked_faces": self.checked_faces,
            "failures": [f.to_dict() for f in self.failures],
            "orbit_types": [
                {"active_normals": list(face.active_normal_indices), "isotropy_rank": face.isotropy_rank}
                for face in self.faces
            ],
        }


def _require_full_dimensional(C: Cone) -> None:
    if not C.is_full_dimensional:
        raise NotFullDimensional(f"{C} has empty interior (dimension {C.dimension})")


def face_obstruction(active: List[LatticeVector], codim: int) -> FiniteAbelianGroup:
    """(span_R(active) ∩ Z^n) / Z-span(active), with one free summand per surplus normal.

    The free part counts relations among the active normals, the torsion is
    the finite index of their span in its saturation.
    """
    lattice = saturation(active)
    coordinates = []
    for v in active:
        coords = coordinates_in_basis(lattice, v)
        coordinates.append(LatticeVector(tuple(int(c) for c in coords)))
    torsion = quotient_invariants(coordinates, len(lattice))
    return FiniteAbelianGroup(len(active) - codim, torsion.invariant_factors)


def is_good_facewise(C: Cone) -> GoodnessReport:
    """Check the face condition directly on the active normals of every face.

    Raises:
        NotFullDimensional: If C has empty interior
    """
    _require_full_dimensional(C)
    faces = faces_of(C)
    failures = []
    for face in faces:
        active = [C.normals[j] for j in face.active_normal_indices]
        if len(active) == face.codim and is_basis_of_saturation(active):
            continue
        reason = REASON_EXCESS if len(active) > face.codim else REASON_NOT_BASIS
        failures.append(FaceFailure(face, reason, face_obstruction(active, face.codim)))
    logger.debug(f"Facewise goodness of {C}: {len(faces)} faces, {len(failures)} failures")
    return GoodnessReport(
        is_good=not failures,
        failures=tuple(failures),
        checked_faces=len(faces),
        method=METHOD_FACEWISE,
        faces=tuple(faces),
    )


def is_good_via_isotropy(C: Cone) -> GoodnessReport:
    """Decide goodness from the isotropy groups of the reduction presentation.

    The whole space has no normals and no proper faces, so it is reported
    good without building a reduction.

    Raises:
        NotFullDimensional: If C has empty interior
    """
    _require_full_dimensional(C)
    if C.is_full_space():
        return GoodnessReport(is_good=True, failures=(), checked_faces=0, method=METHOD_ISOTROPY)

    data = build_reduction(C)
    failures = [
        FaceFailure(isotropy.face, REASON_ISOTROPY, isotropy.group)
        for isotropy in data.face_isotropies
        if not isotropy.group.is_trivial()
    ]
    logger.debug(f"Isotropy goodness of {C}: {len(data.face_isotropies)} faces, {len(failures)} failures")
    return GoodnessReport(
        is_good=not failures,
        failures=tuple(failures),
        checked_faces=len(data.face_isotropies),
        method=METHOD_ISOTROPY,
        faces=tuple(isotropy.face for isotropy in data.face_isotropies),
    )
