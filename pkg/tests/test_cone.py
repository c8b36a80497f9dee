#!/usr/bin/env python3
"""
Tests for cone construction, duality, transforms and face enumeration.
"""

import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from tests.support import (
    print_success,
    print_test_header,
    random_full_dimensional_cones,
    random_unimodular,
    run_tests,
)
from src.cone import (
    cone_from_normals,
    cone_from_rays,
    dual_cone,
    faces_of,
    lineality_dimension,
    quotient_by_lineality,
    rational_point_in_relative_interior,
    rays_of,
    transform_cone,
)
from src.errors import InvalidInput, RankMismatch, ZeroVector
from src.lattice import IntegerMatrix, LatticeVector, RationalVector


def vectors(*rows):
    return tuple(LatticeVector(tuple(row)) for row in rows)


def test_construction_from_normals():
    """Normals are primitivized, deduplicated, made irredundant and sorted."""
    print_test_header("Construction From Normals")

    orthant = cone_from_normals(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert orthant.normals == vectors((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert rays_of(orthant) == list(vectors((0, 0, 1), (0, 1, 0), (1, 0, 0)))
    assert orthant.is_pointed and orthant.is_full_dimensional
    print_success("Orthant: three normals, three rays")

    C = cone_from_normals(2, [(2, 0), (1, 0), (0, 3), (1, 1)])
    assert C.normals == vectors((0, 1), (1, 0)), f"Got {C.normals}"
    print_success("Scaled duplicates and the redundant (1,1) are dropped")

    half_plane = cone_from_normals(2, [(1, 0)])
    assert half_plane.lineality_dim == 1
    assert half_plane.lineality_basis == vectors((0, 1))
    assert half_plane.rays == vectors((1, 0))
    assert half_plane.is_full_dimensional and not half_plane.is_pointed
    assert lineality_dimension(half_plane) == 1
    print_success("Half-plane has a one-dimensional lineality space")

    plane = cone_from_normals(2, [])
    assert plane.is_full_space() and plane.lineality_dim == 2 and plane.rays == ()
    print_success("No normals give the whole plane")

    try:
        cone_from_normals(2, [(0, 0)])
        assert False, "Expected ZeroVector"
    except ZeroVector:
        pass
    try:
        cone_from_normals(2, [(1, 0, 0)])
        assert False, "Expected RankMismatch"
    except RankMismatch:
        pass
    print_success("Zero and wrong-length normals are rejected")


def test_construction_from_rays():
    """Cones from generators and ray/normal duality."""
    print_test_header("Construction From Rays")

    square = cone_from_rays(3, [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)])
    assert square.normals == vectors((-1, -1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, 1)), f"Got {square.normals}"
    assert len(square.rays) == 4
    print_success("Cone over a square has four facet normals (±1, ±1, 1)")

    wedge = cone_from_rays(2, [(0, 1), (2, -1)])
    assert wedge.normals == vectors((1, 0), (1, 2)), f"Got {wedge.normals}"
    print_success("Wedge (0,1), (2,-1) has normals (1,0), (1,2)")

    rng = random.Random(404)
    for C in random_full_dimensional_cones(rng, 150):
        rebuilt = cone_from_rays(C.rank, C.rays, C.lineality_basis)
        assert rebuilt == C, f"Rays of {C} rebuild {rebuilt}"
        assert dual_cone(dual_cone(C)) == C, f"Double dual of {C} differs"
        for v in C.normals:
            assert all(v.dot(r) >= 0 for r in C.rays)
            assert all(v.dot(l) == 0 for l in C.lineality_basis)
    print_success("150 random cones round-trip through rays and through the double dual")


def test_transform():
    """Unimodular images of cones."""
    print_test_header("Unimodular Transforms")

    orthant = cone_from_normals(2, [(1, 0), (0, 1)])
    A = IntegerMatrix.from_rows([[1, 1], [0, 1]])
    image = transform_cone(orthant, A)
    assert image.rays == vectors((1, 0), (1, 1)), f"Got {image.rays}"
    assert transform_cone(image, A.inverse()) == orthant
    print_success("[[1, 1], [0, 1]] maps the quadrant to the wedge (1,0), (1,1)")

    try:
        transform_cone(orthant, IntegerMatrix.from_rows([[2, 0], [0, 1]]))
        assert False, "Expected InvalidInput"
    except InvalidInput:
        pass
    print_success("Non-unimodular matrices are rejected")

    rng = random.Random(5)
    for C in random_full_dimensional_cones(rng, 100):
        A = random_unimodular(rng, C.rank)
        image = transform_cone(C, A)
        if C.is_pointed:
            assert sorted(A @ r for r in C.rays) == list(image.rays)
        assert len(image.normals) == len(C.normals)
        assert image.lineality_dim == C.lineality_dim
    print_success("100 random transforms keep the combinatorics")


def test_quotient_by_lineality():
    """Projection along the lineality space."""
    print_test_header("Quotient By Lineality")

    C = cone_from_normals(3, [(1, 0, 0), (-1, 0, 2)])
    Q, B = quotient_by_lineality(C)
    assert Q.rank == 2 and Q.is_pointed and Q.is_full_dimensional
    assert len(Q.normals) == 2
    assert B.is_unimodular()
    last = B.row_vectors()[-1]
    assert last in (LatticeVector.of(0, 1, 0), LatticeVector.of(0, -1, 0)), f"Got {B}"
    print_success(f"Normals (1,0,0), (-1,0,2) project to {Q}")

    orthant = cone_from_normals(2, [(1, 0), (0, 1)])
    Q, B = quotient_by_lineality(orthant)
    assert Q == orthant and B == IntegerMatrix.identity(2)
    print_success("Pointed cones are their own quotient")


def test_faces():
    """Face enumeration skips the zero face and the cone itself."""
    print_test_header("Faces")

    orthant = cone_from_normals(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    faces = faces_of(orthant)
    assert len(faces) == 6
    assert [f.kind for f in faces] == ["facet"] * 3 + ["edge"] * 3
    assert all(f.isotropy_rank == f.codim for f in faces)
    print_success("Orthant in rank 3: three facets, three edges")

    square = cone_from_rays(3, [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)])
    faces = faces_of(square)
    assert len(faces) == 8
    assert sum(1 for f in faces if f.kind == "edge") == 4
    assert all(len(f.active_normal_indices) == 2 for f in faces if f.kind == "edge")
    print_success("Cone over a square: four facets, four edges")

    pair = cone_from_normals(3, [(1, 0, 0), (-1, 0, 2)])
    faces = faces_of(pair)
    assert [f.active_normal_indices for f in faces] == [(0,), (1,), (0, 1)]
    assert faces[-1].kind == "edge" and faces[-1].codim == 2
    print_success("Wedge times a line: two facets and the lineality line")

    half_plane = cone_from_normals(2, [(1, 0)])
    faces = faces_of(half_plane)
    assert len(faces) == 1 and faces[0].kind == "facet"
    assert faces_of(cone_from_normals(3, [])) == []
    print_success("Half-plane has one face, the whole space none")


def test_face_closure():
    """Cutting a face by one more normal gives a listed face or the zero face."""
    print_test_header("Face Relation Closure")

    rng = random.Random(606)
    cones = list(random_full_dimensional_cones(rng, 150))
    cones += [
        cone_from_normals(3, [(1, 0, 0), (-1, 0, 2)]),
        cone_from_rays(3, [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]),
    ]
    cuts = 0
    for C in cones:
        faces = faces_of(C)
        by_rays = {frozenset(f.rays): f for f in faces}
        for face in faces:
            generators = list(face.rays) + list(C.lineality_basis)
            vanishing = tuple(i for i, v in enumerate(C.normals) if all(v.dot(g) == 0 for g in generators))
            assert vanishing == face.active_normal_indices, f"Active set of {face} is not closed in {C}"
            for j in range(len(C.normals)):
                if j in face.active_normal_indices:
                    continue
                rays = frozenset(r for r in face.rays if C.normals[j].dot(r) == 0)
                if not rays and not C.lineality_basis:
                    continue
                smaller = by_rays.get(rays)
                assert smaller is not None, f"{face} cut by normal {j} is not a face of {C}"
                assert set(face.active_normal_indices) | {j} <= set(smaller.active_normal_indices)
                assert smaller.dimension < face.dimension
                cuts += 1
    print_success(f"{len(cones)} cones, {cuts} cuts all land on listed faces")


def test_minimal_normals():
    """Every stored normal is a facet: dropping it strictly enlarges the cone."""
    print_test_header("Minimal Normal Lists")

    rng = random.Random(808)
    cones = list(random_full_dimensional_cones(rng, 150))
    cones.append(cone_from_normals(3, [(1, 0, 0), (-1, 0, 2)]))
    dropped = 0
    for C in cones:
        facets = [f for f in faces_of(C) if f.codim == 1]
        assert sorted(f.active_normal_indices for f in facets) == [(i,) for i in range(len(C.normals))]
        for i in range(len(C.normals)):
            rest = [v.coords for k, v in enumerate(C.normals) if k != i]
            larger = cone_from_normals(C.rank, rest)
            generators = list(larger.rays) + list(larger.lineality_basis) + [-l for l in larger.lineality_basis]
            assert any(not C.contains(g) for g in generators), f"Normal {C.normals[i]} is redundant in {C}"
            dropped += 1
    print_success(f"{dropped} dropped normals each enlarge their cone")


def test_interior_point():
    """The sum of generators lies in the relative interior."""
    print_test_header("Relative Interior Points")

    orthant = cone_from_normals(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    point = rational_point_in_relative_interior(orthant)
    assert point == RationalVector.of(1, 1, 1)
    assert orthant.in_interior(point)

    face = faces_of(orthant)[0]
    face_point = rational_point_in_relative_interior(orthant, face)
    assert orthant.contains(face_point) and not orthant.in_interior(face_point)
    print_success("Orthant interior and facet points")


def run_all_tests():
    """Run all cone tests."""
    return run_tests("CONE TEST SUITE", [
        ("Construction From Normals", test_construction_from_normals),
        ("Construction From Rays", test_construction_from_rays),
        ("Transforms", test_transform),
        ("Quotient By Lineality", test_quotient_by_lineality),
        ("Faces", test_faces),
        ("Face Closure", test_face_closure),
        ("Minimal Normals", test_minimal_normals),
        ("Interior Points", test_interior_point),
    ])


if __name__ == "__main__":
    sys.exit(run_all_tests())
