"""Console helpers and random inputs shared by the test scripts."""

import traceback

from src.cone import cone_from_normals
from src.lattice import IntegerMatrix


def print_test_header(test_name):
    """Print formatted test header."""
    print("\n" + "=" * 70)
    print(f"TEST: {test_name}")
    print("=" * 70)


def print_success(message):
    """Print success message."""
    print(f"✓ {message}")


def print_error(message):
    """Print error message."""
    print(f"✗ {message}")


def run_tests(title, tests):
    """Run (name, function) pairs, print a summary and return an exit code."""
    print("\n" + "🧪" * 35)
    print(title)
    print("🧪" * 35)

    results = []
    for test_name, test_func in tests:
        try:
            test_func()
            results.append((test_name, True))
        except AssertionError as e:
            print_error(f"Assertion failed: {e}")
            traceback.print_exc()
            results.append((test_name, False))
        except Exception as e:
            print_error(f"Test crashed: {e}")
            traceback.print_exc()
            results.append((test_name, False))

    # Summary
    print("\n" + "=" * 70)
    print("TEST SUMMARY")
    print("=" * 70)

    passed_count = sum(1 for _, passed in results if passed)
    total_count = len(results)

    for test_name, passed in results:
        status = "✓ PASS" if passed else "✗ FAIL"
        print(f"{status:8} | {test_name}")

    print("=" * 70)
    print(f"Results: {passed_count}/{total_count} tests passed")

    if passed_count == total_count:
        print("🎉 All tests passed!")
        return 0
    else:
        print(f"❌ {total_count - passed_count} test(s) failed")
        return 1


# =============================================================================
# Random inputs
# =============================================================================


def random_unimodular(rng, n, steps=None):
    """Product of random elementary row operations, as an IntegerMatrix."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 2 * n):
        op = rng.choice(["add", "swap", "negate"]) if n > 1 else "negate"
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if op == "add":
            factor = rng.choice([-1, 1])
            rows[i] = [a + factor * b for a, b in zip(rows[i], rows[j])]
        elif op == "swap":
            rows[i], rows[j] = rows[j], rows[i]
        else:
            rows[i] = [-a for a in rows[i]]
    return IntegerMatrix.from_rows(rows, n)


def random_normals(rng, rank, count, bound=3):
    """`count` nonzero integer vectors with entries in [-bound, bound]."""
    normals = []
    while len(normals) < count:
        v = [rng.randint(-bound, bound) for _ in range(rank)]
        if any(v):
            normals.append(v)
    return normals


def random_full_dimensional_cones(rng, total, min_rank=2, max_rank=4, max_normals=6, bound=3):
    """Yield `total` random full-dimensional cones given by normals."""
    produced = 0
    while produced < total:
        rank = rng.randint(min_rank, max_rank)
        count = rng.randint(1, max_normals)
        cone = cone_from_normals(rank, random_normals(rng, rank, count, bound))
        if not cone.is_full_dimensional:
            continue
        produced += 1
        yield cone
