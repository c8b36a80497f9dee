"""Exact integer linear algebra over Z^n.

Normal forms (Smith, Hermite), saturations, kernels, quotient-group
invariants and lattice-point counting. All arithmetic is exact: integers are
Python ints held in object-dtype numpy arrays, rationals are Fractions.
"""

import logging
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DegenerateParallelogram, InvalidInput, RankMismatch, ZeroVector

logger = logging.getLogger(__name__)


def _to_int(value) -> int:
    """Coerce an exact integer-valued scalar to int, rejecting everything else."""
    if isinstance(value, bool):
        raise TypeError("booleans are not lattice coordinates")
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ValueError(f"{value} is not an integer")
        return value.numerator
    if isinstance(value, numbers.Integral):
        return int(value)
    raise TypeError(f"{value!r} is not an exact integer")


def _to_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coordinates")
    if isinstance(value, (Fraction, numbers.Integral)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"{value!r} is not an exact rational")


# =============================================================================
# Vectors
# =============================================================================


@dataclass(frozen=True, order=True)
class LatticeVector:
    """A point of Z^n. Ordering is lexicographic on coordinates."""

    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_to_int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords) -> "LatticeVector":
        return cls(coords)

    @classmethod
    def zero(cls, rank: int) -> "LatticeVector":
        return cls((0,) * rank)

    @classmethod
    def unit(cls, rank: int, index: int) -> "LatticeVector":
        return cls(tuple(1 if i == index else 0 for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> int:
        return self.coords[index]

    def dot(self, other: Union["LatticeVector", "RationalVector", Sequence]) -> Union[int, Fraction]:
        other_coords = tuple(other)
        if len(other_coords) != self.rank:
            raise RankMismatch(f"cannot pair rank {self.rank} with rank {len(other_coords)}")
        return sum((a * b for a, b in zip(self.coords, other_coords)), 0)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        _check_same_rank(self, other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        _check_same_rank(self, other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords))

    def scaled(self, factor: int) -> "LatticeVector":
        return LatticeVector(tuple(factor * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    @property
    def content(self) -> int:
        """gcd of the coordinates (0 for the zero vector)."""
        return reduce(gcd, self.coords, 0)

    def is_primitive(self) -> bool:
        return self.content == 1

    def to_rational(self) -> "RationalVector":
        return RationalVector(self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


@dataclass(frozen=True, order=True)
class RationalVector:
    """A point of Q^n."""

    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_to_fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *coords) -> "RationalVector":
        return cls(coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> Fraction:
        return self.coords[index]

    def dot(self, other) -> Fraction:
        other_coords = tuple(other)
        if len(other_coords) != self.rank:
            raise RankMismatch(f"cannot pair rank {self.rank} with rank {len(other_coords)}")
        return sum((a * b for a, b in zip(self.coords, other_coords)), Fraction(0))

    def __add__(self, other: "RationalVector") -> "RationalVector":
        _check_same_rank(self, other)
        return RationalVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        _check_same_rank(self, other)
        return RationalVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RationalVector":
        return RationalVector(tuple(-a for a in self.coords))

    def scaled(self, factor) -> "RationalVector":
        factor = _to_fraction(factor)
        return RationalVector(tuple(factor * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def to_lattice(self) -> LatticeVector:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integral coordinates")
        return LatticeVector(self.coords)

    def primitive_direction(self) -> LatticeVector:
        """The primitive lattice vector on the ray through this point."""
        if self.is_zero():
            raise ZeroVector("the zero vector spans no ray")
        common = reduce(lambda acc, a: acc * a.denominator // gcd(acc, a.denominator), self.coords, 1)
        return primitivize(LatticeVector(tuple(a * common for a in self.coords)))

    def reduced_mod_one(self) -> "RationalVector":
        """Representative with every coordinate in [0, 1)."""
        return RationalVector(tuple(a - (a.numerator // a.denominator) for a in self.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


def _check_same_rank(a, b) -> None:
    if len(a) != len(b):
        raise RankMismatch(f"rank {len(a)} and rank {len(b)} vectors cannot be combined")


def common_rank(vectors: Sequence[Union[LatticeVector, RationalVector]], rank: Optional[int] = None) -> int:
    """Return the shared ambient rank of `vectors` (or `rank` if given and consistent)."""
    for vector in vectors:
        if rank is None:
            rank = vector.rank
        elif vector.rank != rank:
            raise RankMismatch(f"expected rank {rank}, got {vector} of rank {vector.rank}")
    if rank is None:
        raise ValueError("cannot infer the ambient rank of an empty vector list")
    return rank


# =============================================================================
# Integer matrices
# =============================================================================


@dataclass(frozen=True)
class IntegerMatrix:
    """Row-major integer matrix. `cols` is explicit so that 0-row matrices keep their width."""

    entries: Tuple[Tuple[int, ...], ...]
    cols: Optional[int] = None

    def __post_init__(self):
        rows = tuple(tuple(_to_int(x) for x in row) for row in self.entries)
        cols = self.cols
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for index, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError(f"row {index} has {len(row)} entries, expected {cols}")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_rows(cls, vectors: Iterable[Iterable[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        return cls(tuple(tuple(v) for v in vectors), cols)

    @classmethod
    def from_columns(cls, vectors: Sequence[Iterable[int]], rows: int) -> "IntegerMatrix":
        columns = [tuple(v) for v in vectors]
        for column in columns:
            if len(column) != rows:
                raise RankMismatch(f"column of length {len(column)} in a {rows}-row matrix")
        return cls(tuple(tuple(column[i] for column in columns) for i in range(rows)), len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntegerMatrix":
        rows, cols = array.shape
        return cls(tuple(tuple(array[i, j] for j in range(cols)) for i in range(rows)), cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def to_array(self) -> np.ndarray:
        array = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                array[i, j] = value
        return array

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(row[j] for row in self.entries) for j in range(self.cols)), self.rows)

    def __matmul__(self, other):
        if isinstance(other, LatticeVector):
            if other.rank != self.cols:
                raise RankMismatch(f"{self.rows}x{self.cols} matrix applied to rank {other.rank} vector")
            return LatticeVector(tuple(sum((a * b for a, b in zip(row, other.coords)), 0) for row in self.entries))
        if isinstance(other, RationalVector):
            if other.rank != self.cols:
                raise RankMismatch(f"{self.rows}x{self.cols} matrix applied to rank {other.rank} vector")
            return RationalVector(
                tuple(sum((a * b for a, b in zip(row, other.coords)), Fraction(0)) for row in self.entries)
            )
        if isinstance(other, IntegerMatrix):
            if other.rows != self.cols:
                raise RankMismatch(f"cannot multiply {self.shape} by {other.shape}")
            if self.cols == 0:
                return IntegerMatrix.zeros(self.rows, other.cols)
            return IntegerMatrix.from_array(self.to_array() @ other.to_array())
        return NotImplemented

    def row_vectors(self) -> List[LatticeVector]:
        return [LatticeVector(row) for row in self.entries]

    def column_vectors(self) -> List[LatticeVector]:
        return [LatticeVector(tuple(row[j] for row in self.entries)) for j in range(self.cols)]

    def column_submatrix(self, indices: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(row[j] for j in indices) for row in self.entries), len(indices))

    def diagonal(self) -> List[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def determinant(self) -> int:
        if not self.is_square():
            raise ValueError(f"determinant of a non-square {self.shape} matrix")
        return _to_int(rational_determinant(self.entries))

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(self.determinant()) == 1

    def inverse(self) -> "IntegerMatrix":
        """Exact inverse of a unimodular matrix."""
        if not self.is_unimodular():
            raise ValueError("only unimodular matrices have integer inverses")
        return IntegerMatrix(tuple(tuple(_to_int(x) for x in row) for row in rational_inverse(self.entries)), self.rows)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "]"


# =============================================================================
# Exact rational elimination
# =============================================================================


def _fraction_array(rows: Sequence[Sequence], cols: Optional[int] = None) -> np.ndarray:
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    array = np.zeros((len(rows), cols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != cols:
            raise RankMismatch(f"row {i} has {len(row)} entries, expected {cols}")
        for j, value in enumerate(row):
            array[i, j] = _to_fraction(value)
    return array


def rational_row_echelon(rows: Sequence[Sequence], cols: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over Q.

    Returns:
        Tuple of (echelon matrix as an object array of Fractions, pivot columns)
    """
    X = _fraction_array(rows, cols)
    n_rows, n_cols = X.shape
    pivots = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        pivot = next((i for i in range(row, n_rows) if X[i, col] != 0), None)
        if pivot is None:
            continue
        if pivot != row:
            X[[row, pivot]] = X[[pivot, row]]
        X[row, :] = X[row, :] / X[row, col]
        for i in range(n_rows):
            if i != row and X[i, col] != 0:
                X[i, :] = X[i, :] - X[i, col] * X[row, :]
        pivots.append(col)
        row += 1
    return X, pivots


def rational_rank(vectors: Sequence[Sequence], cols: Optional[int] = None) -> int:
    """Rank over Q of the given row vectors."""
    if not vectors:
        return 0
    return len(rational_row_echelon(vectors, cols)[1])


def solve_rational(matrix_rows: Sequence[Sequence], rhs: Sequence, cols: Optional[int] = None) -> Optional[List[Fraction]]:
    """One exact solution x of M x = b (free variables set to 0), or None if inconsistent."""
    if cols is None:
        cols = len(matrix_rows[0]) if matrix_rows else 0
    if len(rhs) != len(matrix_rows):
        raise RankMismatch(f"{len(matrix_rows)} equations but {len(rhs)} right-hand sides")
    augmented = [list(row) + [b] for row, b in zip(matrix_rows, rhs)]
    X, pivots = rational_row_echelon(augmented, cols + 1)
    if cols in pivots:
        return None
    solution = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        solution[col] = X[i, cols]
    return solution


def rational_nullspace(matrix_rows: Sequence[Sequence], cols: int) -> List[List[Fraction]]:
    """Basis of {x in Q^cols | M x = 0}, one vector per free column."""
    if not matrix_rows:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    X, pivots = rational_row_echelon(matrix_rows, cols)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        vector = [Fraction(0)] * cols
        vector[free] = Fraction(1)
        for i, col in enumerate(pivots):
            vector[col] = -X[i, free]
        basis.append(vector)
    return basis


def rational_determinant(rows: Sequence[Sequence]) -> Fraction:
    X = _fraction_array(rows, len(rows))
    n = X.shape[0]
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if X[i, col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            X[[col, pivot]] = X[[pivot, col]]
            det = -det
        det *= X[col, col]
        for i in range(col + 1, n):
            if X[i, col] != 0:
                X[i, :] = X[i, :] - (X[i, col] / X[col, col]) * X[col, :]
    return det


def rational_inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(rows)
    augmented = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    X, pivots = rational_row_echelon(augmented, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [[X[i, n + j] for j in range(n)] for i in range(n)]


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    """Determinant of the 2x2 matrix with columns u, v."""
    return u[0] * v[1] - u[1] * v[0]


# =============================================================================
# Finite abelian groups
# =============================================================================


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... | dk and every di >= 2.

    Despite the name a free part is allowed, so the type also describes
    cokernels such as Z^2 / Z(0,1) = Z. Factors equal to 1 are dropped, zeros
    are moved to the free part, and any other list is brought to invariant
    factor form, so equal groups compare equal.
    """

    free_rank: int = 0
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError(f"negative free rank {self.free_rank}")
        factors = [abs(_to_int(f)) for f in self.invariant_factors]
        free_rank = self.free_rank + sum(1 for f in factors if f == 0)
        torsion = [f for f in factors if f > 1]
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            torsion = _invariant_factors_of_diagonal(torsion)
        object.__setattr__(self, "free_rank", free_rank)
        object.__setattr__(self, "invariant_factors", tuple(torsion))

    @classmethod
    def trivial(cls) -> "FiniteAbelianGroup":
        return cls()

    @classmethod
    def cyclic(cls, order: int) -> "FiniteAbelianGroup":
        return cls(0, (order,))

    @classmethod
    def free(cls, rank: int) -> "FiniteAbelianGroup":
        return cls(rank, ())

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariant_factors, 1)

    @property
    def order(self) -> Optional[int]:
        """Group order, or None for infinite groups."""
        return self.torsion_order if self.is_finite() else None

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteAbelianGroup":
        return cls(int(data.get("free_rank", 0)), tuple(data.get("invariant_factors", ())))

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts)


# =============================================================================
# Normal forms
# =============================================================================


@dataclass(frozen=True)
class SmithForm:
    """D = U A V with U, V unimodular; the inverses are kept for lattice bases."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    U_inv: IntegerMatrix
    V_inv: IntegerMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.D.diagonal() if d != 0)

    @property
    def invariant_factors(self) -> List[int]:
        """Nonzero diagonal entries of D, in divisibility order."""
        return [d for d in self.D.diagonal() if d != 0]


class _SmithReducer:
    """Applies elementary operations to D while keeping U, V and their inverses in step."""

    def __init__(self, A: IntegerMatrix):
        self.rows, self.cols = A.shape
        self.D = A.to_array()
        self.U = IntegerMatrix.identity(self.rows).to_array()
        self.U_inv = self.U.copy()
        self.V = IntegerMatrix.identity(self.cols).to_array()
        self.V_inv = self.V.copy()

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        self.D[[i, j]] = self.D[[j, i]]
        self.U[[i, j]] = self.U[[j, i]]
        self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def add_row(self, target: int, source: int, q: int):
        # row_target += q * row_source
        self.D[target] = self.D[target] + q * self.D[source]
        self.U[target] = self.U[target] + q * self.U[source]
        self.U_inv[:, source] = self.U_inv[:, source] - q * self.U_inv[:, target]

    def negate_row(self, i: int):
        self.D[i] = -self.D[i]
        self.U[i] = -self.U[i]
        self.U_inv[:, i] = -self.U_inv[:, i]

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        self.D[:, [i, j]] = self.D[:, [j, i]]
        self.V[:, [i, j]] = self.V[:, [j, i]]
        self.V_inv[[i, j]] = self.V_inv[[j, i]]

    def add_col(self, target: int, source: int, q: int):
        # col_target += q * col_source
        self.D[:, target] = self.D[:, target] + q * self.D[:, source]
        self.V[:, target] = self.V[:, target] + q * self.V[:, source]
        self.V_inv[source] = self.V_inv[source] - q * self.V_inv[target]

    def _find_pivot(self, t: int) -> Optional[Tuple[int, int]]:
        """Smallest nonzero |entry| in the trailing block; ties go to lowest row, then column."""
        best = None
        for i in range(t, self.rows):
            for j in range(t, self.cols):
                value = self.D[i, j]
                if value != 0:
                    key = (abs(value), i, j)
                    if best is None or key < best:
                        best = key
        return None if best is None else (best[1], best[2])

    def _first_non_multiple(self, t: int) -> Optional[int]:
        pivot = self.D[t, t]
        for i in range(t + 1, self.rows):
            for j in range(t + 1, self.cols):
                if self.D[i, j] % pivot != 0:
                    return i
        return None

    def run(self) -> SmithForm:
        for t in range(min(self.rows, self.cols)):
            while True:
                pivot = self._find_pivot(t)
                if pivot is None:
                    return self._result()
                self.swap_rows(t, pivot[0])
                self.swap_cols(t, pivot[1])
                p = self.D[t, t]

                remainder = False
                for i in range(t + 1, self.rows):
                    if self.D[i, t] != 0:
                        self.add_row(i, t, -(self.D[i, t] // p))
                        remainder = remainder or self.D[i, t] != 0
                for j in range(t + 1, self.cols):
                    if self.D[t, j] != 0:
                        self.add_col(j, t, -(self.D[t, j] // p))
                        remainder = remainder or self.D[t, j] != 0
                if remainder:
                    continue

                # Row and column are clear; enforce divisibility of the rest.
                offender = self._first_non_multiple(t)
                if offender is not None:
                    self.add_row(t, offender, 1)
                    continue
                break
            if self.D[t, t] < 0:
                self.negate_row(t)
        return self._result()

    def _result(self) -> SmithForm:
        return SmithForm(
            U=IntegerMatrix.from_array(self.U),
            D=IntegerMatrix.from_array(self.D),
            V=IntegerMatrix.from_array(self.V),
            U_inv=IntegerMatrix.from_array(self.U_inv),
            V_inv=IntegerMatrix.from_array(self.V_inv),
        )


def smith_decomposition(A: IntegerMatrix) -> SmithForm:
    """Smith normal form together with the inverses of the transforms."""
    logger.debug(f"Smith normal form of a {A.rows}x{A.cols} matrix")
    return _SmithReducer(A).run()


def smith_normal_form(A: IntegerMatrix) -> Tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Smith normal form D = U A V.

    Args:
        A: Any rectangular integer matrix

    Returns:
        Tuple (U, D, V) with U, V unimodular and D diagonal, non-negative,
        d1 | d2 | ... along the diagonal
    """
    form = smith_decomposition(A)
    return form.U, form.D, form.V


def _invariant_factors_of_diagonal(factors: Sequence[int]) -> List[int]:
    n = len(factors)
    diagonal = IntegerMatrix(tuple(tuple(factors[i] if i == j else 0 for j in range(n)) for i in range(n)), n)
    return [d for d in smith_decomposition(diagonal).invariant_factors if d > 1]


def hermite_normal_form(A: IntegerMatrix) -> Tuple[IntegerMatrix, IntegerMatrix]:
    """Row Hermite normal form H = U A.

    H is in row echelon form, pivots are positive and the entries above each
    pivot lie in [0, pivot). Zero rows collect at the bottom.

    Returns:
        Tuple (H, U) with U unimodular
    """
    rows, cols = A.shape
    H = A.to_array()
    U = IntegerMatrix.identity(rows).to_array()
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        found = False
        while True:
            candidates = [i for i in range(row, rows) if H[i, col] != 0]
            if not candidates:
                break
            found = True
            pivot = min(candidates, key=lambda i: (abs(H[i, col]), i))
            if pivot != row:
                H[[row, pivot]] = H[[pivot, row]]
                U[[row, pivot]] = U[[pivot, row]]
            cleared = True
            for i in range(row + 1, rows):
                if H[i, col] != 0:
                    q = H[i, col] // H[row, col]
                    H[i] = H[i] - q * H[row]
                    U[i] = U[i] - q * U[row]
                    cleared = cleared and H[i, col] == 0
            if cleared:
                break
        if not found:
            continue
        if H[row, col] < 0:
            H[row] = -H[row]
            U[row] = -U[row]
        for i in range(row):
            q = H[i, col] // H[row, col]
            if q:
                H[i] = H[i] - q * H[row]
                U[i] = U[i] - q * U[row]
        row += 1
    if rows == 0:
        return IntegerMatrix.zeros(0, cols), IntegerMatrix.zeros(0, 0)
    return IntegerMatrix.from_array(H), IntegerMatrix.from_array(U)


# =============================================================================
# Lattice operations
# =============================================================================


def primitivize(v: LatticeVector) -> LatticeVector:
    """Divide v by the gcd of its coordinates."""
    content = v.content
    if content == 0:
        raise ZeroVector("the zero vector has no primitive direction")
    return LatticeVector(tuple(a // content for a in v.coords))


def _matrix_of(gens: Sequence[LatticeVector], rank: Optional[int]) -> IntegerMatrix:
    rank = common_rank(gens, rank)
    return IntegerMatrix.from_rows((g.coords for g in gens), rank)


def hermite_basis(gens: Sequence[LatticeVector], rank: Optional[int] = None) -> List[LatticeVector]:
    """Canonical basis (nonzero HNF rows) of the Z-span of gens."""
    if not gens:
        return []
    H, _ = hermite_normal_form(_matrix_of(gens, rank))
    return [v for v in H.row_vectors() if not v.is_zero()]


def saturation(gens: Sequence[LatticeVector]) -> List[LatticeVector]:
    """Basis of span_R(gens) ∩ Z^n, in Hermite normal form."""
    if not gens:
        return []
    form = smith_decomposition(_matrix_of(gens, None))
    # Rows of V^-1 belonging to nonzero invariant factors span the saturation.
    basis = form.V_inv.row_vectors()[: form.rank]
    return hermite_basis(basis, gens[0].rank)


def is_basis_of_saturation(gens: Sequence[LatticeVector]) -> bool:
    """True iff gens are Q-independent and Z-span the lattice points of their real span."""
    if not gens:
        return True
    form = smith_decomposition(_matrix_of(gens, None))
    return form.rank == len(gens) and all(d == 1 for d in form.invariant_factors)


def index_in_saturation(gens: Sequence[LatticeVector]) -> int:
    """[span_R(gens) ∩ Z^n : Z-span(gens)]."""
    if not gens:
        return 1
    form = smith_decomposition(_matrix_of(gens, None))
    return reduce(lambda a, b: a * b, form.invariant_factors, 1)


def quotient_invariants(sublattice_gens: Sequence[LatticeVector], rank: int) -> FiniteAbelianGroup:
    """Invariant factors and free rank of Z^rank / Z-span(sublattice_gens)."""
    if not sublattice_gens:
        return FiniteAbelianGroup.free(rank)
    form = smith_decomposition(_matrix_of(sublattice_gens, rank))
    return FiniteAbelianGroup(rank - form.rank, tuple(d for d in form.invariant_factors if d > 1))


def lattice_contains(basis: Sequence[LatticeVector], v: LatticeVector) -> bool:
    """True iff v is an integer combination of basis (basis assumed Q-independent)."""
    if v.is_zero():
        return True
    if not basis:
        return False
    columns = [list(b.coords) for b in basis]
    matrix_rows = [[column[i] for column in columns] for i in range(v.rank)]
    solution = solve_rational(matrix_rows, list(v.coords), len(basis))
    return solution is not None and all(c.denominator == 1 for c in solution)


def coordinates_in_basis(basis: Sequence[LatticeVector], v: Union[LatticeVector, RationalVector]) -> Optional[List[Fraction]]:
    """Rational coordinates of v with respect to a Q-independent basis, or None if v is outside its span."""
    if not basis:
        return [] if v.is_zero() else None
    matrix_rows = [[b[i] for b in basis] for i in range(v.rank)]
    return solve_rational(matrix_rows, list(v.coords), len(basis))


def complete_to_unimodular(basis: Sequence[LatticeVector], rank: int) -> IntegerMatrix:
    """Unimodular matrix whose first rows are `basis`.

    Args:
        basis: Basis of a saturated sublattice of Z^rank
        rank: Ambient rank

    Raises:
        InvalidInput: If basis is dependent or does not span a saturated lattice
    """
    if not basis:
        return IntegerMatrix.identity(rank)
    if not is_basis_of_saturation(basis):
        raise InvalidInput("only bases of saturated sublattices extend to unimodular bases")
    form = smith_decomposition(_matrix_of(basis, rank))
    # U B V = [I | 0], so B = U^-1 [I | 0] V^-1 and [B; tail of V^-1] is unimodular.
    complement = form.V_inv.entries[len(basis):]
    return IntegerMatrix(tuple(b.coords for b in basis) + complement, rank)


@dataclass(frozen=True)
class KernelTorus:
    """Kernel data of an integer map W: Z^N -> Z^n.

    Attributes:
        kernel_basis: Basis of ker(W) over R, in Hermite normal form
        component_group: (W^-1(Z^n) ∩ Q^N) / (ker_R W + Z^N)
        component_generators: One representative in [0,1)^N per invariant factor
    """

    kernel_basis: Tuple[RationalVector, ...]
    component_group: FiniteAbelianGroup
    component_generators: Tuple[RationalVector, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.kernel_basis)

    def is_trivial(self) -> bool:
        return not self.kernel_basis and self.component_group.is_trivial()


def kernel_torus(W: IntegerMatrix) -> KernelTorus:
    """Kernel of the torus map T^N -> T^n induced by W.

    Args:
        W: n x N matrix whose columns are the normals v_i

    Returns:
        KernelTorus with the identity component's Lie algebra basis and the
        component group of the kernel subgroup of T^N
    """
    if W.cols == 0:
        return KernelTorus((), FiniteAbelianGroup.trivial(), ())
    form = smith_decomposition(W)
    rank = form.rank
    V_columns = form.V.column_vectors()

    kernel = hermite_basis(V_columns[rank:], W.cols) if rank < W.cols else []
    generators = []
    factors = []
    for index, d in enumerate(form.invariant_factors):
        if d > 1:
            factors.append(d)
            generators.append(RationalVector(tuple(Fraction(x, d) for x in V_columns[index])).reduced_mod_one())
    logger.debug(f"Kernel torus of {W.rows}x{W.cols} map: dim {len(kernel)}, components {factors}")
    return KernelTorus(
        kernel_basis=tuple(k.to_rational() for k in kernel),
        component_group=FiniteAbelianGroup(0, tuple(factors)),
        component_generators=tuple(generators),
    )


def parallelogram_lattice_points(mu1: LatticeVector, mu2: LatticeVector) -> int:
    """Count lattice points in {a1 mu1 + a2 mu2 | 0 <= a1, a2 <= 1} by direct enumeration."""
    if mu1.rank != 2 or mu2.rank != 2:
        raise RankMismatch("parallelograms are counted in rank 2 only")
    det = det2(mu1, mu2)
    if det == 0:
        raise DegenerateParallelogram(f"{mu1} and {mu2} are parallel")
    corners = [(0, 0), tuple(mu1), tuple(mu2), (mu1[0] + mu2[0], mu1[1] + mu2[1])]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    # Cramer coordinates scaled by |det|, so the test stays in integers.
    sign = 1 if det > 0 else -1
    bound = abs(det)
    count = 0
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            a1 = sign * det2((x, y), mu2)
            a2 = sign * det2(mu1, (x, y))
            if 0 <= a1 <= bound and 0 <= a2 <= bound:
                count += 1
    return count
