"""Exact GF(2) linear algebra on bit-packed vectors and matrices.

Vectors and matrices store their bits in Python integers (bit i of a row
is coordinate i, so the lowest bit is column 0).  All values are immutable
after construction; every operation allocates a fresh result.  Gaussian
elimination always pivots on the lowest available column index, so ranks,
kernels, and solutions are deterministic.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, List, Optional, Sequence

from .errors import DimensionMismatchError, ValidationError


class BitVector:
    """Length-n vector over GF(2), packed into one integer."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 0:
            raise ValidationError(f"vector length must be >= 0, got {length}")
        mask = (1 << length) - 1
        if bits & ~mask:
            raise ValidationError("set bits beyond vector length")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("BitVector is immutable")

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVector":
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise ValidationError(f"support index {i} out of range [0,{length})")
            bits |= 1 << i
        return cls(length, bits)

    @classmethod
    def from01(cls, s: str) -> "BitVector":
        bits = 0
        for i, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValidationError(f"invalid character {ch!r} in bit string")
        return cls(len(s), bits)

    def get(self, i: int) -> int:
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> List[int]:
        bits = self.bits
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def dot(self, other: "BitVector") -> int:
        if self.length != other.length:
            raise DimensionMismatchError("dot product on unequal lengths")
        return (self.bits & other.bits).bit_count() & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise DimensionMismatchError("xor on unequal lengths")
        return BitVector(self.length, self.bits ^ other.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and self.bits == other.bits
        )

    def __hash__(self):
        return hash((self.length, self.bits))

    def to01(self) -> str:
        return "".join("1" if self.get(i) else "0" for i in range(self.length))

    def __repr__(self):
        return f"BitVector({self.to01()!r})"


class BitMatrix:
    """rows x cols matrix over GF(2), one packed integer per row."""

    __slots__ = ("rows", "cols", "row_bits")

    def __init__(self, rows: int, cols: int, row_bits: Sequence[int]):
        if rows < 0 or cols < 0:
            raise ValidationError("matrix dimensions must be >= 0")
        if len(row_bits) != rows:
            raise ValidationError(f"expected {rows} rows, got {len(row_bits)}")
        mask = (1 << cols) - 1
        for r, bits in enumerate(row_bits):
            if bits & ~mask:
                raise ValidationError(f"row {r} has set bits beyond {cols} columns")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "row_bits", tuple(row_bits))

    def __setattr__(self, name, value):
        raise AttributeError("BitMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "BitMatrix":
        """Build from '0'/'1' strings; leftmost character is column 0."""
        vecs = [BitVector.from01(r) for r in rows]
        if vecs and any(v.length != vecs[0].length for v in vecs):
            raise ValidationError("rows have unequal lengths")
        cols = vecs[0].length if vecs else 0
        return cls(len(vecs), cols, [v.bits for v in vecs])

    @classmethod
    def from_vectors(cls, vecs: Sequence[BitVector], cols: Optional[int] = None) -> "BitMatrix":
        if vecs:
            cols = vecs[0].length if cols is None else cols
            if any(v.length != cols for v in vecs):
                raise ValidationError("rows have unequal lengths")
        elif cols is None:
            cols = 0
        return cls(len(vecs), cols, [v.bits for v in vecs])

    def row(self, r: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[r])

    def get(self, r: int, c: int) -> int:
        return (self.row_bits[r] >> c) & 1

    def is_zero(self) -> bool:
        return all(bits == 0 for bits in self.row_bits)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for r, bits in enumerate(self.row_bits):
            while bits:
                low = bits & -bits
                out[low.bit_length() - 1] |= 1 << r
                bits ^= low
        return BitMatrix(self.cols, self.rows, out)

    def row_supports(self) -> List[List[int]]:
        return [self.row(r).support() for r in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.row_bits == other.row_bits
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.row_bits))

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"

    def to_text(self) -> str:
        """Serialize: first line 'rows cols', then one '0'/'1' string per row."""
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(self.row(r).to01() for r in range(self.rows))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValidationError("empty matrix text")
        try:
            rows, cols = (int(x) for x in lines[0].split())
        except ValueError as exc:
            raise ValidationError(f"bad matrix header {lines[0]!r}") from exc
        if len(lines) - 1 != rows:
            raise ValidationError(f"expected {rows} rows, found {len(lines) - 1}")
        body = []
        for ln in lines[1:]:
            if len(ln) != cols:
                raise ValidationError(f"row length {len(ln)} != cols {cols}")
            body.append(ln)
        return cls.from_rows(body) if rows else cls.zeros(0, cols)


def _eliminate(row_bits: List[int], cols: int) -> List[int]:
    """In-place forward elimination; returns pivot column per reduced row."""
    pivots = []
    pivot_row = 0
    for col in range(cols):
        sel = None
        for r in range(pivot_row, len(row_bits)):
            if (row_bits[r] >> col) & 1:
                sel = r
                break
        if sel is None:
            continue
        row_bits[pivot_row], row_bits[sel] = row_bits[sel], row_bits[pivot_row]
        for r in range(len(row_bits)):
            if r != pivot_row and ((row_bits[r] >> col) & 1):
                row_bits[r] ^= row_bits[pivot_row]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(row_bits):
            break
    return pivots


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    work = list(m.row_bits)
    return len(_eliminate(work, m.cols))


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {x : m @ x = 0}, one vector per row; cols(m) - rank(m) rows.

    Free coordinates are set one at a time in ascending column order, and
    pivot coordinates are back-filled, so the basis is deterministic.
    """
    work = list(m.row_bits)
    pivots = _eliminate(work, m.cols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        x = 1 << fc
        # work is in reduced row-echelon form: row i has its pivot at
        # pivots[i] and zeros in every other pivot column.
        for i, pc in enumerate(pivots):
            if (work[i] >> fc) & 1:
                x |= 1 << pc
        basis.append(x)
    return BitMatrix(len(basis), m.cols, basis)


def solve(m: BitMatrix, b: BitVector) -> Optional[BitVector]:
    """One solution x of m @ x = b, or None when the system is inconsistent.

    Pivoting is fixed to the lowest column index, and free coordinates are
    set to zero, so the returned solution is deterministic.
    """
    if b.length != m.rows:
        raise DimensionMismatchError(
            f"rhs length {b.length} != matrix rows {m.rows}"
        )
    # Augment each row with its rhs bit at column `cols`.
    work = [m.row_bits[r] | (b.get(r) << m.cols) for r in range(m.rows)]
    pivots = _eliminate(work, m.cols)
    n_piv = len(pivots)
    for r in range(n_piv, m.rows):
        if work[r]:
            return None
    x = 0
    for i, pc in enumerate(pivots):
        if (work[i] >> m.cols) & 1:
            x |= 1 << pc
    return BitVector(m.cols, x)


def mat_vec(m: BitMatrix, x: BitVector) -> BitVector:
    if x.length != m.cols:
        raise DimensionMismatchError(f"vector length {x.length} != cols {m.cols}")
    out = 0
    for r, bits in enumerate(m.row_bits):
        out |= ((bits & x.bits).bit_count() & 1) << r
    return BitVector(m.rows, out)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) matrix product a @ b."""
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cols(a)={a.cols} != rows(b)={b.rows}")
    out = []
    for bits in a.row_bits:
        acc = 0
        rest = bits
        while rest:
            low = rest & -rest
            acc ^= b.row_bits[low.bit_length() - 1]
            rest ^= low
        out.append(acc)
    return BitMatrix(a.rows, b.cols, out)


def in_rowspan(m: BitMatrix, v: BitVector) -> bool:
    """Whether v lies in the row space of m."""
    if v.length != m.cols:
        raise DimensionMismatchError(f"vector length {v.length} != cols {m.cols}")
    work = list(m.row_bits)
    _eliminate(work, m.cols)
    x = v.bits
    for bits in work:
        if bits:
            low = bits & -bits
            if (x >> (low.bit_length() - 1)) & 1:
                x ^= bits
    return x == 0


class RowSpace:
    """Reduced row basis of a matrix, for repeated membership queries."""

    def __init__(self, m: BitMatrix):
        work = list(m.row_bits)
        _eliminate(work, m.cols)
        self.cols = m.cols
        self.basis = [bits for bits in work if bits]

    def reduce(self, v: BitVector) -> int:
        """Remainder of v after elimination against the basis (as raw bits)."""
        if v.length != self.cols:
            raise DimensionMismatchError("length mismatch in rowspace query")
        x = v.bits
        for bits in self.basis:
            low = bits & -bits
            if (x >> (low.bit_length() - 1)) & 1:
                x ^= bits
        return x

    def contains(self, v: BitVector) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self.basis)


def enumerate_by_weight(length: int, max_weight: int) -> Iterator[BitVector]:
    """All vectors of weight 0..max_weight, in non-decreasing weight order.

    Within one weight class the order follows itertools.combinations over
    ascending positions, so the stream is deterministic.
    """
    if max_weight > length:
        raise ValidationError(f"max_weight {max_weight} exceeds length {length}")
    for w in range(max_weight + 1):
        for positions in itertools.combinations(range(length), w):
            bits = 0
            for p in positions:
                bits |= 1 << p
            yield BitVector(length, bits)


def enumerate_ints_by_weight(length: int, max_weight: int) -> Iterator[int]:
    """Like enumerate_by_weight but yielding raw packed integers."""
    if max_weight > length:
        raise ValidationError(f"max_weight {max_weight} exceeds length {length}")
    for w in range(max_weight + 1):
        for positions in itertools.combinations(range(length), w):
            bits = 0
            for p in positions:
                bits |= 1 << p
            yield bits


def random_matrix(rows: int, cols: int, rng) -> BitMatrix:
    """Uniformly random rows x cols matrix drawn from rng.getrandbits."""
    if cols == 0:
        return BitMatrix.zeros(rows, 0)
    return BitMatrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])
