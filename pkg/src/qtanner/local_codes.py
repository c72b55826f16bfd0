"""Classical codes of small blocklength and their (dual) tensor codes.

Everything here works at desk scale: distances come from full codeword
enumeration, robustness verdicts from exhaustive cover checks.  Blocklength
Delta matrices live in BitMatrix form; a Delta x Delta codeword is flattened
row-major (entry (r, c) -> bit r*Delta + c) whenever a vector view is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from . import gf2
from .errors import (
    DimensionMismatchError,
    SearchExhaustedError,
    SizeLimitError,
    ValidationError,
)
from .gf2 import BitMatrix, BitVector

# Full enumeration of 2^k objects is refused beyond this dimension.
MAX_ENUM_DIM = 24

RESAMPLE_CAP = 64


@dataclass
class ClassicalCode:
    """A [Delta, k] linear code with full-rank parity and generator matrices.

    `distance` is None until computed; `min_distance` fills it in.
    """

    delta: int
    k: int
    parity: BitMatrix
    generator: BitMatrix
    distance: Optional[int] = None

    def __post_init__(self):
        h, g = self.parity, self.generator
        if h.cols != self.delta or g.cols != self.delta:
            raise ValidationError("parity/generator column count != blocklength")
        if h.rows != self.delta - self.k or g.rows != self.k:
            raise ValidationError("parity/generator row counts inconsistent with k")
        if not gf2.mat_mul(h, g.transpose()).is_zero():
            raise ValidationError("H @ G^T != 0")
        if gf2.rank(h) != h.rows or gf2.rank(g) != g.rows:
            raise ValidationError("parity or generator matrix is not full rank")

    @classmethod
    def from_parity_check(cls, h: BitMatrix) -> "ClassicalCode":
        """Build from any parity-check matrix; rows are reduced to a basis."""
        delta = h.cols
        work = list(h.row_bits)
        gf2._eliminate(work, delta)
        basis = [bits for bits in work if bits]
        h_full = BitMatrix(len(basis), delta, basis)
        g = gf2.kernel_basis(h_full)
        return cls(delta=delta, k=g.rows, parity=h_full, generator=g)

    @classmethod
    def from_generator(cls, g: BitMatrix) -> "ClassicalCode":
        delta = g.cols
        work = list(g.row_bits)
        gf2._eliminate(work, delta)
        basis = [bits for bits in work if bits]
        g_full = BitMatrix(len(basis), delta, basis)
        h = gf2.kernel_basis(g_full)
        return cls(delta=delta, k=g_full.rows, parity=h, generator=g_full)

    def contains(self, v: BitVector) -> bool:
        return gf2.mat_vec(self.parity, v).bits == 0

    def codewords(self) -> Iterator[BitVector]:
        """All 2^k codewords in Gray-code order (starts at zero)."""
        if self.k > MAX_ENUM_DIM:
            raise SizeLimitError(f"cannot enumerate 2^{self.k} codewords")
        yield from _gray_span(self.generator.row_bits, self.delta)

    def rate(self) -> Fraction:
        return Fraction(self.k, self.delta)

    def to_file_text(self) -> str:
        """'classical-code Delta k' header followed by the parity matrix."""
        return f"classical-code {self.delta} {self.k}\n" + self.parity.to_text()

    @classmethod
    def from_file_text(cls, text: str) -> "ClassicalCode":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("classical-code"):
            raise ValidationError("missing classical-code header")
        parts = lines[0].split()
        if len(parts) != 3:
            raise ValidationError(f"bad header {lines[0]!r}")
        delta, k = int(parts[1]), int(parts[2])
        code = cls.from_parity_check(BitMatrix.from_text("\n".join(lines[1:])))
        if code.delta != delta or code.k != k:
            raise ValidationError("header disagrees with parity matrix")
        return code


def _gray_span(basis: Sequence[int], length: int) -> Iterator[BitVector]:
    """Span of the basis in Gray-code order: one XOR per step."""
    current = 0
    yield BitVector(length, current)
    for i in range(1, 1 << len(basis)):
        current ^= basis[(i & -i).bit_length() - 1]
        yield BitVector(length, current)


def as_fraction(x) -> Fraction:
    """Exact rational from int, str ('1/3'), Fraction, or float."""
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


def sample_random_code(delta: int, rho, rng_seed: int) -> ClassicalCode:
    """Code with a uniformly random full-rank parity-check matrix.

    Draws H uniform over (1-rho)Delta x Delta matrices, resampling while the
    draw is rank deficient (at most RESAMPLE_CAP times; the per-draw failure
    probability is at most 2^(-rho*Delta)).  Deterministic for a fixed seed.
    """
    rho = as_fraction(rho)
    if not 0 < rho < 1:
        raise ValidationError(f"rate must be in (0,1), got {rho}")
    k_frac = rho * delta
    if k_frac.denominator != 1:
        raise ValidationError(f"rho*Delta = {k_frac} is not an integer")
    k = int(k_frac)
    n_rows = delta - k
    rng = Random(rng_seed)
    for _ in range(RESAMPLE_CAP):
        h = gf2.random_matrix(n_rows, delta, rng)
        if gf2.rank(h) == n_rows:
            g = gf2.kernel_basis(h)
            return ClassicalCode(delta=delta, k=k, parity=h, generator=g)
    raise SearchExhaustedError(
        f"no full-rank {n_rows}x{delta} draw in {RESAMPLE_CAP} attempts",
        attempts=RESAMPLE_CAP,
    )


def min_distance(code: ClassicalCode) -> int:
    """Exact minimum distance by enumerating all 2^k codewords; cached."""
    if code.distance is not None:
        return code.distance
    if code.k == 0:
        raise ValidationError("the zero code has no nonzero codeword")
    if code.k > MAX_ENUM_DIM:
        raise SizeLimitError(f"cannot enumerate 2^{code.k} codewords")
    best = code.delta + 1
    for w in code.codewords():
        if w.bits and w.weight() < best:
            best = w.weight()
    code.distance = best
    return best


def dual_code(code: ClassicalCode) -> ClassicalCode:
    """C-perp: parity and generator matrices swap roles."""
    return ClassicalCode(
        delta=code.delta,
        k=code.delta - code.k,
        parity=code.generator,
        generator=code.parity,
    )


def matrix_to_flat(x: BitMatrix) -> BitVector:
    """Row-major flattening of a Delta x Delta matrix."""
    bits = 0
    for r, row in enumerate(x.row_bits):
        bits |= row << (r * x.cols)
    return BitVector(x.rows * x.cols, bits)


def flat_to_matrix(v: BitVector, rows: int, cols: int) -> BitMatrix:
    if v.length != rows * cols:
        raise DimensionMismatchError("flat vector length != rows*cols")
    mask = (1 << cols) - 1
    return BitMatrix(rows, cols, [(v.bits >> (r * cols)) & mask for r in range(rows)])


@dataclass
class DualTensorCode:
    """Delta x Delta matrices X with H_A @ X @ H_B^T = 0.

    Equivalently the span of single-column C_A codewords and single-row C_B
    codewords.
    """

    code_a: ClassicalCode
    code_b: ClassicalCode
    _basis: Optional[BitMatrix] = field(default=None, repr=False)

    def __post_init__(self):
        if self.code_a.delta != self.code_b.delta:
            raise DimensionMismatchError("component codes have unequal blocklengths")

    @property
    def delta(self) -> int:
        return self.code_a.delta

    @property
    def dimension(self) -> int:
        ka, kb, d = self.code_a.k, self.code_b.k, self.delta
        return d * kb + d * ka - ka * kb

    def member(self, x: BitMatrix) -> bool:
        if x.rows != self.delta or x.cols != self.delta:
            raise DimensionMismatchError(f"matrix is not {self.delta}x{self.delta}")
        prod = gf2.mat_mul(
            gf2.mat_mul(self.code_a.parity, x), self.code_b.parity.transpose()
        )
        return prod.is_zero()

    def span_generators(self) -> List[int]:
        """Flattened single-column and single-row generators (may be dependent)."""
        d = self.delta
        gens: List[int] = []
        for j in range(d):
            for g in self.code_a.generator.row_bits:
                bits = 0
                rest = g
                while rest:
                    low = rest & -rest
                    bits |= 1 << ((low.bit_length() - 1) * d + j)
                    rest ^= low
                gens.append(bits)
        for i in range(d):
            for g in self.code_b.generator.row_bits:
                gens.append(g << (i * d))
        return gens

    def basis(self) -> BitMatrix:
        """Row basis of the code, flattened; row count equals `dimension`."""
        if self._basis is None:
            d2 = self.delta * self.delta
            work = self.span_generators()
            gf2._eliminate(work, d2)
            rows = [bits for bits in work if bits]
            self._basis = BitMatrix(len(rows), d2, rows)
        return self._basis

    def codewords(self) -> Iterator[BitMatrix]:
        """All codewords in Gray-code order; refuses dimensions over MAX_ENUM_DIM."""
        basis = self.basis()
        if basis.rows > MAX_ENUM_DIM:
            raise SizeLimitError(f"cannot enumerate 2^{basis.rows} codewords")
        d = self.delta
        for v in _gray_span(basis.row_bits, d * d):
            yield flat_to_matrix(v, d, d)

    def distances(self) -> Tuple[int, int]:
        return min_distance(self.code_a), min_distance(self.code_b)


def dual_tensor_member(x: BitMatrix, dt: DualTensorCode) -> bool:
    return dt.member(x)


def _nonzero_cols(x: BitMatrix) -> List[int]:
    acc = 0
    for row in x.row_bits:
        acc |= row
    return BitVector(x.cols, acc).support()


def _nonzero_rows(x: BitMatrix) -> List[int]:
    return [r for r in range(x.rows) if x.row_bits[r]]


def supported_on_rows_cols(x: BitMatrix, rows: Set[int], cols: Set[int]) -> bool:
    """Whether supp(x) is inside (rows x all) union (all x cols)."""
    col_mask = 0
    for c in cols:
        col_mask |= 1 << c
    for r in range(x.rows):
        if r in rows:
            continue
        if x.row_bits[r] & ~col_mask:
            return False
    return True


def cover_within_budget(x: BitMatrix, col_budget: int, row_budget: int) -> bool:
    """Exact test: can supp(x) be covered by <=col_budget columns plus
    <=row_budget rows?  Exhausts column subsets of the nonzero columns; the
    rows still required are those with support outside the chosen columns.
    """
    nz_cols = _nonzero_cols(x)
    nz_rows = _nonzero_rows(x)
    if len(nz_rows) <= row_budget or len(nz_cols) <= col_budget:
        return True
    max_take = min(col_budget, len(nz_cols))
    for take in range(max_take + 1):
        for chosen in itertools.combinations(nz_cols, take):
            col_mask = 0
            for c in chosen:
                col_mask |= 1 << c
            residual_rows = sum(1 for bits in x.row_bits if bits & ~col_mask)
            if residual_rows <= row_budget:
                return True
    return False


@dataclass
class RobustnessVerdict:
    robust: bool
    witness: Optional[BitMatrix] = None

    def __bool__(self) -> bool:
        return self.robust


def check_w_robust(dt: DualTensorCode, w: int) -> RobustnessVerdict:
    """Whether every codeword X with 0 < |X| <= w is supported on at most
    floor(|X|/d_A) nonzero columns plus floor(|X|/d_B) nonzero rows.

    Returns the first violating codeword (in Gray enumeration order) as a
    witness otherwise.
    """
    if w <= 0:
        return RobustnessVerdict(robust=True)
    d_a, d_b = dt.distances()
    for x in dt.codewords():
        weight = matrix_to_flat(x).weight()
        if weight == 0 or weight > w:
            continue
        if not cover_within_budget(x, weight // d_a, weight // d_b):
            return RobustnessVerdict(robust=False, witness=x)
    return RobustnessVerdict(robust=True)


def check_sparse_robust(dt: DualTensorCode, row_col_cap: int) -> RobustnessVerdict:
    """Whether no nonzero codeword has every row and column weight <= cap."""
    for x in dt.codewords():
        flat = matrix_to_flat(x)
        if flat.bits == 0:
            continue
        row_ok = all(BitVector(dt.delta, bits).weight() <= row_col_cap for bits in x.row_bits)
        if not row_ok:
            continue
        xt = x.transpose()
        if all(BitVector(dt.delta, bits).weight() <= row_col_cap for bits in xt.row_bits):
            return RobustnessVerdict(robust=False, witness=x)
    return RobustnessVerdict(robust=True)


def _distance_to_code(v: BitVector, code: ClassicalCode) -> int:
    best = v.weight()
    for c in code.codewords():
        d = (v.bits ^ c.bits).bit_count()
        if d < best:
            best = d
    return best


def distance_to_column_space(x: BitMatrix, code_a: ClassicalCode) -> int:
    """d(x, C_A tensor F2^B): columns are corrected independently."""
    xt = x.transpose()
    return sum(_distance_to_code(xt.row(j), code_a) for j in range(xt.rows))


def distance_to_row_space(x: BitMatrix, code_b: ClassicalCode) -> int:
    """d(x, F2^A tensor C_B): rows are corrected independently."""
    return sum(_distance_to_code(x.row(i), code_b) for i in range(x.rows))


def distance_to_tensor_code(x: BitMatrix, dt: DualTensorCode) -> int:
    """d(x, C_A tensor C_B) by enumerating all 2^(kA*kB) tensor codewords."""
    ka, kb = dt.code_a.k, dt.code_b.k
    if ka * kb > MAX_ENUM_DIM:
        raise SizeLimitError(f"cannot enumerate 2^{ka * kb} tensor codewords")
    d = dt.delta
    gens = []
    for ga in dt.code_a.generator.row_bits:
        for gb in dt.code_b.generator.row_bits:
            bits = 0
            rest = ga
            while rest:
                low = rest & -rest
                bits |= gb << ((low.bit_length() - 1) * d)
                rest ^= low
            gens.append(bits)
    target = matrix_to_flat(x).bits
    best = target.bit_count()
    for v in _gray_span(gens, d * d):
        w = (v.bits ^ target).bit_count()
        if w < best:
            best = w
    return best


def check_tensor_distance_bound(dt: DualTensorCode, x: BitMatrix) -> bool:
    """Whether d(x, C_A x C_B) <= 3/2 (d(x, C_A x F) + d(x, F x C_B))."""
    d_col = distance_to_column_space(x, dt.code_a)
    d_row = distance_to_row_space(x, dt.code_b)
    d_tensor = distance_to_tensor_code(x, dt)
    return 2 * d_tensor <= 3 * (d_col + d_row)


def rowcol_decompose(
    x: BitMatrix,
    dt: DualTensorCode,
    rows_keep: Set[int],
    cols_keep: Set[int],
) -> Tuple[BitMatrix, BitMatrix]:
    """Split a codeword vanishing on rows_keep x cols_keep into r + c.

    r has C_B codeword rows and is supported on the complement of rows_keep;
    c has C_A codeword columns and is supported on the complement of
    cols_keep.  Follows the projection-isomorphism construction: take any
    decomposition, locate its common part in the tensor code through the
    puncturing isomorphism, and cancel it from both summands.
    """
    d = dt.delta
    d_a, d_b = dt.distances()
    d_min = min(d_a, d_b)
    rows_removed = sorted(set(range(d)) - set(rows_keep))
    cols_removed = sorted(set(range(d)) - set(cols_keep))
    if len(rows_removed) >= d_min or len(cols_removed) >= d_min:
        raise ValidationError(
            "complement sizes must be smaller than min(d_A, d_B)"
        )
    if not dt.member(x):
        raise ValidationError("matrix is not a dual tensor codeword")
    keep_col_mask = 0
    for c in cols_keep:
        keep_col_mask |= 1 << c
    for r in rows_keep:
        if x.row_bits[r] & keep_col_mask:
            raise ValidationError("matrix does not vanish on rows_keep x cols_keep")

    # Any decomposition x = r0 + c0 over the span generators.
    gens = dt.span_generators()
    gen_matrix = BitMatrix(len(gens), d * d, gens)
    coeffs = gf2.solve(gen_matrix.transpose(), matrix_to_flat(x))
    if coeffs is None:
        raise ValidationError("codeword not in generator span")  # pragma: no cover
    n_col_gens = d * dt.code_a.k
    c0_bits = 0
    r0_bits = 0
    for idx in coeffs.support():
        if idx < n_col_gens:
            c0_bits ^= gens[idx]
        else:
            r0_bits ^= gens[idx]

    # Common part on the kept submatrix, as a masked flat vector.
    keep_mask = 0
    for r in rows_keep:
        keep_mask |= keep_col_mask << (r * d)
    common = r0_bits & keep_mask

    # Tensor-code element Y agreeing with the common part on rows_keep x
    # cols_keep; unique because both puncturings are isomorphisms.
    tensor_gens = []
    for ga in dt.code_a.generator.row_bits:
        for gb in dt.code_b.generator.row_bits:
            bits = 0
            rest = ga
            while rest:
                low = rest & -rest
                bits |= gb << ((low.bit_length() - 1) * d)
                rest ^= low
            tensor_gens.append(bits)
    proj = BitMatrix(len(tensor_gens), d * d, [g & keep_mask for g in tensor_gens])
    sol = gf2.solve(proj.transpose(), BitVector(d * d, common))
    if sol is None:
        raise ValidationError("projection system unsolvable")  # pragma: no cover
    y_bits = 0
    for idx in sol.support():
        y_bits ^= tensor_gens[idx]

    r_bits = r0_bits ^ y_bits
    c_bits = c0_bits ^ y_bits
    r = flat_to_matrix(BitVector(d * d, r_bits), d, d)
    c = flat_to_matrix(BitVector(d * d, c_bits), d, d)
    return r, c


def puncture(code: ClassicalCode, removed: Sequence[int]) -> ClassicalCode:
    """Delete the given coordinates from every codeword."""
    removed_set = set(removed)
    if any(not 0 <= i < code.delta for i in removed_set):
        raise ValidationError("puncture index out of range")
    if code.distance is not None and len(removed_set) >= code.distance:
        raise ValidationError(
            f"removing {len(removed_set)} coordinates can drop the dimension "
            f"(distance {code.distance})"
        )
    keep = [i for i in range(code.delta) if i not in removed_set]
    new_rows = []
    for bits in code.generator.row_bits:
        nb = 0
        for new_i, old_i in enumerate(keep):
            nb |= ((bits >> old_i) & 1) << new_i
        new_rows.append(nb)
    g = BitMatrix(code.k, len(keep), new_rows)
    if gf2.rank(g) != code.k:
        raise ValidationError("puncturing dropped the code dimension")
    return ClassicalCode.from_generator(g)


def sample_robust_pair(
    delta: int,
    rho,
    delta_target,
    w: int,
    max_attempts: int,
    rng_seed: int,
) -> Tuple[ClassicalCode, ClassicalCode, int]:
    """Rejection-sample (C_A, C_B) with rates (rho, 1-rho) until both dual
    tensor codes are w-robust and all four component distances reach
    delta_target * Delta.  Returns the pair with the attempt count."""
    rho = as_fraction(rho)
    need = as_fraction(delta_target) * delta
    rng = Random(rng_seed)
    best = None
    best_score = (-1, False, False)
    for attempt in range(1, max_attempts + 1):
        code_a = sample_random_code(delta, rho, rng.getrandbits(63))
        code_b = sample_random_code(delta, 1 - rho, rng.getrandbits(63))
        dual_a, dual_b = dual_code(code_a), dual_code(code_b)
        dists = [min_distance(c) for c in (code_a, code_b, dual_a, dual_b)]
        dist_ok = min(dists) >= need
        robust_primal = robust_dual = False
        if dist_ok:
            robust_primal = bool(check_w_robust(DualTensorCode(code_a, code_b), w))
            if robust_primal:
                robust_dual = bool(check_w_robust(DualTensorCode(dual_a, dual_b), w))
        score = (min(dists), robust_primal, robust_dual)
        if score > best_score:
            best_score = score
            best = (code_a, code_b)
        if dist_ok and robust_primal and robust_dual:
            return code_a, code_b, attempt
    raise SearchExhaustedError(
        f"no admissible pair in {max_attempts} attempts "
        f"(best distance {best_score[0]}, robustness {best_score[1:]})",
        attempts=max_attempts,
        best=best,
    )
