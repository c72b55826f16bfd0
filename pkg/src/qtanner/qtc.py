"""Quantum Tanner code assembly: CSS checks from a complex and local codes.

Qubits sit on the squares of a left-right Cayley complex (qubit id =
canonical square id).  Z generators put C_A x C_B codewords on the local
views of V0 vertices; X generators put C_A-perp x C_B-perp codewords on
the local views of V1 vertices.  Rows are kept in per-vertex blocks, in
generator-basis order, so the decoder can slice syndromes by vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import gf2
from .cayley_complex import (
    FiniteGroup,
    GeneratingSetPair,
    LeftRightCayleyComplex,
    build_cyclic,
    build_from_table,
    build_psl2,
)
from .errors import (
    DimensionMismatchError,
    InvariantViolationError,
    SizeLimitError,
    ValidationError,
)
from .gf2 import BitMatrix, BitVector
from .local_codes import ClassicalCode, dual_code

BUNDLE_FORMAT = "quantum-tanner-bundle/1"


@dataclass
class QuantumTannerCode:
    complex: LeftRightCayleyComplex
    code_a: ClassicalCode
    code_b: ClassicalCode
    n: int
    k: int
    h_x: BitMatrix
    h_z: BitMatrix
    x_block: int  # rows per V1 vertex = (Delta-k_A)(Delta-k_B)
    z_block: int  # rows per V0 vertex = k_A k_B
    seeds: Dict[str, int] = field(default_factory=dict)
    _hz_rowspace: Optional[gf2.RowSpace] = field(default=None, repr=False)
    _hx_rowspace: Optional[gf2.RowSpace] = field(default=None, repr=False)

    @property
    def delta(self) -> int:
        return self.complex.delta

    def hz_rowspace(self) -> gf2.RowSpace:
        if self._hz_rowspace is None:
            self._hz_rowspace = gf2.RowSpace(self.h_z)
        return self._hz_rowspace

    def hx_rowspace(self) -> gf2.RowSpace:
        if self._hx_rowspace is None:
            self._hx_rowspace = gf2.RowSpace(self.h_x)
        return self._hx_rowspace


def _embed_tensor_rows(
    views, vertex_count: int, left: BitMatrix, right: BitMatrix, n: int
) -> BitMatrix:
    """One row per (vertex, left basis row i, right basis row j): the outer
    product outer(left_i, right_j) pushed through the vertex's local-view
    square ids."""
    rows: List[int] = []
    for v in range(vertex_count):
        view = views[v]
        for ga in left.row_bits:
            a_support = []
            rest = ga
            while rest:
                low = rest & -rest
                a_support.append(low.bit_length() - 1)
                rest ^= low
            for gb in right.row_bits:
                b_support = []
                rest = gb
                while rest:
                    low = rest & -rest
                    b_support.append(low.bit_length() - 1)
                    rest ^= low
                bits = 0
                for r in a_support:
                    for c in b_support:
                        bits |= 1 << int(view[r, c])
                rows.append(bits)
    return BitMatrix(len(rows), n, rows)


def assemble(
    complex_: LeftRightCayleyComplex,
    code_a: ClassicalCode,
    code_b: ClassicalCode,
    seeds: Optional[Dict[str, int]] = None,
) -> QuantumTannerCode:
    """Build the CSS code; verifies commutation and the LDPC structure."""
    if code_a.delta != complex_.delta or code_b.delta != complex_.delta:
        raise DimensionMismatchError(
            "local code blocklength differs from the pair size Delta"
        )
    n = complex_.num_squares
    order = complex_.group.order
    delta = complex_.delta
    h_z = _embed_tensor_rows(
        complex_.view_v0, order, code_a.generator, code_b.generator, n
    )
    h_x = _embed_tensor_rows(
        complex_.view_v1, order, code_a.parity, code_b.parity, n
    )
    z_block = code_a.k * code_b.k
    x_block = (delta - code_a.k) * (delta - code_b.k)

    commute = gf2.mat_mul(h_x, h_z.transpose())
    for r in range(commute.rows):
        if commute.row_bits[r]:
            c = (commute.row_bits[r] & -commute.row_bits[r]).bit_length() - 1
            v1 = r // x_block if x_block else 0
            v0 = c // z_block if z_block else 0
            raise InvariantViolationError(
                f"X/Z generators anticommute: V1 vertex {v1} row {r}, "
                f"V0 vertex {v0} row {c} (local-view orientation bug)"
            )

    code = QuantumTannerCode(
        complex=complex_,
        code_a=code_a,
        code_b=code_b,
        n=n,
        k=n - gf2.rank(h_x) - gf2.rank(h_z),
        h_x=h_x,
        h_z=h_z,
        x_block=x_block,
        z_block=z_block,
        seeds=dict(seeds or {}),
    )
    _check_ldpc_structure(code)
    return code


def _check_ldpc_structure(code: QuantumTannerCode) -> None:
    d2 = code.delta * code.delta
    for m in (code.h_x, code.h_z):
        for bits in m.row_bits:
            if bits.bit_count() > d2:
                raise InvariantViolationError("generator weight exceeds Delta^2")
    # Each qubit may appear in the generators of at most 4 vertices' local
    # views (its two V0 and two V1 corners).
    touching: List[set] = [set() for _ in range(code.n)]
    for r, bits in enumerate(code.h_x.row_bits):
        v = ("x", r // code.x_block) if code.x_block else ("x", 0)
        rest = bits
        while rest:
            low = rest & -rest
            touching[low.bit_length() - 1].add(v)
            rest ^= low
    for r, bits in enumerate(code.h_z.row_bits):
        v = ("z", r // code.z_block) if code.z_block else ("z", 0)
        rest = bits
        while rest:
            low = rest & -rest
            touching[low.bit_length() - 1].add(v)
            rest ^= low
    for q, vs in enumerate(touching):
        if len(vs) > 4:
            raise InvariantViolationError(
                f"qubit {q} appears in {len(vs)} vertices' generators"
            )


def syndrome(code: QuantumTannerCode, e: BitVector) -> BitVector:
    """X-stabilizer syndrome H_X @ e of a Z-error pattern."""
    if e.length != code.n:
        raise DimensionMismatchError(f"error length {e.length} != n {code.n}")
    return gf2.mat_vec(code.h_x, e)


def is_stabilizer_equivalent(code: QuantumTannerCode, residual: BitVector) -> bool:
    """Whether the residual lies in the Z-stabilizer group (rowspace of H_Z)."""
    if residual.length != code.n:
        raise DimensionMismatchError(
            f"residual length {residual.length} != n {code.n}"
        )
    return code.hz_rowspace().contains(residual)


@dataclass
class DistanceCertificate:
    certified_floor: int  # all logicals have weight > w_max scanned
    logical: Optional[BitVector] = None
    side: Optional[str] = None  # 'Z' or 'X': which distance the witness bounds

    @property
    def found(self) -> bool:
        return self.logical is not None


def certify_distance_lower_bound(
    code: QuantumTannerCode, w_max: int, limit: int = 5_000_000
) -> DistanceCertificate:
    """Scan all errors of weight 1..w_max for logicals on both sides.

    A Z-side logical is x in ker H_X outside rowspace(H_Z); symmetrically
    for X.  Returns the first (minimum-weight) logical found, else
    certifies d >= w_max + 1.
    """
    total = 0
    comb = 1
    for i in range(1, w_max + 1):
        comb = comb * (code.n - i + 1) // i
        total += comb
    if total > limit:
        raise SizeLimitError(
            f"weight-{w_max} scan needs {total} candidates (> {limit})"
        )
    hx_cols = code.h_x.transpose().row_bits
    hz_cols = code.h_z.transpose().row_bits
    hz_space = code.hz_rowspace()
    hx_space = code.hx_rowspace()
    for x in gf2.enumerate_by_weight(code.n, w_max):
        if x.bits == 0:
            continue
        sx = 0
        sz = 0
        for q in x.support():
            sx ^= hx_cols[q]
            sz ^= hz_cols[q]
        if sx == 0 and not hz_space.contains(x):
            return DistanceCertificate(
                certified_floor=x.weight() - 1, logical=x, side="Z"
            )
        if sz == 0 and not hx_space.contains(x):
            return DistanceCertificate(
                certified_floor=x.weight() - 1, logical=x, side="X"
            )
    return DistanceCertificate(certified_floor=w_max)


# -- bundle serialization ------------------------------------------------


def _group_descriptor(group: FiniteGroup) -> Dict:
    name = group.name
    if name.startswith("cyclic:"):
        return {"kind": "cyclic", "n": int(name.split(":")[1])}
    if name.startswith("psl2:"):
        return {"kind": "psl2", "q": int(name.split(":")[1])}
    return {
        "kind": "table",
        "name": name,
        "identity": group.identity,
        "mul_table": group.table.tolist(),
    }


def _group_from_descriptor(desc: Dict) -> FiniteGroup:
    kind = desc.get("kind")
    if kind == "cyclic":
        return build_cyclic(int(desc["n"]))
    if kind == "psl2":
        return build_psl2(int(desc["q"]))
    if kind == "table":
        return build_from_table(
            desc.get("name", "table:anonymous"), desc["mul_table"], int(desc["identity"])
        )
    raise ValidationError(f"unknown group descriptor kind {kind!r}")


def bundle_to_text(code: QuantumTannerCode) -> str:
    """Deterministic single-line JSON bundle; byte-exact round trip."""
    payload = {
        "format": BUNDLE_FORMAT,
        "header": {
            "n": code.n,
            "k": code.k,
            "delta": code.delta,
            "group": _group_descriptor(code.complex.group),
            "seeds": code.seeds,
        },
        "gens_a": list(code.complex.pair.gens_a),
        "gens_b": list(code.complex.pair.gens_b),
        "code_a": code.code_a.to_file_text(),
        "code_b": code.code_b.to_file_text(),
        "h_x": code.h_x.to_text(),
        "h_z": code.h_z.to_text(),
        "qubit_index": [[sq.g, sq.a, sq.b] for sq in code.complex.squares],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def bundle_from_text(text: str) -> QuantumTannerCode:
    """Rebuild and re-verify a code bundle; all invariants are re-checked."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bundle is not valid JSON: {exc}") from exc
    if payload.get("format") != BUNDLE_FORMAT:
        raise ValidationError(f"unsupported bundle format {payload.get('format')!r}")
    header = payload["header"]
    group = _group_from_descriptor(header["group"])
    pair = GeneratingSetPair(
        tuple(int(g) for g in payload["gens_a"]),
        tuple(int(g) for g in payload["gens_b"]),
    )
    complex_ = LeftRightCayleyComplex(group, pair)
    code_a = ClassicalCode.from_file_text(payload["code_a"])
    code_b = ClassicalCode.from_file_text(payload["code_b"])
    code = assemble(
        complex_, code_a, code_b, seeds={k: int(v) for k, v in header["seeds"].items()}
    )
    expected_index = [[sq.g, sq.a, sq.b] for sq in complex_.squares]
    if payload["qubit_index"] != expected_index:
        raise ValidationError("bundle qubit index disagrees with the complex")
    if BitMatrix.from_text(payload["h_x"]) != code.h_x:
        raise ValidationError("bundle h_x disagrees with the reassembled code")
    if BitMatrix.from_text(payload["h_z"]) != code.h_z:
        raise ValidationError("bundle h_z disagrees with the reassembled code")
    if int(header["n"]) != code.n or int(header["k"]) != code.k:
        raise ValidationError("bundle header (n, k) disagrees with the code")
    return code
