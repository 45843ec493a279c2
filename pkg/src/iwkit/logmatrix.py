"""The logarithmic matrix tower attached to a Frobenius matrix.

Given C_p in GL_{2g}(Z_p) on a basis whose first g vectors span the filtered
piece (a Hodge-compatible ordering), the tower consists of

    C_phi   = C_p * diag(I_g, (1/p) I_g)
    C_n     = diag(I_g, Phi_n I_g) * C_p^{-1}          (n >= 1)
    H_n     = C_n * C_{n-1} * ... * C_1                (H_0 = I)
    M_n     = C_phi^{n+1} * H_n

Matrices with p in the denominator are kept exact as (integral entries,
global denominator exponent) pairs, normalized so the exponent is minimal.
Minor tables, character evaluation of minor sums, and change-of-basis
invariance checks for block-diagonal base changes live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .cyclotomic import cyclo_eval
from .errors import InputError, PrecisionExhaustedError
from .padic import PadicInt, mat_det, mat_inv, mat_mul
from .series import IwasawaSeries, phi


@dataclass(frozen=True)
class FrobeniusData:
    """A 2g x 2g Frobenius matrix C_p, invertible over Z_p, with the columns
    ordered Hodge-compatibly (first g spanning the filtered piece)."""

    g: int
    prime: int
    precision: int
    c_p: tuple[tuple[PadicInt, ...], ...]
    hodge_compatible: bool = True

    def __post_init__(self):
        d = 2 * self.g
        if len(self.c_p) != d or any(len(r) != d for r in self.c_p):
            raise InputError(f"C_p must be {d}x{d}")
        for row in self.c_p:
            for x in row:
                if x.prime != self.prime or x.precision != self.precision:
                    raise InputError("C_p entries must share prime and precision")
        if not mat_det([list(r) for r in self.c_p]).is_unit():
            raise InputError("C_p must be invertible over Z_p (unit determinant)")

    @classmethod
    def from_int_rows(cls, g: int, prime: int, precision: int,
                      rows: Sequence[Sequence[int]]) -> "FrobeniusData":
        return cls(g, prime, precision,
                   tuple(tuple(PadicInt(prime, x, precision) for x in row)
                         for row in rows))

    @classmethod
    def elliptic(cls, prime: int, precision: int) -> "FrobeniusData":
        """The g = 1 supersingular shape with trace zero: C_p = [[0,-1],[1,0]]."""
        return cls.from_int_rows(1, prime, precision, [[0, -1], [1, 0]])

    def block_anti_diagonal(self) -> bool:
        g = self.g
        for i in range(g):
            for j in range(g):
                if not self.c_p[i][j].is_zero():
                    return False
                if not self.c_p[g + i][g + j].is_zero():
                    return False
        return True

    def c_p_lists(self) -> list[list[PadicInt]]:
        return [list(r) for r in self.c_p]


@dataclass(frozen=True)
class LogMatrix:
    """A matrix p^{-denom_exponent} * entries over the series ring, with the
    exponent normalized to be minimal."""

    entries: tuple[tuple[IwasawaSeries, ...], ...]
    denom_exponent: int = 0

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def prime(self) -> int:
        return self.entries[0][0].prime

    @property
    def precision(self) -> int:
        return min(e.precision for row in self.entries for e in row)

    @classmethod
    def normalized(cls, entries: Sequence[Sequence[IwasawaSeries]],
                   denom_exponent: int = 0) -> "LogMatrix":
        if denom_exponent < 0:
            raise InputError("denominator exponent must be >= 0")
        rows = [list(r) for r in entries]
        strip = min(denom_exponent,
                    min(e.min_valuation() for row in rows for e in row))
        if strip > 0:
            rows = [[e.exact_div_p_power(strip) for e in row] for row in rows]
            denom_exponent -= strip
        return cls(tuple(tuple(r) for r in rows), denom_exponent)

    @classmethod
    def identity(cls, size: int, prime: int, precision: int,
                 degree_cap: int) -> "LogMatrix":
        one = IwasawaSeries.constant(1, prime, precision, degree_cap)
        zero = IwasawaSeries.zero(prime, precision, degree_cap)
        return cls(tuple(tuple(one if i == j else zero for j in range(size))
                         for i in range(size)), 0)

    def matmul(self, other: "LogMatrix") -> "LogMatrix":
        if other.size != self.size:
            raise InputError("size mismatch")
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.entries[i][0] * other.entries[0][j]
                for k in range(1, n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return LogMatrix.normalized(rows, self.denom_exponent + other.denom_exponent)

    def power(self, k: int) -> "LogMatrix":
        if k < 1:
            raise InputError("power must be >= 1")
        out = self
        for _ in range(k - 1):
            out = out.matmul(self)
        return out

    def det(self) -> tuple[IwasawaSeries, int]:
        """(series, d): the determinant is p^{-d} * series, normalized."""
        d = _series_det([list(r) for r in self.entries])
        total = self.size * self.denom_exponent
        strip = min(total, d.min_valuation())
        if strip:
            d = d.exact_div_p_power(strip)
            total -= strip
        return d, total

    def entry(self, i: int, j: int) -> IwasawaSeries:
        return self.entries[i][j]

    def congruent(self, other: "LogMatrix", *, mod_exp: int | None = None,
                  up_to_degree: int | None = None) -> bool:
        if self.size != other.size or self.denom_exponent != other.denom_exponent:
            return False
        return all(
            self.entries[i][j].congruent(other.entries[i][j], mod_exp=mod_exp,
                                         up_to_degree=up_to_degree)
            for i in range(self.size) for j in range(self.size)
        )


def _series_det(rows: list[list[IwasawaSeries]]) -> IwasawaSeries:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        minor_rows = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _series_det(minor_rows)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _default_cap(frob: FrobeniusData, n: int, *, minors_of_h: bool = False) -> int:
    base = frob.prime**max(n, 1)
    return (frob.g * base + 8) if minors_of_h else (base + 8)


def _const_matrix(rows: Sequence[Sequence[PadicInt]], prime: int, precision: int,
                  degree_cap: int) -> list[list[IwasawaSeries]]:
    return [[IwasawaSeries.constant(x, prime, precision, degree_cap) for x in row]
            for row in rows]


def c_phi(frob: FrobeniusData, *, degree_cap: int | None = None) -> LogMatrix:
    """C_phi = C_p * diag(I_g, (1/p) I_g), stored as p^{-1} * (C_p with the
    first g columns scaled by p)."""
    cap = degree_cap if degree_cap is not None else 8
    g, p = frob.g, frob.prime
    rows = []
    for i in range(2 * g):
        row = []
        for j in range(2 * g):
            x = frob.c_p[i][j]
            row.append(x * PadicInt(p, p, x.precision) if j < g else x)
        rows.append(row)
    return LogMatrix.normalized(_const_matrix(rows, p, frob.precision, cap), 1)


def c_n(frob: FrobeniusData, n: int, *, degree_cap: int | None = None) -> LogMatrix:
    """C_n = diag(I_g, Phi_n I_g) * C_p^{-1}; p-integral, denominator 0."""
    if n < 1:
        raise InputError("level must be >= 1")
    cap = degree_cap if degree_cap is not None else _default_cap(frob, n)
    g, p = frob.g, frob.prime
    inv = mat_inv(frob.c_p_lists())
    phin = phi(n, prime=p, precision=frob.precision, degree_cap=cap)
    rows = []
    for i in range(2 * g):
        row = []
        for j in range(2 * g):
            e = IwasawaSeries.constant(inv[i][j], p, frob.precision, cap)
            if i >= g:
                e = e * phin
            row.append(e)
        rows.append(row)
    return LogMatrix.normalized(rows, 0)


def h_n(frob: FrobeniusData, n: int, *, degree_cap: int | None = None) -> LogMatrix:
    """H_n = C_n C_{n-1} ... C_1, with H_0 the identity (empty product)."""
    if n < 0:
        raise InputError("level must be >= 0")
    cap = degree_cap if degree_cap is not None else _default_cap(frob, n)
    out = LogMatrix.identity(2 * frob.g, frob.prime, frob.precision, cap)
    for k in range(1, n + 1):
        out = c_n(frob, k, degree_cap=cap).matmul(out)
    return out


def m_n(frob: FrobeniusData, n: int, *, degree_cap: int | None = None) -> LogMatrix:
    """M_n = C_phi^{n+1} * H_n, denominators summed then normalized."""
    if n < 1:
        raise InputError("level must be >= 1")
    cap = degree_cap if degree_cap is not None else _default_cap(frob, n)
    return c_phi(frob, degree_cap=cap).power(n + 1).matmul(
        h_n(frob, n, degree_cap=cap))


def index_sets(g: int) -> list[tuple[int, ...]]:
    """All g-element subsets of {1..2g}, lexicographically ordered."""
    return [tuple(s) for s in combinations(range(1, 2 * g + 1), g)]


@dataclass
class MinorTable:
    """All (I, J)-minors of H_n for g-element row/column index sets."""

    n: int
    g: int
    prime: int
    precision: int
    values: dict[tuple[tuple[int, ...], tuple[int, ...]], IwasawaSeries] = field(
        default_factory=dict)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> IwasawaSeries:
        return self.values[(tuple(sorted(rows)), tuple(sorted(cols)))]


def minors(frob: FrobeniusData, n: int, *,
           degree_cap: int | None = None) -> MinorTable:
    """Tabulate every (I, J)-minor of H_n; needs g <= 3 to keep the table sane."""
    if n < 1:
        raise InputError("level must be >= 1")
    if frob.g > 3:
        raise InputError("minor tables are limited to g <= 3")
    cap = degree_cap if degree_cap is not None else _default_cap(frob, n,
                                                                 minors_of_h=True)
    h = h_n(frob, n, degree_cap=cap)
    table = MinorTable(n=n, g=frob.g, prime=frob.prime, precision=h.precision)
    sets = index_sets(frob.g)
    for rows_set in sets:
        for cols_set in sets:
            sub = [[h.entry(i - 1, j - 1) for j in cols_set] for i in rows_set]
            table.values[(rows_set, cols_set)] = _series_det(sub)
    return table


def condition_character(frob: FrobeniusData, n: int,
                        col_values: Sequence[IwasawaSeries] | Mapping,
                        theta_level: int | None = None, *,
                        margin: int = 4,
                        degree_cap: int | None = None) -> tuple[bool, int]:
    """Evaluate sum_J H_{I0,J,n} * col_J at a character of the given level.

    ``col_values`` supplies the caller's column determinants, one per
    g-element index set J (lexicographic order, or a mapping keyed by the
    sets).  Returns (is_nonzero mod p^N, minimal coefficient valuation).
    Raises PrecisionExhaustedError when every coefficient survives only
    inside the margin band.
    """
    sets = index_sets(frob.g)
    if isinstance(col_values, Mapping):
        vals = [col_values[s] for s in sets]
    else:
        vals = list(col_values)
        if len(vals) != len(sets):
            raise InputError(
                f"need {len(sets)} column values, got {len(vals)}")
    table = minors(frob, n, degree_cap=degree_cap)
    i0 = tuple(range(1, frob.g + 1))
    acc = None
    for s, v in zip(sets, vals):
        term = table.minor(i0, s) * v
        acc = term if acc is None else acc + term
    level = n if theta_level is None else theta_level
    ev = cyclo_eval(acc, level)
    val = ev.min_valuation()
    if val >= ev.precision:
        return False, ev.precision
    if val >= ev.precision - margin:
        raise PrecisionExhaustedError(
            f"character value has valuation {val} within margin {margin} of "
            f"precision {ev.precision}"
        )
    return True, val


def _block_diag(b11: Sequence[Sequence[PadicInt]],
                b22: Sequence[Sequence[PadicInt]], g: int,
                prime: int, precision: int) -> list[list[PadicInt]]:
    zero = PadicInt(prime, 0, precision)
    out = [[zero] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        for j in range(g):
            out[i][j] = b11[i][j]
            out[g + i][g + j] = b22[i][j]
    return out


def _is_block_anti_diagonal(mat: Sequence[Sequence[PadicInt]], g: int) -> bool:
    return all(mat[i][j].is_zero() and mat[g + i][g + j].is_zero()
               for i in range(g) for j in range(g))


def change_basis_check(frob: FrobeniusData,
                       b11: Sequence[Sequence[PadicInt]],
                       b22: Sequence[Sequence[PadicInt]],
                       vectors: Sequence[Sequence[IwasawaSeries]]) -> bool:
    """For block-diagonal B_p = diag(B11, B22) acting on column vectors of
    series, check that the vanishing pattern of the first g and last g
    components is preserved both ways, and that conjugating a block
    anti-diagonal C_p by B_p stays block anti-diagonal."""
    g, p, prec = frob.g, frob.prime, frob.precision
    if not frob.block_anti_diagonal():
        raise InputError("change-of-basis check requires block anti-diagonal C_p")
    b11 = [list(r) for r in b11]
    b22 = [list(r) for r in b22]
    for blk in (b11, b22):
        if len(blk) != g or any(len(r) != g for r in blk):
            raise InputError(f"blocks must be {g}x{g}")
        mat_inv(blk)  # raises InputError when not invertible
    bp = _block_diag(b11, b22, g, p, prec)
    conj = mat_mul(mat_mul(bp, frob.c_p_lists()), mat_inv(bp))
    if not _is_block_anti_diagonal(conj, g):
        return False
    for v in vectors:
        if len(v) != 2 * g:
            raise InputError(f"vectors must have {2 * g} components")
        image = []
        for i in range(2 * g):
            acc = v[0] * bp[i][0]
            for j in range(1, 2 * g):
                acc = acc + v[j] * bp[i][j]
            image.append(acc)
        for lo, hi in ((0, g), (g, 2 * g)):
            before = all(v[i].is_zero() for i in range(lo, hi))
            after = all(image[i].is_zero() for i in range(lo, hi))
            if before != after:
                return False
    return True
