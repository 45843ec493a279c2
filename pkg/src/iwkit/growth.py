"""Growth-formula engines for cyclotomic tower sizes.

The stabilized per-level increment of a finite quotient tower is

    s_n - s_{n-1} = lambda + (p^n - p^{n-1}) mu - sum_{c_i <= n0} rank_phi_omega(c_i, n0)

where (lambda, mu) belong to the ambient torsion module and the c_i describe
the stabilized free part (a direct sum of Lambda/Phi_{c_i}).  The elliptic
variant writes the same sum with multiplicities r_k^+/-, whose admissible
values are pinned down by the rank ledger constraints solved here.

``synthetic_tower_verify`` manufactures the whole situation explicitly: it
embeds the Phi-shaped module into the ambient one, takes level-wise cokernels
by Smith normal form, and compares observed increments against the formula.

Some classical signed-tower increment laws carry one further term, an
explicit sum of powers of p depending on the parity of n; it has no closed
definition usable here and is deliberately not modeled as an operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .modules import (
    ElementaryModule,
    TowerLevel,
    TowerReport,
    _invariants_raw,
    _mult_matrix_rows,
    _stabilization,
    rank_phi_omega,
)
from .series import IwasawaSeries, divide_distinguished, phi


@dataclass(frozen=True)
class SelmerInvariants:
    """Iwasawa invariants of the ambient torsion module."""

    lambda_: int
    mu: int

    def __post_init__(self):
        if self.lambda_ < 0 or self.mu < 0:
            raise InputError("invariants must be nonnegative")


@dataclass(frozen=True)
class MWShape:
    """Multiset of levels c_i describing a direct sum of Lambda/Phi_{c_i}."""

    c_list: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.c_list):
            raise InputError("levels must be >= 0")
        object.__setattr__(self, "c_list", tuple(sorted(self.c_list)))

    @property
    def n0_candidate(self) -> int:
        return max(self.c_list, default=0)


def ordinary_growth(lam: int, mu: int, n: int, *, prime: int) -> int:
    """Model cumulative size mu*p^n + lambda*n (O(1) term normalized to 0)."""
    if n < 0:
        raise InputError("level must be >= 0")
    return mu * prime**n + lam * n


def _increment(lam: int, mu: int, c_list: Sequence[int], n: int, n0: int,
               prime: int) -> int:
    drop = sum(rank_phi_omega(c, n0, prime=prime) for c in c_list if c <= n0)
    return lam + (prime**n - prime ** (n - 1)) * mu - drop


def final_increment(inv: SelmerInvariants, shape: MWShape, n: int, n0: int, *,
                    prime: int) -> int:
    """Stabilized increment s_n - s_{n-1} for n > n0."""
    if n0 < shape.n0_candidate:
        raise InputError(
            f"n0 = {n0} must be at least max(c_list) = {shape.n0_candidate}")
    if n <= n0:
        raise InputError(f"the formula only applies for n > n0, got n = {n}")
    return _increment(inv.lambda_, inv.mu, shape.c_list, n, n0, prime)


def elliptic_increment(inv: SelmerInvariants, r_seq: Sequence[int], n: int,
                       n0: int, *, prime: int) -> int:
    """Signed-tower increment with multiplicity r_k copies of Lambda/Phi_k."""
    if any(r < 0 for r in r_seq):
        raise InputError("multiplicities must be nonnegative")
    last = max((k for k, r in enumerate(r_seq) if r > 0), default=0)
    if n0 < last:
        raise InputError(f"n0 = {n0} must cover the last positive multiplicity {last}")
    if n <= n0:
        raise InputError(f"the formula only applies for n > n0, got n = {n}")
    c_list = [k for k, r in enumerate(r_seq) for _ in range(r)]
    return _increment(inv.lambda_, inv.mu, c_list, n, n0, prime)


@dataclass(frozen=True)
class RkOptions:
    """Admissible (r_plus, r_minus) pairs at one level of the rank ledger."""

    k: int
    a: int
    pairs: tuple[tuple[int, int], ...]


def rk_solver(e: Sequence[int]) -> list[RkOptions]:
    """Enumerate the signed multiplicities compatible with a rank sequence.

    Level 0 is forced to r+ = r- = e_0.  For k > 0, a_k = max(0, e_k - 1) and
    the pairs run over min(r+, r-) >= a_k with r+ + r- = e_k + a_k; the
    cartesian product across levels is left implicit.
    """
    out = []
    for k, ek in enumerate(e):
        if ek < 0:
            raise InputError("rank increments must be nonnegative")
        if k == 0:
            out.append(RkOptions(0, ek, ((ek, ek),)))
            continue
        a = max(0, ek - 1)
        pairs = tuple((r, ek + a - r) for r in range(a, ek + 1))
        out.append(RkOptions(k, a, pairs))
    return out


@dataclass(frozen=True)
class RankLedger:
    """One admissible assignment (e, a, r+, r-) of the rank constraints."""

    e: tuple[int, ...]
    a: tuple[int, ...]
    r_plus: tuple[int, ...]
    r_minus: tuple[int, ...]

    def __post_init__(self):
        k = len(self.e)
        if not (len(self.a) == len(self.r_plus) == len(self.r_minus) == k):
            raise InputError("ledger sequences must share a length")
        if k == 0:
            return
        if any(x < 0 for seq in (self.e, self.a, self.r_plus, self.r_minus)
               for x in seq):
            raise InputError("ledger entries must be nonnegative")
        if not (self.r_plus[0] == self.r_minus[0] == self.e[0] == self.a[0]):
            raise InputError("level 0 must satisfy r+ = r- = e_0 (= a_0)")
        for i in range(1, k):
            a = max(0, self.e[i] - 1)
            if self.a[i] != a:
                raise InputError(f"a_{i} must be max(0, e_{i} - 1)")
            if min(self.r_plus[i], self.r_minus[i]) < a:
                raise InputError(f"min(r+_{i}, r-_{i}) must be >= a_{i}")
            if self.r_plus[i] + self.r_minus[i] != self.e[i] + a:
                raise InputError(f"r+_{i} + r-_{i} must equal e_{i} + a_{i}")

    @classmethod
    def from_ranks(cls, ranks: Sequence[int], *, prime: int,
                   r_plus: Sequence[int] | None = None,
                   r_minus: Sequence[int] | None = None) -> "RankLedger":
        """Derive e from a Mordell-Weil rank sequence; the rank jump at level
        n must be divisible by p^n - p^{n-1}."""
        if not ranks:
            raise InputError("need at least the level-0 rank")
        e = [ranks[0]]
        for n in range(1, len(ranks)):
            jump = ranks[n] - ranks[n - 1]
            step = prime**n - prime ** (n - 1)
            if jump < 0 or jump % step:
                raise InputError(
                    f"rank jump {jump} at level {n} is not a multiple of {step}")
            e.append(jump // step)
        a = [e[0]] + [max(0, x - 1) for x in e[1:]]
        if r_plus is None or r_minus is None:
            # canonical choice: r+ takes the larger share
            r_plus = [e[0]] + [x for x in e[1:]]
            r_minus = [e[0]] + list(a[1:])
        return cls(tuple(e), tuple(a), tuple(r_plus), tuple(r_minus))


def _assign_shape(sel: ElementaryModule, shape: MWShape) -> list[tuple[int, IwasawaSeries]]:
    """Match each Phi_{c} summand with a generator it divides.

    Each (generator, c) pair can absorb at most one copy (two copies of the
    same Phi_c into one generator would not embed).  Returns (generator
    index, cofactor f_j / Phi_c) per summand.
    """
    used: set[tuple[int, int]] = set()
    out = []
    for c in sorted(shape.c_list, reverse=True):
        phic = phi(c, prime=sel.prime, precision=sel.precision)
        placed = False
        for j, f in enumerate(sel.generators):
            if (j, c) in used:
                continue
            quot, rem = divide_distinguished(f, phic)
            if rem.is_zero() and not quot.is_zero():
                used.add((j, c))
                out.append((j, quot))
                placed = True
                break
        if not placed:
            raise InputError(
                f"shape level {c}: no available generator is divisible by Phi_{c}")
    return out


def synthetic_tower_verify(sel_module: ElementaryModule, mw_shape: MWShape,
                           n_max: int, *, n0: int | None = None,
                           margin: int = 4) -> TowerReport:
    """Build the quotient tower coker((+)Lambda/Phi_{c_i} -> S) level by level
    and compare its increments against the stabilized formula.

    Each Phi_{c} summand maps into its matched generator by multiplication
    with the cofactor, so the level-n cokernel is presented per generator by
    [mult(f_j) | mult(cofactors)] in the monomial basis of Z_p[X]/omega_n.
    Levels where the cokernel has positive free rank are reported as
    non-finite rather than silently skipped.
    """
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    if not sel_module.generators:
        raise InputError("the ambient module must have at least one generator")
    prime = sel_module.prime
    precision = sel_module.precision
    assigns = _assign_shape(sel_module, mw_shape)
    lam, mu = sel_module.lambda_mu()
    level_n0 = mw_shape.n0_candidate if n0 is None else n0
    if level_n0 < mw_shape.n0_candidate:
        raise InputError("n0 override below max(c_list)")

    per_gen_cofactors: dict[int, list[IwasawaSeries]] = {}
    for j, quot in assigns:
        per_gen_cofactors.setdefault(j, []).append(quot)

    ranks: list[int] = []
    lengths: list[int] = []
    for n in range(0, n_max + 1):
        free_total = length_total = 0
        for j, f in enumerate(sel_module.generators):
            rows = _mult_matrix_rows(f, n)
            for quot in per_gen_cofactors.get(j, []):
                extra = _mult_matrix_rows(quot, n)
                rows = [r + e for r, e in zip(rows, extra)]
            free, length = _invariants_raw(rows, prime, precision, margin)
            free_total += free
            length_total += length
        ranks.append(free_total)
        lengths.append(length_total)

    non_finite = tuple(n for n in range(n_max + 1) if ranks[n] > 0)
    levels = [TowerLevel(0, ranks[0], lengths[0], None, None)]
    for n in range(1, n_max + 1):
        obs = None
        if ranks[n] == 0 and ranks[n - 1] == 0:
            obs = lengths[n] - lengths[n - 1]
        pred = None
        if n > level_n0:
            pred = _increment(lam, mu, mw_shape.c_list, n, level_n0, prime)
        levels.append(TowerLevel(n, ranks[n], lengths[n], obs, pred))

    min_valid = None
    for v in range(0, n_max):
        window = range(v + 1, n_max + 1)
        if all(ranks[n] == 0 and ranks[n - 1] == 0 and
               lengths[n] - lengths[n - 1] ==
               _increment(lam, mu, mw_shape.c_list, n, v, prime)
               for n in window):
            min_valid = v
            break

    return TowerReport(
        prime=prime,
        levels=tuple(levels),
        stabilization_level=_stabilization(levels, floor=level_n0),
        lambda_invariant=lam,
        mu_invariant=mu,
        n0=level_n0,
        min_valid_n0=min_valid,
        non_finite_levels=non_finite,
    )
