"""The Iwasawa algebra Lambda = Z_p[[X]] as truncated series.

A series is stored as a dense coefficient window of degrees 0..D at absolute
precision N; the truncation is part of the value (coefficients beyond the cap
do not exist).  Cyclotomic polynomials Phi_n and omega_n, Weierstrass
preparation (mu/lambda invariants) and division with remainder by monic
polynomials live here.

Phi_0 = X and, for n >= 1, Phi_n = ((1+X)^{p^n} - 1) / ((1+X)^{p^{n-1}} - 1),
computed as the exact binomial sum  sum_{j<p} (1+X)^{j p^{n-1}}.
omega_n = (1+X)^{p^n} - 1 = Phi_0 * Phi_1 * ... * Phi_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .config import is_odd_prime
from .errors import (
    DegreeOverflowError,
    InputError,
    IwkitError,
    PrecisionExhaustedError,
    ZeroSeriesError,
)
from .padic import PadicInt


@dataclass(frozen=True)
class IwasawaSeries:
    """Truncated element of Z_p[[X]]: degrees 0..degree_cap mod p^precision."""

    prime: int
    precision: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not is_odd_prime(self.prime):
            raise InputError(f"prime must be an odd prime, got {self.prime}")
        if self.precision < 1:
            raise InputError("precision must be >= 1")
        if not self.coeffs:
            raise InputError("series needs at least the degree-0 coefficient")
        q = self.q
        object.__setattr__(self, "coeffs", tuple(c % q for c in self.coeffs))

    @property
    def q(self) -> int:
        return self.prime**self.precision

    @property
    def degree_cap(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def make(cls, prime: int, precision: int, coeffs: Sequence[int],
             degree_cap: int | None = None) -> "IwasawaSeries":
        cs = list(coeffs) or [0]
        if degree_cap is not None:
            if len(cs) - 1 > degree_cap:
                raise DegreeOverflowError(
                    f"coefficients of degree {len(cs) - 1} exceed cap {degree_cap}",
                    required_cap=len(cs) - 1,
                )
            cs += [0] * (degree_cap + 1 - len(cs))
        return cls(prime, precision, tuple(cs))

    @classmethod
    def zero(cls, prime: int, precision: int, degree_cap: int = 0) -> "IwasawaSeries":
        return cls(prime, precision, (0,) * (degree_cap + 1))

    @classmethod
    def constant(cls, value: int | PadicInt, prime: int, precision: int,
                 degree_cap: int = 0) -> "IwasawaSeries":
        v = value.residue if isinstance(value, PadicInt) else value
        return cls.make(prime, precision, [v], degree_cap)

    @classmethod
    def monomial(cls, k: int, prime: int, precision: int,
                 degree_cap: int | None = None) -> "IwasawaSeries":
        return cls.make(prime, precision, [0] * k + [1], degree_cap)

    def coeff(self, i: int) -> PadicInt:
        c = self.coeffs[i] if i <= self.degree_cap else 0
        return PadicInt(self.prime, c, self.precision)

    def degree(self) -> int | None:
        """Largest index with a nonzero stored coefficient; None if all zero."""
        for i in range(self.degree_cap, -1, -1):
            if self.coeffs[i]:
                return i
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def min_valuation(self) -> int:
        """Smallest coefficient valuation; precision when the series is 0 mod p^N."""
        best = self.precision
        for c in self.coeffs:
            if c == 0:
                continue
            v, x = 0, c
            while x % self.prime == 0 and v < best:
                x //= self.prime
                v += 1
            best = min(best, v)
            if best == 0:
                break
        return best

    def _binop_params(self, other: "IwasawaSeries") -> tuple[int, int, int]:
        if not isinstance(other, IwasawaSeries):
            raise InputError(f"expected IwasawaSeries, got {type(other)}")
        if other.prime != self.prime:
            raise InputError(f"mixed primes {self.prime} and {other.prime}")
        n = min(self.precision, other.precision)
        cap = min(self.degree_cap, other.degree_cap)
        return n, cap, self.prime**n

    def __add__(self, other):
        if isinstance(other, (int, PadicInt)):
            other = IwasawaSeries.constant(other, self.prime, self.precision,
                                           self.degree_cap)
        n, cap, q = self._binop_params(other)
        cs = [(self.coeffs[i] + other.coeffs[i]) % q for i in range(cap + 1)]
        return IwasawaSeries(self.prime, n, tuple(cs))

    __radd__ = __add__

    def __neg__(self):
        return IwasawaSeries(self.prime, self.precision,
                             tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, PadicInt)):
            other = IwasawaSeries.constant(other, self.prime, self.precision,
                                           self.degree_cap)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PadicInt):
            if other.prime != self.prime:
                raise InputError("mixed primes")
            n = min(self.precision, other.precision)
            q = self.prime**n
            return IwasawaSeries(self.prime, n,
                                 tuple(c * other.residue % q for c in self.coeffs))
        if isinstance(other, int):
            return IwasawaSeries(self.prime, self.precision,
                                 tuple(c * other for c in self.coeffs))
        n, cap, q = self._binop_params(other)
        out = [0] * (cap + 1)
        for i in range(cap + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(cap + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return IwasawaSeries(self.prime, n, tuple(c % q for c in out))

    __rmul__ = __mul__

    def mul_p_power(self, k: int) -> "IwasawaSeries":
        """Multiply by p^k; this genuinely gains absolute precision."""
        if k < 0:
            raise InputError("k must be >= 0")
        pk = self.prime**k
        return IwasawaSeries(self.prime, self.precision + k,
                             tuple(c * pk for c in self.coeffs))

    def exact_div_p_power(self, k: int) -> "IwasawaSeries":
        """Divide every coefficient by p^k; precision drops by k."""
        if k == 0:
            return self
        if k < 0 or k >= self.precision:
            raise InputError(f"cannot divide by p^{k} at precision {self.precision}")
        pk = self.prime**k
        if any(c % pk for c in self.coeffs):
            raise InputError(f"series is not divisible by p^{k}")
        return IwasawaSeries(self.prime, self.precision - k,
                             tuple(c // pk for c in self.coeffs))

    def with_precision(self, precision: int) -> "IwasawaSeries":
        if precision > self.precision:
            raise InputError("cannot increase precision")
        return IwasawaSeries(self.prime, precision, self.coeffs)

    def truncated(self, degree_cap: int) -> "IwasawaSeries":
        if degree_cap >= self.degree_cap:
            return self
        return IwasawaSeries(self.prime, self.precision,
                             self.coeffs[:degree_cap + 1])

    def padded(self, degree_cap: int) -> "IwasawaSeries":
        """Extend the window with zeros.  Only valid when the value is known
        to be a polynomial within the current cap."""
        if degree_cap <= self.degree_cap:
            return self
        return IwasawaSeries(self.prime, self.precision,
                             self.coeffs + (0,) * (degree_cap - self.degree_cap))

    def congruent(self, other: "IwasawaSeries", *, mod_exp: int | None = None,
                  up_to_degree: int | None = None) -> bool:
        if other.prime != self.prime:
            return False
        e = min(self.precision, other.precision)
        if mod_exp is not None:
            e = min(e, mod_exp)
        cap = min(self.degree_cap, other.degree_cap)
        if up_to_degree is not None:
            cap = min(cap, up_to_degree)
        m = self.prime**e
        return all((self.coeffs[i] - other.coeffs[i]) % m == 0
                   for i in range(cap + 1))

    def __str__(self) -> str:
        terms = [f"{c}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"{body} (mod {self.prime}^{self.precision}, X^{self.degree_cap + 1})"


def phi_int_coeffs(prime: int, n: int) -> list[int]:
    """Exact integer coefficients of Phi_n in the variable X."""
    if n < 0:
        raise InputError("level must be >= 0")
    if n == 0:
        return [0, 1]
    step = prime ** (n - 1)
    deg = step * (prime - 1)
    out = [0] * (deg + 1)
    for j in range(prime):
        k = j * step
        for i in range(k + 1):
            out[i] += comb(k, i)
    return out


def omega_int_coeffs(prime: int, n: int) -> list[int]:
    """Exact integer coefficients of omega_n = (1+X)^{p^n} - 1."""
    if n < 0:
        raise InputError("level must be >= 0")
    m = prime**n
    out = [comb(m, i) for i in range(m + 1)]
    out[0] = 0
    return out


def deg_phi(prime: int, n: int) -> int:
    return 1 if n == 0 else prime**n - prime ** (n - 1)


def phi(n: int, *, prime: int, precision: int,
        degree_cap: int | None = None) -> IwasawaSeries:
    """The p^n-th cyclotomic polynomial in 1+X, as a series mod p^precision."""
    coeffs = phi_int_coeffs(prime, n)
    deg = len(coeffs) - 1
    if degree_cap is not None and deg > degree_cap:
        raise DegreeOverflowError(
            f"Phi_{n} has degree {deg}; degree cap must be at least {deg}",
            required_cap=deg,
        )
    return IwasawaSeries.make(prime, precision, coeffs, degree_cap)


def omega(n: int, *, prime: int, precision: int,
          degree_cap: int | None = None) -> IwasawaSeries:
    """omega_n = (1+X)^{p^n} - 1 as a series mod p^precision."""
    coeffs = omega_int_coeffs(prime, n)
    deg = len(coeffs) - 1
    if degree_cap is not None and deg > degree_cap:
        raise DegreeOverflowError(
            f"omega_{n} has degree {deg}; degree cap must be at least {deg}",
            required_cap=deg,
        )
    return IwasawaSeries.make(prime, precision, coeffs, degree_cap)


def _poly_divmod_monic(f: list[int], p_poly: list[int], q: int) -> tuple[list[int], list[int]]:
    """Long division of f by a monic polynomial, all coefficients mod q."""
    deg_p = len(p_poly) - 1
    while deg_p > 0 and p_poly[deg_p] % q == 0:
        deg_p -= 1
    if p_poly[deg_p] % q != 1:
        raise InputError("divisor must be monic")
    rem = [c % q for c in f]
    if len(rem) - 1 < deg_p:
        return [0], rem
    quot = [0] * (len(rem) - deg_p)
    for k in range(len(rem) - 1, deg_p - 1, -1):
        t = rem[k]
        if t == 0:
            continue
        quot[k - deg_p] = t
        rem[k] = 0
        for i in range(deg_p):
            rem[k - deg_p + i] = (rem[k - deg_p + i] - t * p_poly[i]) % q
    return quot, rem[:deg_p] if deg_p > 0 else [0]


def divide_distinguished(f: IwasawaSeries,
                         p_poly: IwasawaSeries) -> tuple[IwasawaSeries, IwasawaSeries]:
    """Divide f by a monic polynomial P: f = q*P + r with deg r < deg P.

    Exact at the common precision up to degree cap(f) - deg P.
    """
    if p_poly.prime != f.prime:
        raise InputError("mixed primes")
    n = min(f.precision, p_poly.precision)
    q_mod = f.prime**n
    deg_p = p_poly.degree()
    if deg_p is None:
        raise InputError("divisor is zero mod p^N")
    pl = [c % q_mod for c in p_poly.coeffs[:deg_p + 1]]
    if pl[deg_p] != 1:
        raise InputError("divisor must be monic")
    quot, rem = _poly_divmod_monic([c % q_mod for c in f.coeffs], pl, q_mod)
    q_cap = max(f.degree_cap - deg_p, 0)
    quot = quot[:q_cap + 1] + [0] * (q_cap + 1 - len(quot))
    r_cap = min(f.degree_cap, max(deg_p - 1, 0))
    rem = rem[:r_cap + 1] + [0] * (r_cap + 1 - len(rem))
    return (IwasawaSeries(f.prime, n, tuple(quot)),
            IwasawaSeries(f.prime, n, tuple(rem)))


def _conv(a: list[int], b: list[int], limit: int, q: int) -> list[int]:
    out = [0] * limit
    for i, x in enumerate(a):
        if x == 0 or i >= limit:
            continue
        for j in range(min(len(b), limit - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return [c % q for c in out]


def _series_inv(u: list[int], q: int, p: int, length: int) -> list[int]:
    """Inverse of a unit power series mod (q, X^length)."""
    u0 = u[0] % q
    if u0 % p == 0:
        raise InputError("series is not a unit (constant term divisible by p)")
    v0 = pow(u0, -1, q)
    out = [v0] + [0] * (length - 1)
    for k in range(1, length):
        s = 0
        for j in range(1, min(k, len(u) - 1) + 1):
            if u[j]:
                s += u[j] * out[k - j]
        out[k] = (-v0 * s) % q
    return out


@dataclass(frozen=True)
class WeierstrassFactorization:
    """f = p^mu * distinguished * unit with distinguished monic of degree
    lambda and all lower coefficients divisible by p."""

    mu: int
    lambda_: int
    distinguished: IwasawaSeries
    unit: IwasawaSeries

    @property
    def precision(self) -> int:
        return self.distinguished.precision

    def reconstruct(self) -> IwasawaSeries:
        prod = self.distinguished.padded(self.unit.degree_cap) * self.unit
        return prod.mul_p_power(self.mu)


def weierstrass_prepare(f: IwasawaSeries, *, margin: int = 4) -> WeierstrassFactorization:
    """Weierstrass preparation of a nonzero truncated series.

    mu is the minimal coefficient valuation; after dividing by p^mu, lambda is
    the least index carrying a unit.  The distinguished polynomial is found by
    the classical fixed-point division of X^lambda by f/p^mu, which converges
    coefficientwise in at most N iterations; the unit is the inverse of the
    resulting quotient.
    """
    if f.is_zero():
        raise ZeroSeriesError("series is indistinguishable from zero at this precision")
    mu = f.min_valuation()
    if f.precision - mu <= margin:
        raise PrecisionExhaustedError(
            f"mu = {mu} leaves fewer than margin+1 = {margin + 1} digits of precision"
        )
    n2 = f.precision - mu
    q2 = f.prime**n2
    pmu = f.prime**mu
    fb = [(c // pmu) % q2 for c in f.coeffs]
    lam = None
    for i, c in enumerate(fb):
        if c % f.prime != 0:
            lam = i
            break
    if lam is None:
        raise DegreeOverflowError(
            f"no unit coefficient below degree cap {f.degree_cap}",
            required_cap=f.degree_cap + 1,
        )
    cap = f.degree_cap
    tail_len = cap - lam + 1
    b_inv = _series_inv(fb[lam:], q2, f.prime, tail_len)

    # divide X^lam by fb: X^lam = q*fb + r, deg r < lam
    res = [0] * (cap + 1)
    res[lam] = 1
    q_acc = [0] * tail_len
    for _ in range(n2 + 2):
        tau = res[lam:]
        if all(c == 0 for c in tau):
            break
        qi = _conv(tau, b_inv, tail_len, q2)
        q_acc = [(a + b) % q2 for a, b in zip(q_acc, qi)]
        delta = _conv(qi, fb, cap + 1, q2)
        res = [(a - b) % q2 for a, b in zip(res, delta)]
    else:
        raise IwkitError("Weierstrass division did not converge")

    r = res[:lam]
    dist = [(-c) % q2 for c in r] + [1]
    if any(c % f.prime for c in dist[:-1]):
        raise IwkitError("distinguished part is not divisible by p below the top")
    unit = _series_inv(q_acc, q2, f.prime, tail_len)
    return WeierstrassFactorization(
        mu=mu,
        lambda_=lam,
        distinguished=IwasawaSeries(f.prime, n2, tuple(dist)),
        unit=IwasawaSeries(f.prime, n2, tuple(unit)),
    )


def reconstruction_residual_valuation(f: IwasawaSeries,
                                      w: WeierstrassFactorization,
                                      *, up_to_degree: int | None = None) -> int:
    """min valuation of f - p^mu*P*U over the comparison window; equals the
    comparison precision when the reconstruction is perfect there."""
    rec = w.reconstruct()
    diff = f - rec
    if up_to_degree is not None:
        diff = diff.truncated(up_to_degree)
    return diff.min_valuation()


def lambda_mu(f: IwasawaSeries) -> tuple[int, int]:
    w = weierstrass_prepare(f)
    return w.lambda_, w.mu
