"""Series-truncation route to the radial eigenproblem.

The problem is the radial equation

    F''(r) + F'(r)/r - (l^2/r^2) F - r^2 F - nu r F + W F = 0,

an isotropic oscillator in two dimensions with an extra linear coupling
nu*r, eigenvalue W, and angular momentum l (only s = |l| enters). The
substitution

    F(r) = r^s exp(-r^2/2 - nu r/2) * sum_j c_j r^j

turns the equation into a three-term recurrence for the c_j. Forcing the
series to terminate at order n (c_n != 0, c_{n+1} = c_{n+2} = 0) pins the
eigenvalue to W = 2(n+s+1) - nu^2/4 and turns c_{n+1} into a polynomial of
degree n+1 in nu whose roots nu_{n,i,l} are the only couplings at which an
order-n polynomial solution exists. Those isolated solutions are exact but
they are not a spectrum: sweeping nu, each of them sits on a continuous
eigenvalue branch computed independently in :mod:`radspec.spectrum`.

Everything here is exact: the truncation polynomial is built over the
rationals, real roots are counted with a Sturm chain and isolated by
exact-sign bisection, and series coefficients at a root are evaluated in
rational arithmetic before the final conversion to float.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

__all__ = [
    "ReducedProblem",
    "RecurrencePair",
    "TruncationPolynomial",
    "RootIsolation",
    "TruncationSolution",
    "RootRefinementFailure",
    "IndexOutOfRange",
    "recurrence_coeffs",
    "series_coeffs",
    "truncation_energy",
    "cnp1_polynomial",
    "root_isolation",
    "truncation_roots",
    "polynomial_solution",
    "evaluate_F",
    "ode_residual",
]

# Bisection width, relative, in nu^2. Far tighter than float64 needs: the
# leftover c_{n+1}(mu) enters the equation residual multiplied by r^n, so a
# 1e-13 root still shows ~1e-1 relative residual at the worst (n=10, i=11)
# point; 1e-25 buries that amplification below the 1e-8 residual contract.
ROOT_REL_TOL = Fraction(1, 10**25)
DEDUP_TOL = 1e-9                     # merge roots closer than this * (1+|nu|)
CLOSURE_TOL = 1e-10                  # |c_{n+1}|, |c_{n+2}| relative to max |c_j|


class RootRefinementFailure(RuntimeError):
    """A bracketed root could not be refined to tolerance."""


class IndexOutOfRange(IndexError):
    """Root index i is outside 1..real_root_count."""


@dataclass(frozen=True)
class ReducedProblem:
    """Dimensionless problem instance: angular momentum l and coupling nu."""

    l: int
    nu: float

    @property
    def s(self) -> int:
        return abs(self.l)


@dataclass(frozen=True)
class RecurrencePair:
    """Coefficients of one recurrence step c_{j+2} = A c_{j+1} + B c_j."""

    A: float | Fraction
    B: float | Fraction


@dataclass(frozen=True)
class TruncationPolynomial:
    """c_{n+1} as an exact polynomial in nu, normalized to c_0 = 1.

    ``coeffs`` holds ascending powers; the degree is exactly n+1 and the
    polynomial has parity (-1)^(n+1), so alternate entries are zero.
    """

    n: int
    l: int
    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, nu):
        acc = nu * 0
        for c in reversed(self.coeffs):
            acc = acc * nu + c
        return acc


@dataclass(frozen=True)
class RootIsolation:
    """Outcome of the realness audit for one truncation polynomial.

    ``real_count`` is a rigorous Sturm-chain count of distinct real roots;
    ``roots`` are those roots, refined and sorted strictly decreasing. A
    deficit (real_count < degree) would mean complex roots exist; none
    occur for the orders exercised here, but the count is never assumed.
    """

    roots: tuple[float, ...]
    real_count: int
    degree: int

    @property
    def all_real(self) -> bool:
        return self.real_count == self.degree


@dataclass(frozen=True)
class TruncationSolution:
    """One isolated polynomial solution of the radial equation.

    Index i is 1-based over roots in decreasing nu order. ``coeffs`` are
    c_0..c_n with c_0 = 1; the recurrence-extended c_{n+1}, c_{n+2} vanish
    at nu_root by construction.
    """

    n: int
    i: int
    l: int
    nu_root: float
    W: float
    coeffs: tuple[float, ...]
    # exact nu^2 at the refined root; lets ode_residual sidestep the float
    # coefficients, whose rounding alone costs ~1e-4 of relative residual
    # at the most negative roots. None for hand-built records.
    _mu: Fraction | None = field(default=None, repr=False, compare=False)

    @property
    def s(self) -> int:
        return abs(self.l)


def recurrence_coeffs(j: int, s: int, nu, W) -> RecurrencePair:
    """Recurrence pair (A_j, B_j) for c_{j+2} = A_j c_{j+1} + B_j c_j.

    Exact when nu and W are Fractions; float otherwise. Valid for all
    j >= -1, s >= 0 (denominators cannot vanish there).
    """
    if j < -1:
        raise ValueError(f"recurrence index j={j} must be >= -1")
    if s < 0:
        raise ValueError(f"s={s} must be >= 0")
    den = (j + 2) * (j + 2 * (s + 1))
    A = nu * (2 * j + 2 * s + 3) / (2 * den)
    B = -(4 * W - 8 * j + nu * nu - 8 * (s + 1)) / (4 * den)
    return RecurrencePair(A=A, B=B)


def series_coeffs(n_terms: int, s: int, nu, W) -> list:
    """Series coefficients c_0..c_{n_terms} with c_0 = 1, c_{-1} = 0."""
    coeffs = [1]
    prev = 0
    for j in range(-1, n_terms - 1):
        pair = recurrence_coeffs(j, s, nu, W)
        coeffs.append(pair.A * coeffs[-1] + pair.B * prev)
        prev = coeffs[-2]
    return coeffs


def truncation_energy(n: int, s: int, nu):
    """Eigenvalue forced by truncation at order n: W = 2(n+s+1) - nu^2/4."""
    return 2 * (n + s + 1) - nu * nu / 4


# ---------------------------------------------------------------------------
# exact polynomial arithmetic (ascending Fraction tuples)

def _poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_diff(p):
    return tuple(k * c for k, c in enumerate(p) if k)


def _poly_rem(num, den):
    # remainder of exact polynomial division
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    for k in range(len(num) - 1, dd - 1, -1):
        f = num[k] / lead
        if f:
            for m in range(dd + 1):
                num[k - dd + m] -= f * den[m]
    rem = num[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return tuple(rem)


def _poly_div(num, den):
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    q = [Fraction(0)] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        f = num[k] / lead
        q[k - dd] = f
        for m in range(dd + 1):
            num[k - dd + m] -= f * den[m]
    return tuple(q)


def _sturm_chain(p):
    chain = [p, _poly_diff(p)]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(tuple(-c for c in rem))
    return chain


def _sign_variations(chain, x):
    signs = []
    for p in chain:
        v = _poly_eval(p, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, lo, hi):
    # distinct real roots in the half-open interval (lo, hi]
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def _interior_point(q, lo, hi):
    # a point strictly inside (lo, hi) where q does not vanish
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 5), (4, 5)):
        mid = lo + (hi - lo) * Fraction(num, den)
        if _poly_eval(q, mid) != 0:
            return mid
    raise RootRefinementFailure("no usable subdivision point found")


def _isolate(chain, q, lo, hi, out):
    count = _count_roots(chain, lo, hi)
    if count == 0:
        return
    if count == 1 and _poly_eval(q, lo) * _poly_eval(q, hi) < 0:
        out.append((lo, hi))
        return
    mid = _interior_point(q, lo, hi)
    _isolate(chain, q, lo, mid, out)
    _isolate(chain, q, mid, hi, out)


def _refine(q, lo, hi):
    flo = _poly_eval(q, lo)
    for _ in range(400):
        if hi - lo <= ROOT_REL_TOL * max(Fraction(1), hi):
            return (lo + hi) / 2
        mid = (lo + hi) / 2
        v = _poly_eval(q, mid)
        if v == 0:
            return mid
        if (v > 0) == (flo > 0):
            lo, flo = mid, v
        else:
            hi = mid
    raise RootRefinementFailure(
        f"bisection did not reach tolerance on ({float(lo)}, {float(hi)})")


# ---------------------------------------------------------------------------
# truncation polynomial and its roots

@lru_cache(maxsize=None)
def _series_polynomials(n: int, s: int) -> tuple[tuple[Fraction, ...], ...]:
    """c_0..c_{n+2} as exact polynomials in nu, W fixed by order-n truncation."""
    polys = [(Fraction(1),)]
    prev: tuple[Fraction, ...] = ()
    for j in range(-1, n + 1):
        den = (j + 2) * (j + 2 * (s + 1))
        a = Fraction(2 * j + 2 * s + 3, 2 * den)
        b = Fraction(2 * (j - n), den)        # B_j with W eliminated
        nxt = [Fraction(0)] + [a * c for c in polys[-1]]
        for k, c in enumerate(prev):
            nxt[k] += b * c
        prev = polys[-1]
        polys.append(tuple(nxt))
    return tuple(polys)


def cnp1_polynomial(n: int, l: int) -> TruncationPolynomial:
    """Exact truncation polynomial c_{n+1}(nu) for order n and momentum l.

    Built by running the recurrence symbolically in nu with the eigenvalue
    eliminated through W = 2(n+s+1) - nu^2/4, so each B_j collapses to the
    nu-independent rational 2(j-n) / ((j+2)(j+2(s+1))). The result has
    degree exactly n+1, parity (-1)^(n+1), and a positive leading
    coefficient. Depends on l only through s = |l|.
    """
    if n < 0:
        raise ValueError(f"truncation order n={n} must be >= 0")
    coeffs = _series_polynomials(n, abs(l))[n + 1]
    return TruncationPolynomial(n=n, l=l, coeffs=coeffs)


class _RootRecord(NamedTuple):
    nu: float
    mu: Fraction     # exact refined value of nu^2


@lru_cache(maxsize=None)
def _root_data(n: int, s: int) -> tuple[tuple[_RootRecord, ...], int]:
    """Isolated roots (decreasing nu) and the rigorous real-root count."""
    p = _series_polynomials(n, s)[n + 1]
    parity = (n + 1) % 2
    if any(c != 0 for k, c in enumerate(p) if k % 2 != parity):
        raise AssertionError(f"parity violated for n={n}, s={s}")
    q = p[parity::2]                      # polynomial in mu = nu^2
    if q[0] == 0:
        # would mean a nu=0 root of multiplicity > parity; not seen at any
        # tested order, so treat as a defect rather than guessing
        raise RootRefinementFailure(f"mu=0 root in reduced polynomial (n={n}, s={s})")

    positives: list[Fraction] = []
    if len(q) > 1:
        chain = _sturm_chain(q)
        gcd = chain[-1]
        if len(gcd) > 1:                  # repeated roots: isolate the squarefree part
            q = _poly_div(q, gcd)
            chain = _sturm_chain(q)
        bound = Fraction(1) + max(abs(c) for c in q[:-1]) / q[-1]
        brackets: list[tuple[Fraction, Fraction]] = []
        _isolate(chain, q, Fraction(0), bound, brackets)
        positives = sorted((_refine(q, lo, hi) for lo, hi in brackets), reverse=True)

    real_count = 2 * len(positives) + parity
    records = [_RootRecord(math.sqrt(float(mu)), mu) for mu in positives]
    if parity:
        records.append(_RootRecord(0.0, Fraction(0)))
    records.extend(_RootRecord(-math.sqrt(float(mu)), mu) for mu in reversed(positives))

    deduped: list[_RootRecord] = []
    for rec in records:
        if deduped and abs(rec.nu - deduped[-1].nu) < DEDUP_TOL * (1 + abs(rec.nu)):
            continue
        deduped.append(rec)
    return tuple(deduped), real_count


def root_isolation(n: int, l: int) -> RootIsolation:
    """Realness audit for c_{n+1}: refined real roots plus a rigorous count."""
    records, real_count = _root_data(n, abs(l))
    return RootIsolation(
        roots=tuple(rec.nu for rec in records),
        real_count=real_count,
        degree=n + 1,
    )


def truncation_roots(n: int, l: int) -> list[float]:
    """All real roots of c_{n+1}(nu), strictly decreasing.

    Warns if the rigorous real-root count falls short of the degree n+1
    (no such deficit occurs for n <= 22, but it is checked, not assumed).
    """
    iso = root_isolation(n, l)
    if not iso.all_real:
        warnings.warn(
            f"truncation polynomial n={n}, l={l}: only {iso.real_count} of "
            f"{iso.degree} roots are real",
            RuntimeWarning,
            stacklevel=2,
        )
    return list(iso.roots)


def _coeff_at_root(poly: tuple[Fraction, ...], rec: _RootRecord, j: int) -> float:
    # c_j has parity j; evaluate its even part exactly at mu, then restore sign
    val = _poly_eval(poly[j % 2::2], rec.mu)
    return float(val) * (rec.nu if j % 2 else 1.0)


def polynomial_solution(n: int, i: int, l: int) -> TruncationSolution:
    """Full solution record for the i-th root (1-based, decreasing nu).

    Coefficients c_0..c_n are evaluated in exact rational arithmetic at the
    refined root before conversion to float; the closure conditions
    c_{n+1} = c_{n+2} = 0 are verified to 1e-10 relative to max |c_j|.
    """
    records, _ = _root_data(n, abs(l))
    if not 1 <= i <= len(records):
        raise IndexOutOfRange(
            f"root index i={i} outside 1..{len(records)} for n={n}, l={l}")
    rec = records[i - 1]
    polys = _series_polynomials(n, abs(l))
    values = [_coeff_at_root(polys[j], rec, j) for j in range(n + 3)]
    scale = max(abs(v) for v in values[: n + 1])
    if abs(values[n + 1]) > CLOSURE_TOL * scale or abs(values[n + 2]) > CLOSURE_TOL * scale:
        raise RootRefinementFailure(
            f"closure failed at n={n}, i={i}, l={l}: "
            f"c_{n+1}={values[n + 1]:.3e}, c_{n+2}={values[n + 2]:.3e}")
    if values[n] == 0:
        raise RootRefinementFailure(f"degenerate solution: c_n = 0 at n={n}, i={i}, l={l}")
    W = float(2 * (n + abs(l) + 1) - rec.mu / 4)
    return TruncationSolution(
        n=n, i=i, l=l, nu_root=rec.nu, W=W, coeffs=tuple(values[: n + 1]),
        _mu=rec.mu)


def evaluate_F(sol: TruncationSolution, r: float) -> float:
    """Radial eigenfunction r^s exp(-r^2/2 - nu r/2) sum_j c_j r^j at r > 0."""
    if r <= 0:
        raise ValueError(f"r={r} must be > 0")
    poly = 0.0
    for c in reversed(sol.coeffs):
        poly = poly * r + c
    return r ** sol.s * math.exp(-r * r / 2 - sol.nu_root * r / 2) * poly


@lru_cache(maxsize=None)
def _exact_coeff_pairs(n: int, s: int, mu: Fraction) -> tuple:
    """c_j at the root as exact field elements (x, y) meaning x + y*nu.

    Each c_j has the parity of j, so one component is always zero; the
    field is Q(nu) with nu^2 = mu, and the representation is sign-blind
    (both roots +/-sqrt(mu) share it).
    """
    polys = _series_polynomials(n, s)
    pairs = []
    for j in range(n + 1):
        if j % 2 == 0:
            pairs.append((_poly_eval(polys[j][0::2], mu), Fraction(0)))
        else:
            pairs.append((Fraction(0), _poly_eval(polys[j][1::2], mu)))
    return tuple(pairs)


@lru_cache(maxsize=None)
def _sqrt_highprec(mu: Fraction) -> Fraction:
    # rational sqrt(mu) good to ~2^-160, for cancellation-free conversion
    K = 1 << 160
    return Fraction(math.isqrt(mu.numerator * K * K // mu.denominator), K)


def _exact_residual_terms(sol: TruncationSolution, r: float) -> tuple[list[float], float]:
    # the six equation terms divided by the exponential factor, computed
    # exactly in Q(nu); returns their float magnitudes plus the exact sum
    # converted through a high-precision sqrt (the x and y components of
    # each term are large and cancel, so float(x) + float(y)*nu would put
    # a rounding floor of ~1e-7 under the residual)
    mu = sol._mu
    s, l2, n = sol.s, sol.l * sol.l, sol.n
    rf = Fraction(r)
    W = 2 * (n + s + 1) - mu / 4

    Px = Py = Ppx = Ppy = Pppx = Pppy = Fraction(0)
    for cx, cy in reversed(_exact_coeff_pairs(n, s, mu)):
        Pppx, Pppy = Pppx * rf + 2 * Ppx, Pppy * rf + 2 * Ppy
        Ppx, Ppy = Ppx * rf + Px, Ppy * rf + Py
        Px, Py = Px * rf + cx, Py * rf + cy

    def fmul(a, b):
        return (a[0] * b[0] + a[1] * b[1] * mu, a[0] * b[1] + a[1] * b[0])

    rs = rf ** s
    rs1 = rf ** (s - 1) if s >= 1 else Fraction(0)
    rs2 = rf ** (s - 2) if s >= 2 else Fraction(0)
    G = (rs * Px, rs * Py)
    Gp = (s * rs1 * Px + rs * Ppx, s * rs1 * Py + rs * Ppy)
    Gpp = (s * (s - 1) * rs2 * Px + 2 * s * rs1 * Ppx + rs * Pppx,
           s * (s - 1) * rs2 * Py + 2 * s * rs1 * Ppy + rs * Pppy)

    phi = (-rf, Fraction(-1, 2))                  # d/dr of the exponent
    phi2m1 = (rf * rf + mu / 4 - 1, rf)           # phi^2 - 1
    gp_phi = fmul(Gp, phi)
    g_phi = fmul(G, phi)
    g_phi2 = fmul(G, phi2m1)
    g_nu = (G[1] * mu, G[0])                      # G * nu

    terms = [
        (Gpp[0] + 2 * gp_phi[0] + g_phi2[0], Gpp[1] + 2 * gp_phi[1] + g_phi2[1]),
        ((Gp[0] + g_phi[0]) / rf, (Gp[1] + g_phi[1]) / rf),
        (-l2 * G[0] / rf ** 2, -l2 * G[1] / rf ** 2),
        (-rf * rf * G[0], -rf * rf * G[1]),
        (-rf * g_nu[0], -rf * g_nu[1]),
        (W * G[0], W * G[1]),
    ]
    root = _sqrt_highprec(mu) if sol.nu_root >= 0 else -_sqrt_highprec(mu)
    floats = [float(tx + ty * root) for tx, ty in terms]
    resid = float(sum(tx for tx, _ in terms) + sum(ty for _, ty in terms) * root)
    return floats, resid


def ode_residual(sol: TruncationSolution, r: float, relative: bool = False) -> float:
    """Residual of the radial equation at r, from analytic derivatives.

    Writes F = G(r) E(r) with G = r^s P(r) and E the exponential factor and
    differentiates in closed form (no finite differences). Solver-produced
    records carry the exact root, and the six equation terms are then
    evaluated in exact rational arithmetic before the final rounding; the
    stored float coefficients alone would cost ~1e-4 of relative residual
    at the most negative high-order roots. With ``relative`` the residual
    is scaled by the largest term magnitude.
    """
    if r <= 0:
        raise ValueError(f"r={r} must be > 0")
    s, nu, W = sol.s, sol.nu_root, sol.W
    if sol._mu is not None:
        terms, resid = _exact_residual_terms(sol, r)
        if relative:
            scale = max(abs(t) for t in terms)
            return resid / scale if scale else 0.0
        return resid * math.exp(-r * r / 2 - nu * r / 2)
    P = Pp = Ppp = 0.0
    for c in reversed(sol.coeffs):
        Ppp = Ppp * r + 2 * Pp
        Pp = Pp * r + P
        P = P * r + c
    rs = r ** s
    G = rs * P
    Gp = s * r ** (s - 1) * P + rs * Pp
    Gpp = s * (s - 1) * r ** (s - 2) * P + 2 * s * r ** (s - 1) * Pp + rs * Ppp
    E = math.exp(-r * r / 2 - nu * r / 2)
    phi = -r - nu / 2                              # d/dr of the exponent
    F = G * E
    Fp = (Gp + G * phi) * E
    Fpp = (Gpp + 2 * Gp * phi + G * (phi * phi - 1)) * E
    terms = (Fpp, Fp / r, -sol.l ** 2 * F / (r * r), -r * r * F, -nu * r * F, W * F)
    resid = math.fsum(terms)
    if relative:
        scale = max(abs(t) for t in terms)
        return resid / scale if scale else 0.0
    return resid
