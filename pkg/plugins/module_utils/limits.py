from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import math
import traceback
from dataclasses import dataclass, field
from fractions import Fraction

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    DomainError,
    NonConvergenceError,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import qpochhammer
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    GoFReport,
    normalize_perimeter,
)

IMP_ERR = {}
try:
    import numpy as np
except ImportError as e:
    IMP_ERR['numpy'] = {'error': traceback.format_exc(),
                        'exception': e}
try:
    from scipy.integrate import quad
    from scipy.special import expit, k1e
except ImportError as e:
    IMP_ERR['scipy'] = {'error': traceback.format_exc(),
                        'exception': e}

SQRT3_OVER_PI = math.sqrt(3) / math.pi
SQRT6_OVER_PI = math.sqrt(6) / math.pi
# 2a cosh(T) >= QUAD_CUTOFF keeps the dropped integrand tail below 1e-12
QUAD_CUTOFF = 30.0
DEFAULT_POCHHAMMER_THRESHOLD = 5.0


def gumbel_cdf(x):
    with np.errstate(over='ignore'):
        return np.exp(-np.exp(-np.asarray(x, dtype=np.float64)))


def joint_perimeter_cdf(x, y):
    return gumbel_cdf(x) * gumbel_cdf(y)


def logistic_cdf(x):
    return expit(np.asarray(x, dtype=np.float64))


def _length_sum_bessel(x):
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(over='ignore', invalid='ignore'):
        z = 2.0 * np.exp(-x / 2.0)
        value = z * k1e(z) * np.exp(-z)
    value = np.where(z == 0.0, 1.0, value)
    return np.where(np.isinf(z), 0.0, value)


def _length_sum_quad_scalar(x):
    a = math.exp(-x / 2.0)
    if a == 0.0:
        return 1.0
    if 2.0 * a > 700.0:
        return 0.0

    def integrand(t):
        c = math.cosh(t)
        return c * math.exp(-2.0 * a * c)

    cutoff = math.acosh(max(QUAD_CUTOFF / (2.0 * a), math.cosh(1.0)))
    points = None
    if 2.0 * a < 1.0:
        peak = math.acosh(1.0 / (2.0 * a))
        points = [peak] if peak < cutoff else None

    def integrate(upper):
        value, _ = quad(integrand, 0.0, upper, points=points if points and points[0] < upper else None,
                        epsabs=1e-14, epsrel=1e-12, limit=400)
        return 2.0 * a * value

    value = integrate(cutoff)
    doubled = integrate(2.0 * cutoff)
    if abs(value - doubled) > 1e-10:
        raise NonConvergenceError(
            f"length-sum quadrature unstable at x={x}: {value} vs {doubled} on the doubled range")
    return min(1.0, max(0.0, doubled))


def length_sum_cdf(x, method='bessel'):
    """
    length_sum_cdf is the law of the sum of two independent standard Gumbel variables,
    a e^(-t)-weighted integral of exp(-2a cosh t) with a = e^(-x/2), equal to 2a K1(2a).
    The integrand is taken with the decaying exponent exp(-2a cosh t).
    method is 'bessel' (closed form with scipy's exponentially scaled K1) or 'quadrature'.
    """
    if method == 'bessel':
        return _length_sum_bessel(x)
    if method == 'quadrature':
        return np.vectorize(_length_sum_quad_scalar, otypes=[np.float64])(np.asarray(x, dtype=np.float64))
    raise DomainError(f"unknown method {method}, expecting bessel or quadrature")


def pochhammer_limit(x, tau):
    """pochhammer_limit is (tau e^(-x); e^(-tau))_inf, which tends to gumbel_cdf(x) as tau -> 0."""
    return qpochhammer(tau * math.exp(-x), math.exp(-tau))


def perimeter_mass(tau, x, y):
    """
    perimeter_mass is the product form tau^2 e^(-x-y) (tau e^(-x) q; q)_inf (tau e^(-y) q; q)_inf,
    q = e^(-tau), of Q_q(l(plus), l(minus)) at f_tau(x), f_tau(y) with f_tau(x) = (x - ln tau) / tau.
    """
    q = math.exp(-tau)
    return (tau ** 2 * math.exp(-x - y)
            * qpochhammer(tau * math.exp(-x) * q, q)
            * qpochhammer(tau * math.exp(-y) * q, q))


def perimeter_mass_limit(tau, x, y):
    return tau ** 2 * math.exp(-(x + y)) * math.exp(-(math.exp(-x) + math.exp(-y)))


def check_pochhammer_bounds(trials, gen, threshold=DEFAULT_POCHHAMMER_THRESHOLD):
    """
    check_pochhammer_bounds draws tau in (0, 0.3] and x, y in [-1, 5] and checks
    (1) (tau e^(-y) q; q)_inf <= exp(-q e^(-y)),
    (2) the product form is at most tau^2 e^(-x-y) exp(-q (e^(-x) + e^(-y))),
    (3) |mass / limit - 1| <= K tau (1 + e^(-2x) + e^(-2y)); the fitted K is the reported statistic.
    Violations are counted and reported, never raised.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    taus = 0.3 * (1.0 - gen.random(trials))
    xs = gen.uniform(-1.0, 5.0, trials)
    ys = gen.uniform(-1.0, 5.0, trials)
    part1 = part2 = 0
    fitted = 0.0
    for tau, x, y in zip(taus, xs, ys):
        tau, x, y = float(tau), float(x), float(y)
        q = math.exp(-tau)
        if qpochhammer(tau * math.exp(-y) * q, q) > math.exp(-q * math.exp(-y)) * (1 + 1e-12):
            part1 += 1
        mass = perimeter_mass(tau, x, y)
        bound = tau ** 2 * math.exp(-x - y) * math.exp(-q * (math.exp(-x) + math.exp(-y)))
        if mass > bound * (1 + 1e-12):
            part2 += 1
        scale = tau * (1 + math.exp(-2 * x) + math.exp(-2 * y))
        fitted = max(fitted, abs(mass / perimeter_mass_limit(tau, x, y) - 1) / scale)
    return GoFReport(
        test='pochhammer',
        statistic=fitted,
        n_samples=trials,
        threshold=float(threshold),
        passed=part1 == 0 and part2 == 0 and fitted <= threshold,
        detail={'part1_violations': part1, 'part2_violations': part2, 'fitted_constant': fitted},
    )


@dataclass(frozen=True)
class MixtureWeights:
    """
    MixtureWeights are the exact weights w_k = p(k) p(n-k) / p2(n) of the size of the plus side.
    """
    n: int
    weights: tuple
    sigma_hat: float

    def total(self):
        return sum(self.weights, Fraction(0))

    def as_floats(self):
        return np.array([float(w) for w in self.weights], dtype=np.float64)

    def offsets(self):
        return np.arange(self.n + 1, dtype=np.float64) - self.n / 2.0

    def gaussian_deviation(self, radius):
        """Largest |w_(n/2+z) sqrt(2 pi) sigma_hat exp(z^2 / 2 sigma_hat^2) - 1| over |z| <= radius."""
        z = self.offsets()
        inside = np.abs(z) <= radius
        w = self.as_floats()[inside]
        scaled = w * math.sqrt(2 * math.pi) * self.sigma_hat * np.exp(z[inside] ** 2 / (2 * self.sigma_hat ** 2))
        return float(np.abs(scaled - 1.0).max())

    def tail_mass(self, radius):
        """Exact weight of |k - n/2| > radius."""
        center = Fraction(self.n, 2)
        return float(sum((w for k, w in enumerate(self.weights) if abs(k - center) > radius), Fraction(0)))

    def to_csv_rows(self):
        return [(k, float(w)) for k, w in enumerate(self.weights)]


def mixture_sigma(n):
    return (3.0 / (4.0 * math.pi ** 2)) ** 0.25 * n ** 0.75


def mixture_weights(n, table):
    """mixture_weights builds the exact rational weights from a CountTable filled to n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    p2 = table.require('p2', n)
    p = [table.require('p', k) for k in range(n + 1)]
    weights = tuple(Fraction(p[k] * p[n - k], p2) for k in range(n + 1))
    return MixtureWeights(n=n, weights=weights, sigma_hat=mixture_sigma(n))


def weight_asymptotic(n, k):
    """weight_asymptotic is the closed form of w_k from the p(n) and p2(n) leading terms."""
    if not 0 < k < n:
        raise DomainError(f"k must lie strictly between 0 and n={n}, got {k}")
    prefactor = 12 ** 0.25 * n ** 1.25 / (4 * math.sqrt(6) * k * (n - k))
    return prefactor * math.exp(math.pi * math.sqrt(2 / 3) * (math.sqrt(k) + math.sqrt(n - k) - math.sqrt(2 * n)))


def weights_tail_mass(weights, radius):
    return weights.tail_mass(radius)


@dataclass(frozen=True)
class FittingConstants:
    c_plus: float
    c_minus: float

    @property
    def a_plus(self):
        return -math.log(self.c_plus)

    @property
    def a_minus(self):
        return -math.log(self.c_minus)


def fit_constants(summary, n):
    """fit_constants sets C = exp(-A) with A the normalized length of each side."""
    return FittingConstants(
        c_plus=math.exp(-normalize_perimeter(summary.len_plus, n)),
        c_minus=math.exp(-normalize_perimeter(summary.len_minus, n)),
    )


@dataclass(frozen=True)
class Step:
    left: Fraction
    right: Fraction
    height: int


@dataclass
class Profile:
    """
    Profile is the step graph of a composition (or, in partition mode, of one Young diagram).
    steps are in raw units as half-open intervals (left, right]; the normalized graph
    divides both axes by sqrt(n).
    """
    n: int
    steps: tuple
    minus: object = None
    plus: object = None
    mode: str = 'composition'
    limit_overlay: dict = field(default_factory=dict)

    def integral(self):
        return sum((s.height * (s.right - s.left) for s in self.steps), Fraction(0))

    @property
    def breakpoints(self):
        root = math.sqrt(self.n)
        points = []
        for s in self.steps:
            points.append((float(s.left) / root, s.height / root))
            points.append((float(s.right) / root, s.height / root))
        return points

    def boundary(self, y, side='plus'):
        """
        boundary is the normalized x-coordinate of the graph edge at normalized height y:
        +-(l - x_lambda(y sqrt n) + 1/2) / sqrt(n) for compositions, x_lambda(y sqrt n) / sqrt(n)
        in partition mode, with x_lambda(h) the number of parts greater than h.
        """
        root = math.sqrt(self.n)
        height = y * root
        if self.mode == 'partition':
            return sum(1 for p in self.plus.parts if p > height) / root
        partition = self.plus if side == 'plus' else self.minus
        above = sum(1 for p in partition.parts if p > height)
        tick = (partition.length - above + 0.5) / root
        return tick if side == 'plus' else -tick

    def is_convex_shape(self):
        """Heights weakly increase moving outward from the central cell on both sides."""
        right = [s.height for s in sorted(self.steps, key=lambda s: s.left) if s.left >= Fraction(1, 2)]
        left = [s.height for s in sorted(self.steps, key=lambda s: -s.right) if s.right <= Fraction(-1, 2)]
        return all(a <= b for a, b in zip(right, right[1:])) and all(a <= b for a, b in zip(left, left[1:]))


def _side_steps(partition, sign):
    """Steps of one side: parts sorted increasing, placed outward from the central cell."""
    steps = []
    for j, part in enumerate(reversed(partition.parts), start=1):
        low = Fraction(2 * j - 1, 2)
        high = Fraction(2 * j + 1, 2)
        if sign > 0:
            steps.append(Step(low, high, part))
        else:
            steps.append(Step(-high, -low, part))
    return steps


def build_profile(comp):
    """
    build_profile lays out a concave composition: the central part on (-1/2, 1/2], the
    plus parts increasing to the right and the minus parts increasing to the left, one
    unit-width column per part.
    """
    n = comp.total
    if n < 1:
        raise DomainError("profile needs a composition of a positive integer")
    steps = list(reversed(_side_steps(comp.minus, -1)))
    if comp.center:
        steps.append(Step(Fraction(-1, 2), Fraction(1, 2), comp.center))
    steps.extend(_side_steps(comp.plus, 1))
    return Profile(n=n, steps=tuple(steps), minus=comp.minus, plus=comp.plus)


def build_partition_profile(partition):
    """build_partition_profile lays out a Young diagram with one column per part from x = 0."""
    if partition.size < 1:
        raise DomainError("profile needs a partition of a positive integer")
    steps = tuple(Step(Fraction(j), Fraction(j + 1), part) for j, part in enumerate(partition.parts))
    return Profile(n=partition.size, steps=steps, plus=partition, mode='partition')


def _check_grid(y_grid):
    ys = [float(y) for y in y_grid]
    if any(y <= 0 for y in ys):
        raise DomainError("limit curves are defined for strictly positive heights only")
    return ys


def limit_branch(n, c, y):
    """
    limit_branch is |x| on one side of the limit curve at normalized height y:
    (sqrt 3 / pi) (ln(sqrt(3n) / pi) + ln(1 - e^(-pi y / sqrt 3)) - ln C).
    As y grows this tends to l / sqrt(n) for the length l that produced C.
    """
    return SQRT3_OVER_PI * (math.log(math.sqrt(3 * n) / math.pi)
                            + math.log(-math.expm1(-y / SQRT3_OVER_PI)) - math.log(c))


def limit_curve(n, fc, y_grid):
    """limit_curve samples both branches of the fitted limit curve on a positive height grid."""
    ys = _check_grid(y_grid)
    return {
        'limit_plus': [(limit_branch(n, fc.c_plus, y), y) for y in ys],
        'limit_minus': [(-limit_branch(n, fc.c_minus, y), y) for y in ys],
    }


def temperley_curve(y_grid):
    """temperley_curve solves e^(-pi x / sqrt 6) + e^(-pi y / sqrt 6) = 1 for x on a positive grid."""
    ys = _check_grid(y_grid)
    return [(-SQRT6_OVER_PI * math.log(-math.expm1(-y / SQRT6_OVER_PI)), y) for y in ys]


def limit_shape_deviation(profile, fc, y_grid):
    """Sup over the grid and both sides of |profile boundary - fitted limit branch|."""
    ys = _check_grid(y_grid)
    worst = 0.0
    for y in ys:
        worst = max(worst,
                    abs(profile.boundary(y, 'plus') - limit_branch(profile.n, fc.c_plus, y)),
                    abs(profile.boundary(y, 'minus') + limit_branch(profile.n, fc.c_minus, y)))
    return worst


def temperley_deviation(profile, y_grid):
    ys = _check_grid(y_grid)
    return max(abs(profile.boundary(y) - x) for x, y in temperley_curve(ys))


def median_boundary(profiles, y_grid, side='plus'):
    """median_boundary is the per-height median of the boundary over a list of profiles."""
    ys = _check_grid(y_grid)
    return [(float(np.median([p.boundary(y, side) for p in profiles])), y) for y in ys]
