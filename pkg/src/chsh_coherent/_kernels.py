"""Internal numeric kernels shared by the state and correlator modules.

Everything here exists to keep small-parameter evaluations accurate: the
normalization denominators and kappa factors all cancel at low order in
alpha, beta, so they are computed from remainder functions (expm1-style)
or from product identities instead of naive differences.
"""

import math

SQRT2 = math.sqrt(2.0)
TSIRELSON = 2.0 * math.sqrt(2.0)

# Below this, a normalization denominator is treated as zero and the state
# rejected as degenerate.
DEGENERACY_THRESHOLD = 1e-10


def exp_rem(t: float) -> float:
    """e^t - 1 - t, accurate for small |t|."""
    if abs(t) < 0.125:
        term = t * t / 2.0
        acc = term
        k = 3
        while True:
            term *= t / k
            acc += term
            if abs(term) <= 1e-18 * abs(acc) + 5e-300:
                return acc
            k += 1
    return math.expm1(t) - t


def coshm1(t: float) -> float:
    """cosh t - 1, without cancellation."""
    s = math.sinh(0.5 * t)
    return 2.0 * s * s


def cosh_rem(t: float) -> float:
    """cosh t - 1 - t^2/2."""
    if abs(t) < 1.0:
        t2 = t * t
        term = t2 * t2 / 24.0
        acc = term
        k = 3
        while True:
            term *= t2 / ((2 * k - 1) * (2 * k))
            acc += term
            if abs(term) <= 1e-18 * abs(acc) + 5e-300:
                return acc
            k += 1
    return coshm1(t) - 0.5 * t * t


def sinh_rem(t: float) -> float:
    """sinh t - t - t^3/6."""
    if abs(t) < 1.0:
        t2 = t * t
        term = t * t2 * t2 / 120.0
        acc = term
        k = 3
        while True:
            term *= t2 / ((2 * k) * (2 * k + 1))
            acc += term
            if abs(term) <= 1e-18 * abs(acc) + 5e-300:
                return acc
            k += 1
    return math.sinh(t) - t - t * t * t / 6.0


def kappa_even(alpha: float, beta: float) -> float:
    """cosh^2(ab) - cosh(a^2)cosh(b^2), as a cancellation-free product sum.

    Identity: kappa_+ = -[sinh((a+b)^2/2) sinh((a-b)^2/2) + sinh^2((a^2-b^2)/2)];
    both pieces are non-negative, so no digits are lost near a = b.
    """
    u = 0.5 * (alpha + beta) ** 2
    v = 0.5 * (alpha - beta) ** 2
    w = 0.5 * (alpha * alpha - beta * beta)
    sw = math.sinh(w)
    return -(math.sinh(u) * math.sinh(v) + sw * sw)


def kappa_odd(alpha: float, beta: float) -> float:
    """sinh^2(ab) - sinh(a^2)sinh(b^2).

    kappa_- cancels at sixth order (leading term -a^2 b^2 (a^2-b^2)^2 / 6), so
    for small arguments it is summed from the identity
        kappa_- = (1/2) sum_{k>=2} (p^{2k} + d^{2k} - s^{2k}) / (2k)!
    with p = 2ab, d = a^2-b^2, s = a^2+b^2 and s^2 = p^2 + d^2, where each
    binomial-expanded term is a same-sign sum.
    """
    x, y = alpha * alpha, beta * beta
    s = x + y
    if s <= 2.0:
        p2 = 4.0 * x * y
        d2 = (x - y) ** 2
        total = 0.0
        fact = 24.0  # (2k)! at k = 2
        k = 2
        while True:
            inner = 0.0
            c = 1.0
            for j in range(1, k):
                c = c * (k - j + 1) / j
                inner += c * p2**j * d2 ** (k - j)
            term = inner / fact
            total += term
            if term <= 1e-18 * total + 5e-300 or k > 80:
                break
            k += 1
            fact *= (2 * k - 1) * (2 * k)
        return -0.5 * total
    u = 0.5 * (alpha + beta) ** 2
    v = 0.5 * (alpha - beta) ** 2
    w = 0.5 * (x - y)
    return math.sinh(w) ** 2 - math.sinh(u) * math.sinh(v)


def _half_angle_sq(phi: float) -> float:
    """1 + cos(phi), computed as 2 cos^2(phi/2)."""
    c = math.cos(0.5 * phi)
    return 2.0 * c * c


def symmetric_weight(alpha: float, beta: float, phi: float) -> float:
    """1 + cos(phi) exp[-(a-b)^2], stable at phi ~ pi with a ~ b."""
    return _half_angle_sq(phi) + math.cos(phi) * math.expm1(-((alpha - beta) ** 2))


def asymmetric_weight(alpha: float, beta: float, phi: float) -> float:
    """1 + cos(phi) exp[-2(a^2+b^2)]."""
    return _half_angle_sq(phi) + math.cos(phi) * math.expm1(
        -2.0 * (alpha * alpha + beta * beta)
    )


def cat_even_weight(alpha: float, beta: float, phi: float) -> float:
    """1 + cos(phi) cosh^2(ab) / (cosh(a^2) cosh(b^2))."""
    x, y = alpha * alpha, beta * beta
    ch = math.cosh(alpha * beta)
    num = -kappa_even(alpha, beta) + _half_angle_sq(phi) * ch * ch
    return num / (math.cosh(x) * math.cosh(y))


def cat_odd_weight(alpha: float, beta: float, phi: float) -> float:
    """1 + cos(phi) sinh^2(ab) / (sinh(a^2) sinh(b^2))."""
    x, y = alpha * alpha, beta * beta
    sh = math.sinh(alpha * beta)
    num = -kappa_odd(alpha, beta) + _half_angle_sq(phi) * sh * sh
    return num / (math.sinh(x) * math.sinh(y))
