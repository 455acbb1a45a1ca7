# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled twins of the pure sampling kernels.

Every function here transliterates its counterpart in the pure module
expression for expression: same operations, same order, same libm calls.
Together with the build flags (-O2, contraction off, no fast-math) that
makes the two implementations agree to the last bit, which the
cross-check tests rely on.  Change nothing here without mirroring it in
the pure module.
"""

from libc.math cimport INFINITY, ceil, cos, exp, fabs, log, pow, sqrt
from libc.stdint cimport uint64_t

cdef double _INV_2_53 = 1.1102230246251565e-16
cdef double _TWO_PI = 6.283185307179586
cdef uint64_t _WEYL = 0x9E3779B97F4A7C15ULL
cdef uint64_t _STREAM_SALT = 0xD1B54A32D192ED03ULL
cdef long _LEG_CAP = 1000000

_MASK_PY = (1 << 64) - 1


cdef inline uint64_t _finalize(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z = z * 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z = z * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _stream_base(uint64_t seed, uint64_t stream_id) noexcept nogil:
    cdef uint64_t h = _finalize(seed + _WEYL)
    h ^= _finalize(stream_id + _STREAM_SALT)
    return _finalize(h + _WEYL)


cdef inline double _unit_draw(uint64_t base, long counter) noexcept nogil:
    cdef uint64_t z = _finalize(base + (<uint64_t> counter) * _WEYL)
    return <double> ((z >> 11) + 1) * _INV_2_53


cdef long _ladder_exponent(double magnitude, double b) noexcept:
    cdef long k = <long> ceil(log(magnitude) / log(b))
    while pow(b, k) < magnitude:
        k += 1
    while pow(b, k - 1) >= magnitude:
        k -= 1
    return k


cdef double _walk_distance(double x, double y, double b) except? -1.0:
    cdef long k = _ladder_exponent(y, b)
    cdef double gamma = pow(b, k) / y
    cdef long first = 1 if (k & 1) == 0 else -1
    cdef double total = 0.0
    cdef double reach
    cdef long direction
    cdef long leg = 0
    while leg <= _LEG_CAP:
        reach = pow(b, leg) / gamma
        direction = first if (leg & 1) == 0 else -first
        if direction > 0 and reach >= x:
            return total + x
        total += 2.0 * reach
        leg += 1
    raise RuntimeError(
        "line search failed to terminate within the leg cap; "
        "inputs are outside the supported float range"
    )


cdef double _distance_unchecked(double x, double y, double b) noexcept:
    cdef long k = _ladder_exponent(y, b)
    cdef double gamma = pow(b, k) / y
    cdef double rel = y / x
    cdef long j = <long> ceil(log(x / y) / (2.0 * log(b)))
    while rel * pow(b, 2.0 * (j - 1)) >= 1.0:
        j -= 1
    while rel * pow(b, 2.0 * j) < 1.0:
        j += 1
    cdef long m = k + 2 * j
    return x + (2.0 / (b - 1.0)) * (pow(b, m) / gamma - 1.0 / gamma)


def ls_mc_cell(double x, double y, double b, double rho, seed, stream_id,
               long trials):
    """Sampled ratio of the line walk with an inflated hint; tracks the peak."""
    cdef uint64_t base = _stream_base(
        <uint64_t> (seed & _MASK_PY), <uint64_t> (stream_id & _MASK_PY)
    )
    cdef long n = 0
    cdef double mean = 0.0
    cdef double m2 = 0.0
    cdef double peak = 0.0
    cdef double u, xi, yt, ratio, delta
    cdef long t
    for t in range(trials):
        u = _unit_draw(base, t)
        xi = 1.0 / sqrt(u) - 1.0
        yt = (1.0 + rho * xi) * y
        ratio = _distance_unchecked(x, yt, b) / x
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
        if ratio > peak:
            peak = ratio
    return n, mean, m2, peak


def ls_oracle_scan(double b, double x_start, double x_step, long x_count,
                   long y_points):
    """Walked distance against the closed form over a target/hint grid."""
    cdef double worst = 0.0
    cdef double peak = 0.0
    cdef long cases = 0
    cdef double x, lo, hi, step, y, walked, closed, rel, ratio
    cdef long i, jj
    for i in range(x_count):
        x = x_start + i * x_step
        lo = log(1.01 * x / (b * b))
        hi = log(0.995 * b * b * x)
        step = (hi - lo) / (y_points - 1)
        for jj in range(y_points):
            y = exp(lo + jj * step)
            walked = _walk_distance(x, y, b)
            closed = _distance_unchecked(x, y, b)
            rel = fabs(walked - closed) / closed
            if rel > worst:
                worst = rel
            ratio = walked / x
            if ratio > peak:
                peak = ratio
            cases += 1
    return worst, peak, cases


def om_gu_cell(double c, double r, double rho, double s, seed, stream_id,
               long trials):
    """Sampled worst-instance guarantee of the smoothed threshold rule."""
    cdef uint64_t base = _stream_base(
        <uint64_t> (seed & _MASK_PY), <uint64_t> (stream_id & _MASK_PY)
    )
    cdef double cut = s / rho
    cdef long n = 0
    cdef double mean = 0.0
    cdef double m2 = 0.0
    cdef double u, val, delta
    cdef long t
    for t in range(trials):
        u = _unit_draw(base, t)
        if u >= cut:
            val = c * exp(-rho * u)
        else:
            val = r * exp(rho * u)
        n += 1
        delta = val - mean
        mean += delta / n
        m2 += delta * (val - mean)
    return n, mean, m2


cdef inline double _ramp_price(long i, long n, double p_star) noexcept nogil:
    return 1.0 + ((i - 1.0) / (n - 1.0)) * (p_star - 1.0)


cdef double _first_ramp_payoff(double phi, double p_star, long n) noexcept:
    cdef double pos
    cdef long i
    if phi <= 1.0:
        return 1.0
    if phi > p_star:
        return 1.0
    pos = (phi - 1.0) * ((n - 1.0) / (p_star - 1.0))
    i = 1 + <long> ceil(pos)
    if i > n:
        i = n
    while i > 1 and _ramp_price(i - 1, n, p_star) >= phi:
        i -= 1
    while _ramp_price(i, n, p_star) < phi:
        i += 1
    return _ramp_price(i, n, p_star)


def om_fig3_cell(double lam, double theta, double c, double r, double rho,
                 double sigma, double p_star, long n_prices, seed, stream_id,
                 long trials):
    """Sampled payoff fraction on the ramp-then-crash instance, noisy forecast."""
    cdef uint64_t base = _stream_base(
        <uint64_t> (seed & _MASK_PY), <uint64_t> (stream_id & _MASK_PY)
    )
    cdef double inv_c = 1.0 / c
    cdef double inv_r = 1.0 / r
    cdef long n = 0
    cdef double mean = 0.0
    cdef double m2 = 0.0
    cdef double u1, u2, y, phi, ratio, delta
    cdef long t
    for t in range(trials):
        u1 = _unit_draw(base, 2 * t)
        u2 = _unit_draw(base, 2 * t + 1)
        y = p_star + (2.0 * u1 - 1.0) * sigma
        if y < 1.0:
            y = 1.0
        elif y > theta:
            y = theta
        if y >= inv_r:
            phi = exp(-rho * u2) / r
        elif y < inv_c:
            phi = inv_c
        else:
            phi = lam / r + (1.0 - lam) * c * y
        ratio = _first_ramp_payoff(phi, p_star, n_prices) / p_star
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
    return n, mean, m2


def ski_fig5_cell(double b, double lam, double beta, double sigma, double x,
                  seed, stream_id, long trials):
    """Sampled cost ratio of the rent-or-buy policy under Gaussian noise."""
    cdef uint64_t base = _stream_base(
        <uint64_t> (seed & _MASK_PY), <uint64_t> (stream_id & _MASK_PY)
    )
    cdef long n = 0
    cdef double mean = 0.0
    cdef double m2 = 0.0
    cdef double u1, u2, z, y, buy_at, paid, opt, ratio, delta
    cdef long t
    for t in range(trials):
        u1 = _unit_draw(base, 2 * t)
        u2 = _unit_draw(base, 2 * t + 1)
        z = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)
        y = x + sigma * z
        buy_at = lam * b if y >= b else beta * b
        paid = x if x < buy_at else buy_at + b
        opt = x if x < b else b
        ratio = paid / opt
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
    return n, mean, m2


def ski_fig6_cell(double b, double lam, double beta, double q, seed, stream_id,
                  long trials):
    """Sampled cost ratio with random seasons and side-agreement forecasts."""
    cdef uint64_t base = _stream_base(
        <uint64_t> (seed & _MASK_PY), <uint64_t> (stream_id & _MASK_PY)
    )
    cdef long n = 0
    cdef double mean = 0.0
    cdef double m2 = 0.0
    cdef double u1, u2, x, buy_at, paid, opt, ratio, delta
    cdef bint season_ge, trusting
    cdef long t
    for t in range(trials):
        u1 = _unit_draw(base, 2 * t)
        u2 = _unit_draw(base, 2 * t + 1)
        x = 1.0 + (4.0 * b - 1.0) * u1
        season_ge = x >= b
        trusting = season_ge if u2 <= q else not season_ge
        buy_at = lam * b if trusting else beta * b
        paid = x if x < buy_at else buy_at + b
        opt = x if x < b else b
        ratio = paid / opt
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
    return n, mean, m2


def ski_thm3_scan(double b, double lam, double rho, double beta, long steps):
    """Largest excess of the realized cost ratio over its certificate."""
    cdef double robust = 1.0 + 1.0 / lam
    cdef double worst = -INFINITY
    cdef double x, y, opt, buy_at, paid, ratio, eta, bound, smooth, excess
    cdef double consistent
    cdef long i, jj
    for i in range(1, steps + 1):
        x = b * (i / 100.0)
        opt = x if x < b else b
        for jj in range(1, steps + 1):
            y = b * (jj / 100.0)
            buy_at = lam * b if y >= b else beta * b
            paid = x if x < buy_at else buy_at + b
            ratio = paid / opt
            eta = fabs(x - y)
            if rho == 0.0:
                if eta == 0.0:
                    consistent = 1.0 + lam
                    bound = robust if robust < consistent else consistent
                else:
                    bound = robust
            else:
                smooth = (1.0 + lam) + (1.0 + lam / rho) * (eta / opt)
                bound = robust if robust < smooth else smooth
            excess = ratio - bound
            if excess > worst:
                worst = excess
    return worst
