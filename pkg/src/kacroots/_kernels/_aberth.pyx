# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled backend for the simultaneous root solver.

Same contract as fallback.py: Jacobi-style Ehrlich-Aberth sweeps with
per-root locking, reversed-polynomial evaluation outside the unit disk, and
compensated (error-free transformation) Horner for high degrees whenever
plain evaluation is cancellation-dominated.  Hot loops run on raw double
components with no Python objects.
"""

import numpy as np

from libc.math cimport fabs, fma, hypot, sqrt, cos, sin

BACKEND_NAME = "compiled"

cdef double EPS = 2.220446049250313e-16


# ---------------------------------------------------------------------------
# error-free transformations

cdef inline void _two_sum(double a, double b, double* s, double* e) noexcept nogil:
    cdef double s0 = a + b
    cdef double bb = s0 - a
    e[0] = (a - (s0 - bb)) + (b - bb)
    s[0] = s0


cdef inline void _two_prod(double a, double b, double* p, double* e) noexcept nogil:
    cdef double p0 = a * b
    e[0] = fma(a, b, -p0)
    p[0] = p0


# ---------------------------------------------------------------------------
# scalar complex helpers

cdef inline bint _recip(double dr, double di, double* ir_, double* ii_) noexcept nogil:
    """Overflow-safe 1/(dr + i di); returns 0 for an exactly-zero input."""
    cdef double ad = fabs(dr), aid = fabs(di)
    cdef double d, r, t
    if ad == 0.0 and aid == 0.0:
        return 0
    if ad < 1e150 and aid < 1e150 and (ad > 1e-150 or aid > 1e-150):
        d = dr * dr + di * di
        r = 1.0 / d
        ir_[0] = dr * r
        ii_[0] = -di * r
    elif ad >= aid:
        t = di / dr
        d = dr + di * t
        ir_[0] = 1.0 / d
        ii_[0] = -t / d
    else:
        t = dr / di
        d = dr * t + di
        ir_[0] = t / d
        ii_[0] = -1.0 / d
    return 1


cdef inline void _cdiv(double nr, double ni, double dr, double di,
                       double* qr, double* qi) noexcept nogil:
    # Smith's algorithm, overflow-resistant
    cdef double t, d
    if fabs(dr) >= fabs(di):
        t = di / dr
        d = dr + di * t
        qr[0] = (nr + ni * t) / d
        qi[0] = (ni - nr * t) / d
    else:
        t = dr / di
        d = dr * t + di
        qr[0] = (nr * t + ni) / d
        qi[0] = (ni * t - nr) / d


cdef void _horner_pd(const double* cr, const double* ci, const double* ca,
                     Py_ssize_t m, double zr, double zi, double t,
                     double* pr, double* pi, double* dpr, double* dpi,
                     double* sabs) noexcept nogil:
    """P, P' and sum_j |c_j| t^j at one point, descending Horner."""
    cdef Py_ssize_t j
    cdef double ar = cr[m - 1], ai = ci[m - 1]
    cdef double br = 0.0, bi = 0.0
    cdef double s = ca[m - 1]
    cdef double tr
    for j in range(m - 2, -1, -1):
        tr = br * zr - bi * zi + ar
        bi = br * zi + bi * zr + ai
        br = tr
        tr = ar * zr - ai * zi + cr[j]
        ai = ar * zi + ai * zr + ci[j]
        ar = tr
        s = s * t + ca[j]
    pr[0] = ar
    pi[0] = ai
    dpr[0] = br
    dpi[0] = bi
    sabs[0] = s


cdef void _comp_horner(const double* cr, const double* ci, Py_ssize_t m,
                       double zr, double zi, double* outr, double* outi) noexcept nogil:
    """Compensated complex Horner: value of P plus its accumulated rounding error."""
    cdef Py_ssize_t j
    cdef double sr = cr[m - 1], si = ci[m - 1]
    cdef double er = 0.0, ei = 0.0
    cdef double p1, p2, p3, p4, e1, e2, e3, e4, f1, f2, g1, g2
    cdef double tr, ti, nr, ni, ner, nei
    for j in range(m - 2, -1, -1):
        # s*z with componentwise error
        _two_prod(sr, zr, &p1, &e1)
        _two_prod(si, zi, &p2, &e2)
        _two_prod(sr, zi, &p3, &e3)
        _two_prod(si, zr, &p4, &e4)
        _two_sum(p1, -p2, &tr, &f1)
        _two_sum(p3, p4, &ti, &f2)
        # + c_j with error
        _two_sum(tr, cr[j], &nr, &g1)
        _two_sum(ti, ci[j], &ni, &g2)
        # error recurrence in plain arithmetic
        ner = er * zr - ei * zi + ((e1 - e2 + f1) + g1)
        nei = er * zi + ei * zr + ((e3 + e4 + f2) + g2)
        sr = nr
        si = ni
        er = ner
        ei = nei
    outr[0] = sr + er
    outi[0] = si + ei


cdef void _abs_horner(const double* ca, Py_ssize_t m, double t, double* s) noexcept nogil:
    cdef Py_ssize_t j
    cdef double acc = ca[m - 1]
    for j in range(m - 2, -1, -1):
        acc = acc * t + ca[j]
    s[0] = acc


# ---------------------------------------------------------------------------
# array preparation shared by the entry points

cdef _components(object coeffs):
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cr = np.ascontiguousarray(c.real)
    ci = np.ascontiguousarray(c.imag)
    ca = np.hypot(cr, ci)
    return c, cr, ci, ca


def horner(object coeffs, object z):
    """Plain Horner evaluation of P and P' at each point of z."""
    c, cr_a, ci_a, ca_a = _components(coeffs)
    zarr = np.atleast_1d(np.array(z, dtype=np.complex128))
    p = np.empty(zarr.shape, dtype=np.complex128)
    dp = np.empty(zarr.shape, dtype=np.complex128)
    cdef double[::1] cr = cr_a, ci = ci_a, ca = ca_a
    cdef double complex[::1] zv = zarr.ravel()
    cdef double complex[::1] pv = p.ravel()
    cdef double complex[::1] dpv = dp.ravel()
    cdef Py_ssize_t i, m = cr.shape[0]
    cdef double pr, pi, dpr, dpi, sabs
    for i in range(zv.shape[0]):
        _horner_pd(&cr[0], &ci[0], &ca[0], m, zv[i].real, zv[i].imag,
                   0.0, &pr, &pi, &dpr, &dpi, &sabs)
        pv[i] = pr + 1j * pi
        dpv[i] = dpr + 1j * dpi
    return p, dp


def horner_compensated(object coeffs, object z):
    """Compensated Horner value of P at each point of z."""
    c, cr_a, ci_a, ca_a = _components(coeffs)
    zarr = np.atleast_1d(np.array(z, dtype=np.complex128))
    out = np.empty(zarr.shape, dtype=np.complex128)
    cdef double[::1] cr = cr_a, ci = ci_a
    cdef double complex[::1] zv = zarr.ravel()
    cdef double complex[::1] ov = out.ravel()
    cdef Py_ssize_t i, m = cr.shape[0]
    cdef double vr, vi
    for i in range(zv.shape[0]):
        _comp_horner(&cr[0], &ci[0], m, zv[i].real, zv[i].imag, &vr, &vi)
        ov[i] = vr + 1j * vi
    return out


def log_derivative(object coeffs, object z):
    """P'(z)/P(z), stable for any |z| (reversed form outside the unit disk)."""
    c, cr_a, ci_a, ca_a = _components(coeffs)
    rc = np.ascontiguousarray(c[::-1])
    rcr_a = np.ascontiguousarray(rc.real)
    rci_a = np.ascontiguousarray(rc.imag)
    zarr = np.atleast_1d(np.array(z, dtype=np.complex128))
    out = np.empty(zarr.shape, dtype=np.complex128)
    cdef double[::1] cr = cr_a, ci = ci_a, ca = ca_a
    cdef double[::1] rcr = rcr_a, rci = rci_a
    cdef double complex[::1] zv = zarr.ravel()
    cdef double complex[::1] ov = out.ravel()
    cdef Py_ssize_t i, m = cr.shape[0]
    cdef double n = m - 1.0
    cdef double zr, zi, t, ur, ui, pr, pi, dpr, dpi, sabs, vr, vi
    cdef double nr, ni, dr, di
    for i in range(zv.shape[0]):
        zr = zv[i].real
        zi = zv[i].imag
        t = hypot(zr, zi)
        if t <= 1.0:
            _horner_pd(&cr[0], &ci[0], &ca[0], m, zr, zi, 0.0,
                       &pr, &pi, &dpr, &dpi, &sabs)
            _cdiv(dpr, dpi, pr, pi, &vr, &vi)
        else:
            _cdiv(1.0, 0.0, zr, zi, &ur, &ui)
            _horner_pd(&rcr[0], &rci[0], &ca[0], m, ur, ui, 0.0,
                       &pr, &pi, &dpr, &dpi, &sabs)
            # P'/P = (n z Q(u) - Q'(u)) / (z^2 Q(u))
            nr = n * (zr * pr - zi * pi) - dpr
            ni = n * (zr * pi + zi * pr) - dpi
            dr = (zr * zr - zi * zi) * pr - 2.0 * zr * zi * pi
            di = (zr * zr - zi * zi) * pi + 2.0 * zr * zi * pr
            _cdiv(nr, ni, dr, di, &vr, &vi)
        ov[i] = vr + 1j * vi
    return out


def backward_residuals(object coeffs, object roots, int comp_min_degree=256):
    """|P(z)| / sum_j |c_j||z|^j per root (reversed form for |z| > 1)."""
    c, cr_a, ci_a, ca_a = _components(coeffs)
    rc = np.ascontiguousarray(c[::-1])
    rcr_a = np.ascontiguousarray(rc.real)
    rci_a = np.ascontiguousarray(rc.imag)
    rca_a = np.ascontiguousarray(ca_a[::-1])
    zarr = np.atleast_1d(np.array(roots, dtype=np.complex128))
    res = np.empty(zarr.shape, dtype=float)
    cdef double[::1] cr = cr_a, ci = ci_a, ca = ca_a
    cdef double[::1] rcr = rcr_a, rci = rci_a, rca = rca_a
    cdef double complex[::1] zv = zarr.ravel()
    cdef double[::1] rv = res.ravel()
    cdef Py_ssize_t i, m = cr.shape[0]
    cdef Py_ssize_t n = m - 1
    cdef bint comp = n > comp_min_degree
    cdef double zr, zi, t, ur, ui, pr, pi, dpr, dpi, sabs, num
    for i in range(zv.shape[0]):
        zr = zv[i].real
        zi = zv[i].imag
        t = hypot(zr, zi)
        if t <= 1.0:
            if comp:
                _comp_horner(&cr[0], &ci[0], m, zr, zi, &pr, &pi)
                _abs_horner(&ca[0], m, t, &sabs)
            else:
                _horner_pd(&cr[0], &ci[0], &ca[0], m, zr, zi, t,
                           &pr, &pi, &dpr, &dpi, &sabs)
        else:
            _cdiv(1.0, 0.0, zr, zi, &ur, &ui)
            t = hypot(ur, ui)
            if comp:
                _comp_horner(&rcr[0], &rci[0], m, ur, ui, &pr, &pi)
                _abs_horner(&rca[0], m, t, &sabs)
            else:
                _horner_pd(&rcr[0], &rci[0], &rca[0], m, ur, ui, t,
                           &pr, &pi, &dpr, &dpi, &sabs)
        num = hypot(pr, pi)
        if sabs > 0.0:
            rv[i] = num / sabs
        else:
            rv[i] = 0.0 if num == 0.0 else float("inf")
    return res


# ---------------------------------------------------------------------------
# the solver kernel

def solve_kernel(object coeffs, object z0, int max_sweeps=200,
                 double newton_tol=1e-14, int comp_min_degree=256):
    """Ehrlich-Aberth iteration from starting points z0.

    Returns (roots, residuals, sweeps_used, n_unconverged).
    """
    c, cr_a, ci_a, ca_a = _components(coeffs)
    rc = np.ascontiguousarray(c[::-1])
    rcr_a = np.ascontiguousarray(rc.real)
    rci_a = np.ascontiguousarray(rc.imag)
    rca_a = np.ascontiguousarray(ca_a[::-1])

    z = np.array(z0, dtype=np.complex128)
    cdef Py_ssize_t n = c.shape[0] - 1
    if z.shape[0] != n:
        raise ValueError("z0 must supply one starting point per root")

    zr_a = np.ascontiguousarray(z.real)
    zi_a = np.ascontiguousarray(z.imag)
    locked_a = np.zeros(n, dtype=np.uint8)
    exact_a = np.zeros(n, dtype=np.uint8)
    dup_a = np.zeros(n, dtype=np.uint8)
    act_a = np.empty(n, dtype=np.int64)
    lck_a = np.empty(n, dtype=np.int64)
    wr_a = np.empty(n, dtype=float)
    wi_a = np.empty(n, dtype=float)
    sr_a = np.empty(n, dtype=float)
    si_a = np.empty(n, dtype=float)

    cdef double[::1] cr = cr_a, ci = ci_a, ca = ca_a
    cdef double[::1] rcr = rcr_a, rci = rci_a, rca = rca_a
    cdef double[::1] zr = zr_a, zi = zi_a
    cdef double[::1] wr = wr_a, wi = wi_a, S_r = sr_a, S_i = si_a
    cdef unsigned char[::1] locked = locked_a, exact = exact_a, dup = dup_a
    cdef long long[::1] act = act_a, lck = lck_a

    cdef Py_ssize_t m = n + 1
    cdef Py_ssize_t sweep = 0, k, j, ia, ib, il, na, nl
    cdef double zkr, zki, t, ur, ui, pr, pi, dpr, dpi, sabs, bound
    cdef double numr, numi, denr, deni, qr, qi
    cdef double dr, di, d, r, ir_, ii_
    cdef double deltar, deltai, nzr, nzi, mag
    cdef bint comp = n > comp_min_degree
    cdef bint all_done
    cdef double dn = <double> n

    with nogil:
        for sweep in range(1, max_sweeps + 1):
            na = 0
            nl = 0
            for k in range(n):
                if locked[k]:
                    lck[nl] = k
                    nl += 1
                else:
                    act[na] = k
                    na += 1
            if na == 0:
                sweep -= 1
                break

            # Newton ratios w = P/P' from the snapshot
            for ia in range(na):
                k = act[ia]
                zkr = zr[k]
                zki = zi[k]
                t = hypot(zkr, zki)
                exact[k] = 0
                if t <= 1.0:
                    _horner_pd(&cr[0], &ci[0], &ca[0], m, zkr, zki, t,
                               &pr, &pi, &dpr, &dpi, &sabs)
                    bound = 2.0 * dn * EPS * sabs
                    if hypot(pr, pi) <= bound:
                        _comp_horner(&cr[0], &ci[0], m, zkr, zki, &pr, &pi)
                        bound = 8.0 * dn * EPS * bound
                    numr = pr
                    numi = pi
                    denr = dpr
                    deni = dpi
                else:
                    _cdiv(1.0, 0.0, zkr, zki, &ur, &ui)
                    _horner_pd(&rcr[0], &rci[0], &rca[0], m, ur, ui, hypot(ur, ui),
                               &qr, &qi, &dpr, &dpi, &sabs)
                    bound = 2.0 * dn * EPS * sabs
                    if hypot(qr, qi) <= bound:
                        _comp_horner(&rcr[0], &rci[0], m, ur, ui, &qr, &qi)
                        bound = 8.0 * dn * EPS * bound
                    # w = z Q / (n Q - u Q')
                    numr = zkr * qr - zki * qi
                    numi = zkr * qi + zki * qr
                    denr = dn * qr - (ur * dpr - ui * dpi)
                    deni = dn * qi - (ur * dpi + ui * dpr)
                    pr = qr
                    pi = qi
                # settled: value below the rounding noise of its own evaluation,
                # so the iterate is already a backward-stable root
                if hypot(pr, pi) <= bound:
                    exact[k] = 1
                    wr[k] = 0.0
                    wi[k] = 0.0
                elif denr == 0.0 and deni == 0.0:
                    # stationary point: deterministic nudge
                    mag = 1e-3 * (1.0 + t)
                    wr[k] = mag * 0.7648421872844885   # cos(0.7)
                    wi[k] = mag * 0.6442176872376911   # sin(0.7)
                else:
                    _cdiv(numr, numi, denr, deni, &wr[k], &wi[k])

            # pairwise sums S_k = sum_{j != k} 1/(z_k - z_j)
            for ia in range(na):
                k = act[ia]
                S_r[k] = 0.0
                S_i[k] = 0.0
                dup[k] = 0
            for ia in range(na):
                k = act[ia]
                zkr = zr[k]
                zki = zi[k]
                for ib in range(ia + 1, na):
                    j = act[ib]
                    dr = zkr - zr[j]
                    di = zki - zi[j]
                    if not _recip(dr, di, &ir_, &ii_):
                        dup[k] = 1
                        dup[j] = 1
                        continue
                    S_r[k] += ir_
                    S_i[k] += ii_
                    S_r[j] -= ir_
                    S_i[j] -= ii_
                for il in range(nl):
                    j = lck[il]
                    dr = zkr - zr[j]
                    di = zki - zi[j]
                    if not _recip(dr, di, &ir_, &ii_):
                        dup[k] = 1
                        continue
                    S_r[k] += ir_
                    S_i[k] += ii_

            # Aberth updates from the snapshot
            all_done = 1
            for ia in range(na):
                k = act[ia]
                if dup[k]:
                    # coincident points: nudge apart, keep iterating
                    mag = 1e-12 * (1.0 + hypot(zr[k], zi[k]))
                    zr[k] += mag * cos(0.3 + 0.1 * <double> k)
                    zi[k] += mag * sin(0.3 + 0.1 * <double> k)
                    all_done = 0
                    continue
                if exact[k]:
                    locked[k] = 1
                    continue
                denr = 1.0 - (wr[k] * S_r[k] - wi[k] * S_i[k])
                deni = -(wr[k] * S_i[k] + wi[k] * S_r[k])
                if denr == 0.0 and deni == 0.0:
                    deltar = wr[k]
                    deltai = wi[k]
                else:
                    _cdiv(wr[k], wi[k], denr, deni, &deltar, &deltai)
                nzr = zr[k] - deltar
                nzi = zi[k] - deltai
                zr[k] = nzr
                zi[k] = nzi
                if hypot(deltar, deltai) <= newton_tol * (1.0 + hypot(nzr, nzi)):
                    locked[k] = 1
                else:
                    all_done = 0
            if all_done:
                break

    roots = zr_a + 1j * zi_a
    residuals = backward_residuals(c, roots, comp_min_degree)
    n_unconverged = int(n - int(locked_a.sum()))
    return roots, residuals, int(sweep), n_unconverged
