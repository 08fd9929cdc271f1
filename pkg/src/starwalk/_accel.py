"""Compiled inner loops for ball-walk stepping.

Bodies are encoded as flat arrays (a type code plus constraint matrices and
parameter vectors, optionally behind one composed affine pull-back) so that a
single cached njit kernel serves every body type.  The pure-numpy walk lives
in walk.py; both consume the same pre-drawn proposal offsets and therefore
produce identical chains.
"""

import numpy as np

from .backend import HAS_NUMBA, njit

# type codes (kept in sync with bodies.py)
TC_BALL = 0
TC_BOX = 1
TC_KOFM = 2
TC_KOFM_POLY = 3
TC_GLUED = 4
TC_CLIQUE = 5


@njit(cache=True, nogil=True)
def _member(y, tc, A, b, lo, hi, ipar, fpar, kern):
    n = y.shape[0]
    if lo.shape[0] == n:
        for j in range(n):
            if y[j] < lo[j] or y[j] > hi[j]:
                return False
    if tc == TC_BOX:
        return True
    if tc == TC_BALL:
        r = fpar[0]
        s = 0.0
        for j in range(n):
            d = y[j] - fpar[1 + j]
            s += d * d
        return s <= r * r
    if tc == TC_KOFM:
        k = ipar[0]
        m = ipar[1]
        cnt = 0
        for i in range(A.shape[0]):
            s = 0.0
            for j in range(n):
                s += A[i, j] * y[j]
            ok = s <= b[i]
            if i < m:
                if ok:
                    cnt += 1
            elif not ok:
                return False  # box_bound rows must all hold
        if kern:
            return cnt == m
        return cnt >= k
    if tc == TC_KOFM_POLY:
        if kern:
            for i in range(A.shape[0]):
                s = 0.0
                for j in range(n):
                    s += A[i, j] * y[j]
                if s > b[i]:
                    return False
            return True
        k = ipar[0]
        p = ipar[1]
        cnt = 0
        for ip in range(p):
            allok = True
            for i in range(ipar[2 + ip], ipar[3 + ip]):
                s = 0.0
                for j in range(n):
                    s += A[i, j] * y[j]
                if s > b[i]:
                    allok = False
                    break
            if allok:
                cnt += 1
                if cnt >= k:
                    return True
        return False
    if tc == TC_GLUED:
        l = fpar[0]
        s_ = fpar[1]
        sc = fpar[2]
        t = abs(y[0])
        if t > l:
            return False
        if kern:
            rad = sc * (1.0 - (l + t) / s_)
        else:
            rad = sc * (1.0 - (l - t) / s_)
        if rad < 0.0:
            return False
        rho2 = 0.0
        for j in range(1, n):
            rho2 += y[j] * y[j]
        return rho2 <= rad * rad
    if tc == TC_CLIQUE:
        th = ipar[0]
        ne = (ipar.shape[0] - 1) // 2
        cnt = 0
        for e in range(ne):
            if y[ipar[1 + 2 * e]] >= 1.0 and y[ipar[2 + 2 * e]] >= 1.0:
                cnt += 1
            elif kern:
                return False
        if kern:
            return True
        return cnt >= th
    return False


@njit(cache=True, nogil=True)
def walk_chain(x, offs, rcap, has_aff, Minv, shift, tc, A, b, lo, hi, ipar, fpar, kern):
    """Lazy ball walk over pre-drawn offsets; mutates x, returns accept count."""
    n = x.shape[0]
    acc = 0
    prop = np.empty(n)
    y = np.empty(n)
    for t in range(offs.shape[0]):
        for j in range(n):
            prop[j] = x[j] + offs[t, j]
        ok = True
        if rcap > 0.0:
            s = 0.0
            for j in range(n):
                s += prop[j] * prop[j]
            if s > rcap * rcap:
                ok = False
        if ok:
            if has_aff:
                for i in range(n):
                    s = 0.0
                    for j in range(n):
                        s += Minv[i, j] * (prop[j] - shift[j])
                    y[i] = s
                ok = _member(y, tc, A, b, lo, hi, ipar, fpar, kern)
            else:
                ok = _member(prop, tc, A, b, lo, hi, ipar, fpar, kern)
        if ok:
            for j in range(n):
                x[j] = prop[j]
            acc += 1
    return acc


@njit(cache=True, nogil=True)
def walk_chain_trace(x, offs, rcap, has_aff, Minv, shift, tc, A, b, lo, hi, ipar, fpar, kern):
    """walk_chain variant recording every visited point (steps+1 rows)."""
    n = x.shape[0]
    steps = offs.shape[0]
    out = np.empty((steps + 1, n))
    for j in range(n):
        out[0, j] = x[j]
    acc = 0
    prop = np.empty(n)
    y = np.empty(n)
    for t in range(steps):
        for j in range(n):
            prop[j] = x[j] + offs[t, j]
        ok = True
        if rcap > 0.0:
            s = 0.0
            for j in range(n):
                s += prop[j] * prop[j]
            if s > rcap * rcap:
                ok = False
        if ok:
            if has_aff:
                for i in range(n):
                    s = 0.0
                    for j in range(n):
                        s += Minv[i, j] * (prop[j] - shift[j])
                    y[i] = s
                ok = _member(y, tc, A, b, lo, hi, ipar, fpar, kern)
            else:
                ok = _member(prop, tc, A, b, lo, hi, ipar, fpar, kern)
        if ok:
            for j in range(n):
                x[j] = prop[j]
            acc += 1
        for j in range(n):
            out[t + 1, j] = x[j]
    return out, acc


def member_point(payload, x, kern):
    """Scalar membership through the compiled kernel (testing hook)."""
    has_aff, Minv, shift, tc, A, b, lo, hi, ipar, fpar = payload
    y = np.asarray(x, dtype=np.float64)
    if has_aff:
        y = Minv @ (y - shift)
    return bool(_member(y, tc, A, b, lo, hi, ipar, fpar, kern))
