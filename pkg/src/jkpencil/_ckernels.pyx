# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled row reduction kernels; same contract as ``_pykernels``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

from fractions import Fraction
from math import gcd, lcm
from operator import mul

_ZERO = Fraction(0)


def rref_fraction(list rows, Py_ssize_t ncols):
    # integer rows over a common denominator, as in the Python kernel
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t width = len(rows[0]) if nrows else 0
    cdef Py_ssize_t r = 0, c, i, j, k, piv, nnz
    cdef list nums, dens, prow, row, nz
    cdef object a, b, g, m1, m2, den, x
    pivots = []
    if nrows == 0 or width == 0:
        return pivots
    nums = []
    dens = []
    for i in range(nrows):
        row = <list>rows[i]
        den = lcm(*[x.denominator for x in row])
        nums.append([x.numerator * (den // x.denominator) for x in row])
        dens.append(den)
    for c in range(ncols):
        if r == nrows:
            break
        piv = r
        while piv < nrows and not (<list>nums[piv])[c]:
            piv += 1
        if piv == nrows:
            continue
        if piv != r:
            nums[r], nums[piv] = nums[piv], nums[r]
            dens[r], dens[piv] = dens[piv], dens[r]
        prow = <list>nums[r]
        a = prow[c]
        if a < 0:
            prow = [-x for x in prow]
            a = -a
        g = gcd(*prow)
        if g != 1:
            prow = [x // g for x in prow]
            a = a // g
        nums[r] = prow
        dens[r] = a
        nz = [j for j in range(c, width) if prow[j]]
        nnz = len(nz)
        for i in range(nrows):
            if i == r:
                continue
            row = <list>nums[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            m1 = a // g
            m2 = b // g
            if m1 != 1:
                row = [x * m1 for x in row]
            for k in range(nnz):
                j = <Py_ssize_t>nz[k]
                row[j] = row[j] - m2 * prow[j]
            den = dens[i] * m1
            g = gcd(den, *row)
            if g != 1:
                row = [x // g for x in row]
                den = den // g
            nums[i] = row
            dens[i] = den
        pivots.append(c)
        r += 1
    for i in range(nrows):
        den = dens[i]
        rows[i] = [Fraction(x, den) if x else _ZERO for x in <list>nums[i]]
    return pivots


cdef inline int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t t = 0, newt = 1, rr = p, newr = a, q, tmp
    while newr:
        q = rr // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = rr - q * newr
        rr = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(list rows, Py_ssize_t ncols, p):
    if p >= (1 << 31):
        from ._pykernels import rref_modp as slow
        return slow(rows, ncols, p)
    cdef int64_t P = p
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t width = len(rows[0]) if nrows else 0
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, fac, v
    cdef int64_t *m
    cdef int64_t *prow
    cdef int64_t *row
    pivots = []
    if nrows == 0 or width == 0:
        return pivots
    m = <int64_t *> malloc(nrows * width * sizeof(int64_t))
    if m == NULL:
        raise MemoryError()
    try:
        for i in range(nrows):
            src = <list>rows[i]
            for j in range(width):
                m[i * width + j] = <int64_t>(src[j] % p)
        for c in range(ncols):
            if r == nrows:
                break
            piv = r
            while piv < nrows and m[piv * width + c] == 0:
                piv += 1
            if piv == nrows:
                continue
            if piv != r:
                for j in range(width):
                    v = m[r * width + j]
                    m[r * width + j] = m[piv * width + j]
                    m[piv * width + j] = v
            prow = m + r * width
            inv = _inv_mod(prow[c], P)
            if inv != 1:
                for j in range(c, width):
                    prow[j] = prow[j] * inv % P
            for i in range(nrows):
                if i == r:
                    continue
                row = m + i * width
                fac = row[c]
                if fac:
                    for j in range(c, width):
                        if prow[j]:
                            v = (row[j] - fac * prow[j]) % P
                            row[j] = v + P if v < 0 else v
            pivots.append(c)
            r += 1
        for i in range(nrows):
            rows[i] = [int(m[i * width + j]) for j in range(width)]
    finally:
        free(m)
    return pivots


def _integer_rows(list rows):
    cdef list nums = [], dens = [], row
    for row in rows:
        den = lcm(*[x.denominator for x in row])
        nums.append([x.numerator * (den // x.denominator) for x in row])
        dens.append(den)
    return nums, dens


def matmul_fraction(list a, list bt):
    cdef list an, ad, bn, bd, out, line, row
    cdef Py_ssize_t i, j, nb
    an, ad = _integer_rows(a)
    bn, bd = _integer_rows(bt)
    nb = len(bn)
    out = []
    for i in range(len(an)):
        row = <list>an[i]
        da = ad[i]
        line = []
        for j in range(nb):
            s = sum(map(mul, row, <list>bn[j]))
            line.append(Fraction(s, da * bd[j]) if s else _ZERO)
        out.append(line)
    return out


def matmul_modp(list a, list bt, p):
    if p >= (1 << 31):
        from ._pykernels import matmul_modp as slow
        return slow(a, bt, p)
    cdef int64_t P = p
    cdef Py_ssize_t n = len(a), m = len(bt), k = len(a[0]) if a else 0
    cdef Py_ssize_t i, j, t
    cdef int64_t acc
    cdef int64_t *A
    cdef int64_t *B
    cdef list out = []
    if n == 0 or m == 0 or k == 0:
        return [[0] * m for _ in range(n)]
    A = <int64_t *> malloc(n * k * sizeof(int64_t))
    B = <int64_t *> malloc(m * k * sizeof(int64_t))
    if A == NULL or B == NULL:
        free(A)
        free(B)
        raise MemoryError()
    try:
        for i in range(n):
            for t in range(k):
                A[i * k + t] = <int64_t>(a[i][t])
        for j in range(m):
            for t in range(k):
                B[j * k + t] = <int64_t>(bt[j][t])
        for i in range(n):
            line = [0] * m
            for j in range(m):
                acc = 0
                for t in range(k):
                    acc = (acc + A[i * k + t] * B[j * k + t]) % P
                line[j] = acc
            out.append(line)
    finally:
        free(A)
        free(B)
    return out
