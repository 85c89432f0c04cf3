"""Pure-Python row reduction kernels (fallback for the compiled ``_ckernels``).

Both kernels reduce ``rows`` in place to reduced row-echelon form, choosing
pivots among the first ``ncols`` columns only; any further columns are
carried along (this is how the transformation matrix is tracked).  The pivot
is the first nonzero entry at or below the current row.  Returns the list of
pivot columns.

The matmul kernels take the left factor by rows and the right factor by
columns and return the product as a list of rows.
"""

from fractions import Fraction
from math import gcd, lcm
from operator import mul

_ZERO = Fraction(0)


def rref_fraction(rows, ncols):
    # Each row is held as an integer vector over a positive common
    # denominator, reduced to lowest terms after every update.  The row
    # operations are exactly those of textbook Gauss-Jordan over Q, so the
    # result is the same; only Fraction overhead is avoided.
    nrows = len(rows)
    width = len(rows[0]) if nrows else 0
    if not nrows or not width:
        return []
    nums, dens = _to_integer_rows(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = r
        while piv < nrows and not nums[piv][c]:
            piv += 1
        if piv == nrows:
            continue
        if piv != r:
            nums[r], nums[piv] = nums[piv], nums[r]
            dens[r], dens[piv] = dens[piv], dens[r]
        prow = nums[r]
        a = prow[c]
        if a < 0:
            prow = nums[r] = [-x for x in prow]
            a = -a
        g = gcd(*prow)
        if g != 1:
            prow = nums[r] = [x // g for x in prow]
            a //= g
        # pivot row now represents prow / a with prow[c] == a
        dens[r] = a
        nz = [j for j in range(c, width) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = nums[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            m1, m2 = a // g, b // g
            if m1 != 1:
                row = [x * m1 for x in row]
            for j in nz:
                row[j] -= m2 * prow[j]
            den = dens[i] * m1
            g = gcd(den, *row)
            if g != 1:
                row = [x // g for x in row]
                den //= g
            nums[i] = row
            dens[i] = den
        pivots.append(c)
        r += 1
    for i in range(nrows):
        d = dens[i]
        rows[i] = [Fraction(x, d) if x else _ZERO for x in nums[i]]
    return pivots


def _to_integer_rows(rows):
    nums, dens = [], []
    for row in rows:
        d = lcm(*[x.denominator for x in row])
        nums.append([x.numerator * (d // x.denominator) for x in row])
        dens.append(d)
    return nums, dens


def rref_modp(rows, ncols, p):
    nrows = len(rows)
    width = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = r
        while piv < nrows and not rows[piv][c]:
            piv += 1
        if piv == nrows:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            for j in range(c, width):
                if prow[j]:
                    prow[j] = prow[j] * inv % p
        nz = [j for j in range(c, width) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            fac = row[c]
            if fac:
                for j in nz:
                    row[j] = (row[j] - fac * prow[j]) % p
        pivots.append(c)
        r += 1
    return pivots


def matmul_fraction(a, bt):
    """Product of rational matrices given as rows of ``a`` and columns ``bt``."""
    an, ad = _to_integer_rows(a)
    bn, bd = _to_integer_rows(bt)
    out = []
    for row, da in zip(an, ad):
        line = []
        for col, db in zip(bn, bd):
            s = sum(map(mul, row, col))
            line.append(Fraction(s, da * db) if s else _ZERO)
        out.append(line)
    return out


def matmul_modp(a, bt, p):
    return [[sum(map(mul, row, col)) % p for col in bt] for row in a]
