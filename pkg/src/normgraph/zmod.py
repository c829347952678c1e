"""Canonical linear algebra over Z_N: Howell normal form, membership, kernels.

The Howell form is the unique canonical basis of a submodule of (Z_N)^n.
Its defining property: every span element whose leading zeros cover the
first j columns lies in the span of the basis rows with pivot beyond j.
That property is what makes greedy membership reduction and cross-section
extraction correct, and it is the reason subgroup equality can be tested
by comparing matrices entry-wise.
"""

from __future__ import annotations

from math import gcd


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) = s*a + t*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def unit_scale(a: int, mod: int) -> tuple[int, int]:
    """Return (g, u) with g = gcd(a, mod) and u a unit of Z_mod, u*a = g mod mod."""
    a %= mod
    g = gcd(a, mod)
    ap = a // g
    m2 = mod // g
    u = pow(ap, -1, m2) if m2 > 1 else 1
    while gcd(u, mod) != 1:
        u += m2
    return g, u % mod


def _lead(row: tuple[int, ...] | list[int]) -> int:
    for i, v in enumerate(row):
        if v:
            return i
    return len(row)


def howell_form(rows, mod: int, ncols: int) -> list[list[int]]:
    """Howell normal form of the Z_mod-span of the given rows.

    Returns rows with strictly increasing pivot columns; each pivot divides
    mod; entries above a pivot are reduced modulo it.  The result is a
    canonical representative of the span: equal spans give equal matrices.
    """
    if mod == 1 or ncols == 0:
        return []
    work = []
    for r in rows:
        rr = [v % mod for v in r]
        if any(rr):
            work.append(rr)
    result: list[list[int]] = []
    for col in range(ncols):
        cur = [r for r in work if _lead(r) == col]
        work = [r for r in work if _lead(r) > col and _lead(r) < ncols]
        if not cur:
            continue
        piv = cur[0]
        for other in cur[1:]:
            a, b = piv[col], other[col]
            g, s, t = xgcd(a, b)
            new_piv = [(s * x + t * y) % mod for x, y in zip(piv, other)]
            # (-b/g, a/g) combination kills the pivot column
            resid = [((-(b // g)) * x + (a // g) * y) % mod for x, y in zip(piv, other)]
            piv = new_piv
            if any(resid):
                work.append(resid)
        g, u = unit_scale(piv[col], mod)
        piv = [(u * x) % mod for x in piv]
        ann = [((mod // g) * x) % mod for x in piv]
        if any(ann):
            work.append(ann)
        result.append(piv)
    # reduce entries above each pivot
    for i, row in enumerate(result):
        j = _lead(row)
        d = row[j]
        for k in range(i):
            q = result[k][j] // d
            if q:
                result[k] = [(x - q * y) % mod for x, y in zip(result[k], row)]
    return result


def reduce_vector(v, rows, mod: int) -> list[int]:
    """Greedy remainder of v against a Howell basis; zero iff v is in the span."""
    v = [x % mod for x in v]
    for row in rows:
        j = _lead(row)
        d = row[j]
        if v[j] == 0:
            continue
        if v[j] % d:
            break  # not reducible at this pivot; v cannot be in the span
        q = v[j] // d
        v = [(x - q * y) % mod for x, y in zip(v, row)]
    return v


def member(v, rows, mod: int) -> bool:
    if mod == 1:
        return True
    return not any(reduce_vector(v, rows, mod))


def span_order(rows, mod: int) -> int:
    """Order of the span of a Howell basis: product of mod / pivot."""
    order = 1
    for row in rows:
        order *= mod // row[_lead(row)]
    return order


def span_elements(rows, mod: int, ncols: int):
    """Iterate every span element once via the chain coset decomposition.

    Each element has a unique expression sum c_i * row_i with
    c_i in [0, mod/pivot_i), by the triangular pivot structure.
    """
    if mod == 1 or ncols == 0:
        yield (0,) * ncols
        return
    counts = [mod // row[_lead(row)] for row in rows]

    def rec(i: int, acc: tuple[int, ...]):
        if i == len(rows):
            yield acc
            return
        row = rows[i]
        step = acc
        for _ in range(counts[i]):
            yield from rec(i + 1, step)
            step = tuple((x + y) % mod for x, y in zip(step, row))

    yield from rec(0, (0,) * ncols)


def kernel(columns_of, nrows: int, ncols: int, mod: int) -> list[list[int]]:
    """Generators of {z in Z_mod^ncols : sum_i z_i * column_i = 0 in Z_mod^nrows}.

    columns_of(i) must return the i-th column as a length-nrows sequence.
    Built from the Howell form of [A^T | I]: rows with a zero left block
    carry kernel generators in their right block.
    """
    if mod == 1:
        return []
    aug = []
    for i in range(ncols):
        col = list(columns_of(i))
        e = [0] * ncols
        e[i] = 1
        aug.append(col + e)
    hf = howell_form(aug, mod, nrows + ncols)
    gens = []
    for row in hf:
        if _lead(row) >= nrows:
            gens.append(row[nrows:])
    return gens


def solve_with_certificate(v, rows, mod: int) -> list[int] | None:
    """Combination coefficients q with sum q_i * rows_i = v, or None.

    rows must be a Howell basis.  Used to lift elements through maps whose
    graph is held in Howell form.
    """
    v = [x % mod for x in v]
    coeffs = [0] * len(rows)
    for i, row in enumerate(rows):
        j = _lead(row)
        d = row[j]
        if v[j] == 0:
            continue
        if v[j] % d:
            return None
        q = v[j] // d
        coeffs[i] = q
        v = [(x - q * y) % mod for x, y in zip(v, row)]
    if any(v):
        return None
    return coeffs
