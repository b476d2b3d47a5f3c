"""Deterministic random instance generators.

Used by the test suite and by the command-line fuzz mode.  Everything is
driven by a caller-supplied `random.Random`, so identical seeds give
identical instances.
"""

from __future__ import annotations

from fractions import Fraction

from .branes import BraneComplex, _Indexer, _coords_of_form_matrices, fzero
from .dg import Connection, FreeModule
from .errors import NotCompatible
from .exact import (
    ExteriorForm,
    Matrix,
    Ring,
    Scalar,
    TruncPoly,
    kernel_basis,
    kernel_sparse,
    monomials_upto,
)


def rand_scalar(rng, lo=-3, hi=3, with_imag=True, denom=2) -> Scalar:
    re = Fraction(rng.randint(lo, hi), rng.randint(1, denom))
    im = Fraction(rng.randint(lo, hi), rng.randint(1, denom)) if with_imag else 0
    return Scalar(re, im)


def rand_poly(rng, ring: Ring, max_degree: int, density=0.5, **kw) -> TruncPoly:
    terms = {}
    for exp in monomials_upto(ring.n_vars, max_degree):
        if rng.random() < density:
            terms[exp] = rand_scalar(rng, **kw)
    return TruncPoly(ring, terms)


def rand_form(rng, ring: Ring, degree: int, max_poly_degree: int,
              density=0.5, **kw) -> ExteriorForm:
    from .exact.form import basis_index_sets

    comps = {}
    for idx in basis_index_sets(ring.n_vars, degree):
        p = rand_poly(rng, ring, max_poly_degree, density, **kw)
        if not p.is_zero():
            comps[idx] = p
    return ExteriorForm(ring, degree, comps)


def rand_poly_matrix(rng, ring: Ring, rows: int, cols: int, max_degree=1,
                     density=0.7, **kw) -> Matrix:
    return Matrix.build(
        rows, cols, lambda r, c: rand_poly(rng, ring, max_degree, density, **kw)
    )


def rand_form_matrix(rng, ring: Ring, rows: int, cols: int, degree=1,
                     max_poly_degree=1, density=0.5, **kw) -> Matrix:
    return Matrix.build(
        rows,
        cols,
        lambda r, c: rand_form(rng, ring, degree, max_poly_degree, density, **kw),
    )


def rand_connection(rng, module: FreeModule, max_poly_degree=1, density=0.5,
                    **kw) -> Connection:
    return Connection(
        module,
        rand_form_matrix(
            rng, module.ring, module.rank, module.rank, 1, max_poly_degree,
            density, **kw
        ),
    )


def rand_constant_matrix(rng, ring: Ring, rows: int, cols: int, density=0.8,
                         **kw) -> Matrix:
    def entry(r, c):
        if rng.random() < density:
            return TruncPoly.constant(ring, rand_scalar(rng, **kw))
        return TruncPoly.zero(ring)

    return Matrix.build(rows, cols, entry)


def rand_constant_complex(rng, ring: Ring, ranks: list[int], density=0.7,
                          **kw) -> BraneComplex:
    """A bounded complex with constant differentials squaring to zero.

    The first differential is free; each later one is sampled from the
    exact solution space of the composition constraint."""
    terms = {i: FreeModule(ring, r) for i, r in enumerate(ranks)}
    diffs: dict[int, Matrix] = {}
    for i in range(len(ranks) - 1):
        rows_out, cols_in = ranks[i + 1], ranks[i]
        prev = diffs.get(i - 1)
        if prev is None:
            M = rand_constant_matrix(rng, ring, rows_out, cols_in, density, **kw)
        else:
            prev_scalars = prev.map(lambda p: p.constant_term())
            left_kernel = kernel_basis(prev_scalars.transpose())
            rows = []
            for _ in range(rows_out):
                acc = [Scalar(0)] * cols_in
                for vec in left_kernel:
                    w = rand_scalar(rng, **kw) if rng.random() < density else Scalar(0)
                    if not w.is_zero():
                        acc = [a + v * w for a, v in zip(acc, vec)]
                rows.append(acc)
            M = Matrix.build(
                rows_out,
                cols_in,
                lambda r, c: TruncPoly.constant(ring, rows[r][c]),
            )
        diffs[i] = M
    return BraneComplex(ring, terms, diffs)


def rand_compatible_family(rng, F: BraneComplex, max_poly_degree=1,
                           combos=3, **kw) -> dict:
    """Sample a family of connections intertwining the differentials by
    solving the exact intertwining system and drawing from its kernel."""
    ring = F.ring
    monos = monomials_upto(ring.n_vars, max_poly_degree)
    slots = []
    for i in F.degrees:
        r = F.rank(i)
        for rr in range(r):
            for cc in range(r):
                for k in range(ring.n_vars):
                    for exp in monos:
                        slots.append((i, rr, cc, k, exp))

    def family_from_coords(coords):
        A = {i: fzero(ring, F.rank(i), F.rank(i)) for i in F.degrees}
        for j, val in coords.items() if isinstance(coords, dict) else enumerate(coords):
            if isinstance(val, Scalar) and val.is_zero():
                continue
            i, rr, cc, k, exp = slots[j]
            A[i].entries[rr][cc] = A[i].entries[rr][cc] + ExteriorForm(
                ring, 1, {(k,): TruncPoly(ring, {exp: val})}
            )
        return A

    def defects(A):
        from .branes import d_of_matrix

        out = {}
        for i in sorted(F.differentials):
            d = F.differentials[i]
            out[i] = (d @ A[i]) - (A[i + 1] @ d) - d_of_matrix(d)
        return out

    indexer = _Indexer()
    base = _coords_of_form_matrices(defects(family_from_coords({})), indexer, "eq")
    if any(not v.is_zero() for v in base.values()):
        # inhomogeneous (non-constant differentials): solve for a particular
        # family first; not needed for the constant case
        raise NotCompatible("non-constant differentials need dedicated handling")
    rows: dict[int, dict] = {}
    for j in range(len(slots)):
        coords = _coords_of_form_matrices(
            defects(family_from_coords({j: Scalar(1)})), indexer, "eq"
        )
        for eq, v in coords.items():
            rows.setdefault(eq, {})[j] = v
    row_list = [rows.get(e, {}) for e in range(len(indexer))]
    kernel = kernel_sparse(row_list, len(slots))
    coords = [Scalar(0)] * len(slots)
    for _ in range(combos):
        if not kernel:
            break
        vec = kernel[rng.randrange(len(kernel))]
        w = rand_scalar(rng, **kw)
        coords = [a + v * w for a, v in zip(coords, vec)]
    A = family_from_coords(coords)
    return {i: Connection(F.term(i), A[i]) for i in F.degrees}
