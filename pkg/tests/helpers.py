"""Shared oracles and builders for the test suite (seeded, deterministic)."""

import random

from branegauge.branes import BraneComplex, ChainMap
from branegauge.dg import Connection, FreeModule
from branegauge.exact import ExteriorForm, Matrix, Ring, Scalar, TruncPoly
from branegauge.randgen import (
    rand_connection,
    rand_form,
    rand_form_matrix,
    rand_poly,
    rand_poly_matrix,
    rand_scalar,
)


def seeded(seed):
    return random.Random(seed)


# ---------------------------------------------------------------------------
# brute-force oracle: expand the curvature with formal parameters adjoined
# to the ring, then collect parameter monomials from the full pairing
# ---------------------------------------------------------------------------


def brute_force_polynomial(expansion, mode):
    base = expansion.base
    ring = base.module.ring
    n, m = ring.n_vars, expansion.m
    big = Ring(n + m, 2 * ring.trunc_degree + 4)

    def lift_poly(p, lam_exp=None):
        terms = {}
        extra = tuple(lam_exp or (0,) * m)
        for exp, c in p.terms.items():
            terms[tuple(exp) + extra] = c
        return TruncPoly(big, terms)

    def lift_form(e, lam_exp=None):
        comps = {}
        for idx, p in e.components.items():
            comps[idx] = lift_poly(p, lam_exp)
        return ExteriorForm(big, e.degree, comps, form_vars=n)

    rank = base.module.rank
    A_ext = Matrix.build(
        rank, rank, lambda r, c: lift_form(base.A.entries[r][c])
    )
    for i, E in enumerate(expansion.directions):
        lam = [0] * m
        lam[i] = 1
        A_ext = A_ext + Matrix.build(
            rank, rank, lambda r, c: lift_form(E.matrix.entries[r][c], lam)
        )
    K_ext = A_ext.map(lambda e: e.exterior_d()) + (A_ext @ A_ext)

    out = {}
    for i in range(rank):
        for j in range(rank):
            a_entry = K_ext.entries[i][j]
            b_entry = K_ext.entries[i][j] if mode == "hermitian" else K_ext.entries[j][i]
            for idx, p in a_entry.components.items():
                q = b_entry.components.get(idx)
                if q is None:
                    continue
                for ea, ca in p.terms.items():
                    xa, la = ea[:n], ea[n:]
                    for eb, cb in q.terms.items():
                        xb, lb = eb[:n], eb[n:]
                        if xa != xb:
                            continue
                        if mode == "bilinear":
                            key = tuple(x + y for x, y in zip(la, lb))
                            out[key] = out.get(key, Scalar(0)) + ca * cb
                        else:
                            key = (la, lb)
                            out[key] = out.get(key, Scalar(0)) + ca.conjugate() * cb
    return {k: v for k, v in out.items() if not v.is_zero()}


# ---------------------------------------------------------------------------
# complex builders
# ---------------------------------------------------------------------------


def direct_sum(F1: BraneComplex, F2: BraneComplex) -> BraneComplex:
    assert F1.degrees == F2.degrees
    ring = F1.ring
    terms = {i: F1.rank(i) + F2.rank(i) for i in F1.degrees}
    diffs = {}
    for i in F1.degrees:
        d1, d2 = F1.differential(i), F2.differential(i)
        if d1 is None and d2 is None:
            continue
        r1o, r1i = F1.rank(i + 1), F1.rank(i)
        r2o, r2i = F2.rank(i + 1), F2.rank(i)
        if r1o + r2o == 0:
            continue
        entries = []
        for r in range(r1o + r2o):
            row = []
            for c in range(r1i + r2i):
                if r < r1o and c < r1i:
                    row.append(d1.entries[r][c])
                elif r >= r1o and c >= r1i:
                    row.append(d2.entries[r - r1o][c - r1i])
                else:
                    row.append(TruncPoly.zero(ring))
            entries.append(row)
        diffs[i] = Matrix(entries)
    return BraneComplex(ring, terms, diffs)


def inclusion_chain_map(F1: BraneComplex, FS: BraneComplex) -> ChainMap:
    ring = F1.ring
    comps = {}
    for i in F1.degrees:
        entries = []
        for r in range(FS.rank(i)):
            row = []
            for c in range(F1.rank(i)):
                row.append(TruncPoly.constant(ring, 1 if r == c else 0))
            entries.append(row)
        comps[i] = Matrix(entries)
    return ChainMap(F1, FS, comps)


def block_connection(FS: BraneComplex, left: dict, right: dict, left_ranks: dict) -> dict:
    """Block-diagonal family on a direct sum, given the per-side families."""
    ring = FS.ring
    out = {}
    for i in FS.degrees:
        r1 = left_ranks[i]
        total = FS.rank(i)
        entries = []
        for r in range(total):
            row = []
            for c in range(total):
                if r < r1 and c < r1:
                    row.append(left[i].A.entries[r][c])
                elif r >= r1 and c >= r1:
                    row.append(right[i].A.entries[r - r1][c - r1])
                else:
                    row.append(ExteriorForm.zero(ring, 1))
            entries.append(row)
        out[i] = Connection(FS.term(i), Matrix(entries))
    return out


def flat_nonzero_connection(rng, module) -> Connection:
    """K = 0 with A != 0: a gradient 1-form times a constant matrix."""
    ring = module.ring
    g = rand_poly(rng, ring, min(2, ring.trunc_degree), density=0.9)
    C = Matrix.build(
        module.rank,
        module.rank,
        lambda r, c: TruncPoly.constant(ring, rand_scalar(rng)),
    )
    dg = ExteriorForm.from_poly(g).exterior_d()
    A = Matrix.build(
        module.rank, module.rank, lambda r, c: dg.scale(C.entries[r][c])
    )
    conn = Connection(module, A)
    assert conn.curvature().is_zero()
    return conn
