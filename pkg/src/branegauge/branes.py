"""Bounded complexes of free modules and their gauge theory.

Morphisms in the derived-category model are chain maps modulo chain
homotopy.  Gauge fields are chain maps into the jet complex splitting the
projection up to an explicit homotopy witness; solving for them is exact
linear algebra over the Gaussian rationals once polynomial entries are
capped at a morphism degree (the desk-scale surrogate of compactness).
"""

from __future__ import annotations

from dataclasses import dataclass

from .dg import (
    Connection,
    FormVector,
    FreeModule,
    HomElement,
    JetElement,
    jet_action,
)
from .errors import (
    DegreeOverflow,
    NotCompatible,
    RankJump,
    SizeMismatch,
)
from .exact import (
    ExteriorForm,
    Matrix,
    Ring,
    Scalar,
    SpanTracker,
    TruncPoly,
    kernel_basis,
    kernel_sparse,
    matrix_rank,
    monomials_upto,
    solve_linear,
    solve_sparse,
)


# ---------------------------------------------------------------------------
# small matrix helpers
# ---------------------------------------------------------------------------


def pzero(ring: Ring, rows: int, cols: int) -> Matrix:
    return Matrix.build(rows, cols, lambda r, c: TruncPoly.zero(ring))


def pidentity(ring: Ring, n: int) -> Matrix:
    return Matrix.identity(n, TruncPoly.constant(ring, 1), TruncPoly.zero(ring))


def fzero(ring: Ring, rows: int, cols: int, degree: int = 1) -> Matrix:
    return Matrix.build(rows, cols, lambda r, c: ExteriorForm.zero(ring, degree))


def d_of_matrix(M: Matrix) -> Matrix:
    """Entrywise exterior derivative of a polynomial matrix (1-form matrix)."""
    return M.map(lambda p: ExteriorForm.from_poly(p).exterior_d())


def block_matrix(blocks, row_sizes, col_sizes, zero_fn) -> Matrix:
    entries = []
    for bi, rs in enumerate(row_sizes):
        for r in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                for c in range(cs):
                    row.append(zero_fn() if blk is None else blk.entries[r][c])
            entries.append(row)
    return Matrix(entries)


# ---------------------------------------------------------------------------
# complexes and chain maps
# ---------------------------------------------------------------------------


class BraneComplex:
    """A bounded complex of free modules with polynomial differentials."""

    def __init__(self, ring: Ring, terms: dict, differentials: dict, validate=True):
        self.ring = ring
        self.terms = {}
        for i, t in terms.items():
            if isinstance(t, int):
                t = FreeModule(ring, t)
            if t.ring != ring:
                raise SizeMismatch("all terms must share the ambient ring")
            self.terms[int(i)] = t
        self.differentials = {}
        for i, M in differentials.items():
            i = int(i)
            src, dst = self.terms.get(i), self.terms.get(i + 1)
            if src is None or dst is None:
                raise SizeMismatch(f"differential at {i} has a missing endpoint")
            if M.shape() != (dst.rank, src.rank):
                raise SizeMismatch(
                    f"differential at {i} has shape {M.shape()}, "
                    f"expected {(dst.rank, src.rank)}"
                )
            self.differentials[i] = M
        if validate:
            bad = self.square_defects()
            if bad:
                i, entry, value = bad[0]
                raise SizeMismatch(
                    f"differential does not square to zero at degree {i}: "
                    f"entry {entry} = {value}"
                )

    def square_defects(self) -> list:
        """Nonzero entries of consecutive differential composites."""
        out = []
        for i in self.differentials:
            nxt = self.differentials.get(i + 1)
            if nxt is None:
                continue
            comp = nxt @ self.differentials[i]
            for r, row in enumerate(comp.entries):
                for c, v in enumerate(row):
                    if not v.is_zero():
                        out.append((i, (r, c), v))
        return out

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def term(self, i: int) -> FreeModule | None:
        return self.terms.get(i)

    def rank(self, i: int) -> int:
        t = self.terms.get(i)
        return t.rank if t else 0

    def differential(self, i: int) -> Matrix | None:
        """The matrix from term i to term i+1, zero-filled when both exist."""
        if i in self.differentials:
            return self.differentials[i]
        if self.rank(i) and self.rank(i + 1):
            return pzero(self.ring, self.rank(i + 1), self.rank(i))
        return None

    def max_differential_degree(self) -> int:
        dmax = 0
        for M in self.differentials.values():
            for row in M.entries:
                for p in row:
                    dmax = max(dmax, p.degree())
        return dmax

    def default_morphism_degree(self, kind: str = "hom") -> int:
        """Largest polynomial degree for morphism unknowns such that every
        product appearing in the defining identities stays exact."""
        dmax = self.max_differential_degree()
        budget = self.ring.trunc_degree - dmax
        if kind == "gauge" and dmax >= 1:
            budget -= dmax - 1
        if budget < 0:
            raise DegreeOverflow(
                "truncation degree too small for morphism unknowns over this complex"
            )
        return budget

    def __repr__(self):
        parts = ", ".join(f"{i}:{self.rank(i)}" for i in self.degrees)
        return f"BraneComplex({parts})"


class ChainMap:
    """Degree-0 chain map between brane complexes (polynomial components)."""

    def __init__(self, source: BraneComplex, target: BraneComplex, components: dict,
                 validate=True):
        self.source = source
        self.target = target
        self.components = {}
        for i, M in components.items():
            i = int(i)
            if source.rank(i) == 0 or target.rank(i) == 0:
                if not M.is_zero():
                    raise SizeMismatch(f"component at missing degree {i}")
                continue
            if M.shape() != (target.rank(i), source.rank(i)):
                raise SizeMismatch(f"chain map component at {i} has wrong shape")
            self.components[i] = M
        if validate and not self.commutes():
            raise NotCompatible("chain map does not commute with differentials")

    def component(self, i: int) -> Matrix | None:
        if i in self.components:
            return self.components[i]
        if self.source.rank(i) and self.target.rank(i):
            return pzero(self.source.ring, self.target.rank(i), self.source.rank(i))
        return None

    def commutes(self) -> bool:
        degs = set(self.source.degrees) | set(self.target.degrees)
        for i in sorted(degs):
            lhs = None
            dt = self.target.differential(i)
            fi = self.component(i)
            if dt is not None and fi is not None:
                lhs = dt @ fi
            rhs = None
            ds = self.source.differential(i)
            fn = self.component(i + 1)
            if ds is not None and fn is not None:
                rhs = fn @ ds
            if lhs is None and rhs is None:
                continue
            if lhs is None:
                if not rhs.is_zero():
                    return False
            elif rhs is None:
                if not lhs.is_zero():
                    return False
            elif not (lhs - rhs).is_zero():
                return False
        return True


def shift(F: BraneComplex, l: int) -> BraneComplex:
    """Shift l to the left: term i becomes the old term i+l, with the
    differential scaled by (-1)^l."""
    sign = 1 if l % 2 == 0 else -1
    terms = {i - l: t for i, t in F.terms.items()}
    diffs = {}
    for i, M in F.differentials.items():
        diffs[i - l] = M if sign == 1 else M.map(lambda p: -p)
    return BraneComplex(F.ring, terms, diffs, validate=False)


@dataclass
class MappingCone:
    complex: BraneComplex
    top_ranks: dict  # degree -> rank contributed by the shifted source
    bottom_ranks: dict  # degree -> rank contributed by the target


def cone(f: ChainMap) -> MappingCone:
    """Mapping cone with differential (a, b) |-> (da, (-1)^deg(a) f(a) + db)."""
    A, B = f.source, f.target
    ring = A.ring
    degs = sorted(set(d - 1 for d in A.degrees) | set(B.degrees))
    terms = {}
    top, bottom = {}, {}
    for i in degs:
        ra, rb = A.rank(i + 1), B.rank(i)
        top[i], bottom[i] = ra, rb
        if ra + rb:
            terms[i] = FreeModule(ring, ra + rb)
    diffs = {}
    for i in degs:
        if i not in terms or (i + 1) not in terms:
            continue
        ra, rb = top[i], bottom[i]
        ra2, rb2 = top[i + 1], bottom[i + 1]
        dA = A.differential(i + 1)
        dB = B.differential(i)
        fi = f.component(i + 1)
        if fi is not None:
            sign = 1 if (i + 1) % 2 == 0 else -1
            fi = fi if sign == 1 else fi.map(lambda p: -p)
        blocks = [[dA, None], [fi, dB]]
        M = block_matrix(
            blocks,
            [ra2, rb2],
            [ra, rb],
            lambda: TruncPoly.zero(ring),
        )
        diffs[i] = M
    return MappingCone(BraneComplex(ring, terms, diffs), top, bottom)


# ---------------------------------------------------------------------------
# jet complex
# ---------------------------------------------------------------------------


class JetComplex:
    """The jet complex of a brane: termwise jet pairs with the differential
    acting diagonally on both parts."""

    def __init__(self, F: BraneComplex):
        self.base = F

    def delta(self, i: int, j: JetElement) -> JetElement | None:
        d = self.base.differential(i)
        if d is None:
            return None
        target = self.base.term(i + 1)
        sigma = FormVector.from_polys(
            target, d.apply(j.sigma.polys())
        )
        beta_entries = []
        for r in range(d.rows):
            acc = j.beta.entries[0].scale(d.entries[r][0])
            for k in range(1, d.cols):
                acc = acc + j.beta.entries[k].scale(d.entries[r][k])
            beta_entries.append(acc)
        return JetElement(sigma, FormVector(target, 1, beta_entries))

    def action(self, f: TruncPoly, i: int, j: JetElement) -> JetElement:
        return jet_action(f, j)

    @staticmethod
    def projection(j: JetElement) -> FormVector:
        return j.sigma

    @staticmethod
    def inclusion(beta: FormVector) -> JetElement:
        return JetElement(FormVector.zero(beta.module, 0), beta)


def jet_complex(F: BraneComplex) -> JetComplex:
    return JetComplex(F)


# ---------------------------------------------------------------------------
# Hom-complexes
# ---------------------------------------------------------------------------


class _Indexer:
    def __init__(self):
        self.ids: dict = {}
        self.keys: list = []

    def id(self, key) -> int:
        got = self.ids.get(key)
        if got is None:
            got = len(self.keys)
            self.ids[key] = got
            self.keys.append(key)
        return got

    def __len__(self):
        return len(self.keys)


class HomComplex:
    """Hom^m(A, B (x) Omega^f) with the shifted-composition differential.

    Elements of Hom^m are families g^q : A^q -> B^(q+m) of matrices whose
    entries are polynomials (f = 0) or 1-forms (f = 1) of degree at most
    the morphism cap.
    """

    def __init__(self, A: BraneComplex, B: BraneComplex, form_degree: int = 0,
                 morphism_degree: int | None = None):
        if A.ring != B.ring:
            raise SizeMismatch("Hom-complex endpoints over different rings")
        self.A = A
        self.B = B
        self.ring = A.ring
        self.form_degree = form_degree
        if morphism_degree is None:
            dmax = max(A.max_differential_degree(), B.max_differential_degree())
            morphism_degree = self.ring.trunc_degree - dmax
            if morphism_degree < 0:
                raise DegreeOverflow("truncation degree too small for Hom elements")
        self.morphism_degree = morphism_degree
        self._monos = monomials_upto(self.ring.n_vars, morphism_degree)
        self._dx_range = range(self.ring.n_vars) if form_degree == 1 else range(1)

    def blocks(self, m: int) -> list[int]:
        return [
            q
            for q in self.A.degrees
            if self.B.rank(q + m) > 0
        ]

    def space_dimension(self, m: int) -> int:
        total = 0
        for q in self.blocks(m):
            total += (
                self.B.rank(q + m)
                * self.A.rank(q)
                * len(self._monos)
                * len(self._dx_range)
            )
        return total

    def zero_element(self, m: int) -> dict:
        return {
            q: fzero(self.ring, self.B.rank(q + m), self.A.rank(q), self.form_degree)
            if self.form_degree
            else pzero(self.ring, self.B.rank(q + m), self.A.rank(q))
            for q in self.blocks(m)
        }

    def apply_differential(self, m: int, g: dict) -> dict:
        """(d_H g)^q = delta_B g^q + (-1)^(m+1) g^(q+1) delta_A."""
        sign = 1 if (m + 1) % 2 == 0 else -1
        out = {}
        for q in self.blocks(m + 1):
            acc = None
            dB = self.B.differential(q + m)
            gq = g.get(q)
            if dB is not None and gq is not None:
                acc = dB @ gq
            dA = self.A.differential(q)
            gn = g.get(q + 1)
            if dA is not None and gn is not None:
                term = gn @ dA
                term = term if sign == 1 else -term
                acc = term if acc is None else acc + term
            if acc is None:
                acc = self.zero_element(m + 1)[q]
            out[q] = acc
        return out

    # -- coordinates -------------------------------------------------------

    def _slots(self, m: int):
        for q in self.blocks(m):
            rb, ra = self.B.rank(q + m), self.A.rank(q)
            for r in range(rb):
                for c in range(ra):
                    for k in self._dx_range:
                        for exp in self._monos:
                            yield (q, r, c, k, exp)

    def element_from_coords(self, m: int, coords: dict) -> dict:
        g = self.zero_element(m)
        slots = list(self._slots(m))
        for idx, value in coords.items():
            q, r, c, k, exp = slots[idx]
            entry = g[q].entries[r][c]
            mono = TruncPoly(self.ring, {exp: value})
            if self.form_degree:
                add = ExteriorForm(self.ring, 1, {(k,): mono})
            else:
                add = mono
            g[q].entries[r][c] = entry + add
        return g

    def coords_of(self, m: int, g: dict, indexer: _Indexer) -> dict:
        """Sparse coordinates of a Hom element, extending the indexer as
        higher-degree monomials appear (outputs of the differential)."""
        out = {}
        for q, M in g.items():
            for r, row in enumerate(M.entries):
                for c, entry in enumerate(row):
                    if self.form_degree:
                        items = [
                            (idx[0], exp, v)
                            for idx, p in entry.components.items()
                            for exp, v in p.terms.items()
                        ]
                    else:
                        items = [(0, exp, v) for exp, v in entry.terms.items()]
                    for k, exp, v in items:
                        col = indexer.id((q, r, c, k, exp))
                        out[col] = out.get(col, Scalar(0)) + v
        return {c: v for c, v in out.items() if not v.is_zero()}

    def differential_rows(self, m: int):
        """Rows of the matrix of d_H^m in slot coordinates (transposed
        internally from per-slot probe columns)."""
        slots = list(self._slots(m))
        indexer = _Indexer()
        columns = []
        for idx in range(len(slots)):
            g = self.element_from_coords(m, {idx: Scalar(1)})
            out = self.apply_differential(m, g)
            columns.append(self.coords_of(m, out, indexer))
        rows: dict[int, dict] = {}
        for j, col in enumerate(columns):
            for eq, v in col.items():
                rows.setdefault(eq, {})[j] = v
        return [rows.get(e, {}) for e in range(len(indexer))], len(slots)

    def cohomology_rank(self, m: int) -> int:
        """dim ker(d_H^m) - dim(im(d_H^(m-1)) within the capped space)."""
        rows_m, n_m = self.differential_rows(m)
        if n_m == 0:
            return 0
        ker_dim = n_m - _rank_of_rows(rows_m, n_m)

        rows_prev, n_prev = self.differential_rows(m - 1)
        if n_prev == 0:
            return ker_dim
        # image vectors of capped sources that stay within degree cap:
        # count solutions of "high-degree output coordinates vanish".
        slots_m = {s: i for i, s in enumerate(self._slots(m))}
        indexer = _Indexer()
        columns = []
        for idx in range(n_prev):
            g = self.element_from_coords(m - 1, {idx: Scalar(1)})
            out = self.apply_differential(m - 1, g)
            columns.append(self.coords_of(m, out, indexer))
        overflow_rows: dict[int, dict] = {}
        image_vectors = []
        for j, col in enumerate(columns):
            vec = {}
            for eq, v in col.items():
                key = indexer.keys[eq]
                if key in slots_m:
                    vec[slots_m[key]] = v
                else:
                    overflow_rows.setdefault(eq, {})[j] = v
            image_vectors.append(vec)
        constrained = [overflow_rows.get(e, {}) for e in range(len(indexer))]
        constrained = [r for r in constrained if r]
        if constrained:
            good = kernel_sparse(constrained, n_prev)
        else:
            good = None  # all of the source maps within the cap
        tracker = SpanTracker(n_m)
        img_dim = 0
        if good is None:
            for vec in image_vectors:
                dense = [Scalar(0)] * n_m
                for c, v in vec.items():
                    dense[c] = v
                if tracker.add(dense):
                    img_dim += 1
        else:
            for combo in good:
                dense = [Scalar(0)] * n_m
                for j, weight in enumerate(combo):
                    if weight.is_zero():
                        continue
                    for c, v in image_vectors[j].items():
                        dense[c] = dense[c] + v * weight
                if tracker.add(dense):
                    img_dim += 1
        return ker_dim - img_dim


def _rank_of_rows(rows, n_cols):
    from .exact import rank_sparse

    return rank_sparse(rows, n_cols)


def hom_complex(A: BraneComplex, B: BraneComplex, form_degree: int = 0,
                morphism_degree: int | None = None) -> HomComplex:
    return HomComplex(A, B, form_degree, morphism_degree)


# ---------------------------------------------------------------------------
# gauge fields
# ---------------------------------------------------------------------------


class GaugeField:
    """A chain map into the jet complex splitting the projection up to the
    stored homotopy witness.

    Each component sends a section s of term i to (B^i s, B^i ds + A^i s);
    the witness h certifies that the projection part B is homotopic to the
    identity."""

    def __init__(self, F: BraneComplex, B: dict, A: dict, h: dict,
                 morphism_degree: int):
        self.brane = F
        self.B = B
        self.A = A
        self.h = h
        self.morphism_degree = morphism_degree

    def defects(self) -> list[str]:
        """Exact verification of the three defining identities."""
        F = self.brane
        out = []
        for i in sorted(F.differentials):
            d = F.differentials[i]
            dd = d_of_matrix(d)
            lhs = d @ self.B[i]
            rhs = self.B[i + 1] @ d
            if not (lhs - rhs).is_zero():
                out.append(f"projection part not a chain map at degree {i}")
            lhs_f = d @ self.A[i]
            rhs_f = (self.B[i + 1] @ dd) + (self.A[i + 1] @ d)
            if not (lhs_f - rhs_f).is_zero():
                out.append(f"jet chain-map identity fails at degree {i}")
        for i in F.degrees:
            acc = pidentity(F.ring, F.rank(i))
            hi = self.h.get(i)
            dprev = F.differential(i - 1)
            if hi is not None and dprev is not None:
                acc = acc + (dprev @ hi)
            hnext = self.h.get(i + 1)
            dthis = F.differential(i)
            if hnext is not None and dthis is not None:
                acc = acc + (hnext @ dthis)
            if not (self.B[i] - acc).is_zero():
                out.append(f"homotopy witness identity fails at degree {i}")
        return out

    def verify(self) -> bool:
        return not self.defects()

    def perturbed(self, variation: "GaugeVariation", t) -> "GaugeField":
        """The gauge field psi + t.xi with the witness moved along."""
        B = {
            i: self.B[i] + variation.B[i].map(lambda p: p.scale(t))
            for i in self.B
        }
        A = {
            i: self.A[i] + variation.A[i].map(lambda e: e.scale(t))
            for i in self.A
        }
        h = dict(self.h)
        for i, m in variation.h.items():
            h[i] = h[i] + m.map(lambda p: p.scale(t)) if i in h else m.map(
                lambda p: p.scale(t)
            )
        return GaugeField(self.brane, B, A, h, self.morphism_degree)


@dataclass
class GaugeVariation:
    """A homogeneous solution of the gauge system: a direction in which a
    gauge field can move while staying a gauge field."""

    B: dict
    A: dict
    h: dict


@dataclass
class GaugeSolveResult:
    gauge: GaugeField | None
    obstructed: bool
    affine_dimension: int
    basis: list
    morphism_degree: int


def _h_to_projection_part(F: BraneComplex, h: dict) -> dict:
    """delta h + h delta per degree (the coboundary of a degree -1 map)."""
    out = {}
    for i in F.degrees:
        acc = pzero(F.ring, F.rank(i), F.rank(i))
        hi = h.get(i)
        dprev = F.differential(i - 1)
        if hi is not None and dprev is not None:
            acc = acc + (dprev @ hi)
        hnext = h.get(i + 1)
        dthis = F.differential(i)
        if hnext is not None and dthis is not None:
            acc = acc + (hnext @ dthis)
        out[i] = acc
    return out


def homotopy_to_jet(F: BraneComplex, u: dict, v: dict) -> tuple[dict, dict]:
    """The null-homotopic jet chain map determined by a degree -1 map
    (u, v) into the jet complex: returns its (B, A) parts."""
    B = _h_to_projection_part(F, u)
    A = {}
    for i in F.degrees:
        acc = fzero(F.ring, F.rank(i), F.rank(i))
        dprev = F.differential(i - 1)
        vi = v.get(i)
        if vi is not None and dprev is not None:
            acc = acc + (dprev @ vi)
        dthis = F.differential(i)
        if dthis is not None:
            unext = u.get(i + 1)
            if unext is not None:
                acc = acc + (unext @ d_of_matrix(dthis))
            vnext = v.get(i + 1)
            if vnext is not None:
                acc = acc + (vnext @ dthis)
        A[i] = acc
    return B, A


def _gauge_defects(F: BraneComplex, A: dict, h: dict) -> dict:
    """The affine defect of the jet chain-map identity, after the
    projection part B = id + delta h + h delta has been substituted."""
    out = {}
    for i in sorted(F.differentials):
        d = F.differentials[i]
        if d.is_zero():
            continue
        dd = d_of_matrix(d)
        bnext = pidentity(F.ring, F.rank(i + 1))
        hnext = h.get(i + 1)
        if hnext is not None:
            bnext = bnext + (d @ hnext)
        hnn = h.get(i + 2)
        dnext = F.differential(i + 1)
        if hnn is not None and dnext is not None:
            bnext = bnext + (hnn @ dnext)
        defect = (d @ A[i]) - (A[i + 1] @ d) - (bnext @ dd)
        out[i] = defect
    return out


def _coords_of_form_matrices(mats: dict, indexer: _Indexer, tag: str) -> dict:
    out = {}
    for i, M in mats.items():
        for r, row in enumerate(M.entries):
            for c, entry in enumerate(row):
                for idx, p in entry.components.items():
                    for exp, val in p.terms.items():
                        col = indexer.id((tag, i, r, c, idx[0], exp))
                        out[col] = out.get(col, Scalar(0)) + val
    return {c: v for c, v in out.items() if not v.is_zero()}


def _coords_of_poly_matrices(mats: dict, indexer: _Indexer, tag: str) -> dict:
    out = {}
    for i, M in mats.items():
        for r, row in enumerate(M.entries):
            for c, p in enumerate(row):
                for exp, val in p.terms.items():
                    col = indexer.id((tag, i, r, c, exp))
                    out[col] = out.get(col, Scalar(0)) + val
    return {c: v for c, v in out.items() if not v.is_zero()}


def gauge_solve(F: BraneComplex, morphism_degree: int | None = None) -> GaugeSolveResult:
    """Solve the exact linear system for a gauge field on the brane.

    Returns a particular gauge field together with a basis of the affine
    space of gauge fields modulo homotopy, or an obstruction report when
    the system is inconsistent."""
    ring = F.ring
    cap = F.default_morphism_degree("gauge") if morphism_degree is None else morphism_degree
    if cap < 0:
        raise DegreeOverflow("negative morphism degree requested")
    monos = monomials_upto(ring.n_vars, cap)

    a_slots = []
    for i in F.degrees:
        r = F.rank(i)
        for rr in range(r):
            for cc in range(r):
                for k in range(ring.n_vars):
                    for exp in monos:
                        a_slots.append((i, rr, cc, k, exp))
    h_slots = []
    for i in F.degrees:
        if F.rank(i - 1) == 0:
            continue
        for rr in range(F.rank(i - 1)):
            for cc in range(F.rank(i)):
                for exp in monos:
                    h_slots.append((i, rr, cc, exp))
    n_unknowns = len(a_slots) + len(h_slots)

    def zero_A():
        return {i: fzero(ring, F.rank(i), F.rank(i)) for i in F.degrees}

    def zero_h():
        return {
            i: pzero(ring, F.rank(i - 1), F.rank(i))
            for i in F.degrees
            if F.rank(i - 1) > 0
        }

    def unknowns_from_coords(coords) -> tuple[dict, dict]:
        A, h = zero_A(), zero_h()
        for j, val in coords.items() if isinstance(coords, dict) else enumerate(coords):
            if isinstance(val, Scalar) and val.is_zero():
                continue
            if j < len(a_slots):
                i, rr, cc, k, exp = a_slots[j]
                entry = A[i].entries[rr][cc]
                A[i].entries[rr][cc] = entry + ExteriorForm(
                    ring, 1, {(k,): TruncPoly(ring, {exp: val})}
                )
            else:
                i, rr, cc, exp = h_slots[j - len(a_slots)]
                entry = h[i].entries[rr][cc]
                h[i].entries[rr][cc] = entry + TruncPoly(ring, {exp: val})
        return A, h

    eq_indexer = _Indexer()
    base = _coords_of_form_matrices(_gauge_defects(F, zero_A(), zero_h()), eq_indexer, "eq")

    columns = []
    for j in range(n_unknowns):
        A, h = unknowns_from_coords({j: Scalar(1)})
        coords = _coords_of_form_matrices(_gauge_defects(F, A, h), eq_indexer, "eq")
        col = dict(coords)
        for eq, v in base.items():
            col[eq] = col.get(eq, Scalar(0)) - v
        columns.append({e: v for e, v in col.items() if not v.is_zero()})

    rows: dict[int, dict] = {}
    for j, col in enumerate(columns):
        for eq, v in col.items():
            rows.setdefault(eq, {})[j] = v
    row_list = [rows.get(e, {}) for e in range(len(eq_indexer))]
    rhs = [Scalar(0)] * len(eq_indexer)
    for eq, v in base.items():
        rhs[eq] = -v

    solution = solve_sparse(row_list, rhs, n_unknowns)
    if solution is None:
        return GaugeSolveResult(None, True, 0, [], cap)

    A_star, h_star = unknowns_from_coords(solution.particular)
    B_star = _h_to_projection_part(F, h_star)
    for i in F.degrees:
        B_star[i] = B_star[i] + pidentity(ring, F.rank(i))
    gauge = GaugeField(F, B_star, A_star, h_star, cap)

    # quotient by null-homotopic directions: coordinates of (B, A) pairs
    w_indexer = _Indexer()

    def w_coords(Bparts, Aparts):
        coords = _coords_of_poly_matrices(Bparts, w_indexer, "B")
        coords.update(_coords_of_form_matrices(Aparts, w_indexer, "A"))
        return coords

    # seed the indexer deterministically with every generator first
    null_gen_coords = []
    u_slots = list(h_slots)
    v_slots = []
    for i in F.degrees:
        if F.rank(i - 1) == 0:
            continue
        for rr in range(F.rank(i - 1)):
            for cc in range(F.rank(i)):
                for k in range(ring.n_vars):
                    for exp in monos:
                        v_slots.append((i, rr, cc, k, exp))

    def null_gen(idx):
        u, v = zero_h(), {
            i: fzero(ring, F.rank(i - 1), F.rank(i))
            for i in F.degrees
            if F.rank(i - 1) > 0
        }
        if idx < len(u_slots):
            i, rr, cc, exp = u_slots[idx]
            u[i].entries[rr][cc] = TruncPoly(ring, {exp: Scalar(1)})
        else:
            i, rr, cc, k, exp = v_slots[idx - len(u_slots)]
            v[i].entries[rr][cc] = ExteriorForm(
                ring, 1, {(k,): TruncPoly(ring, {exp: Scalar(1)})}
            )
        return homotopy_to_jet(F, u, v)

    for idx in range(len(u_slots) + len(v_slots)):
        Bp, Ap = null_gen(idx)
        null_gen_coords.append(w_coords(Bp, Ap))

    kernel_data = []
    for vec in solution.kernel:
        A0, h0 = unknowns_from_coords(vec)
        B0 = _h_to_projection_part(F, h0)
        kernel_data.append((w_coords(B0, A0), GaugeVariation(B0, A0, h0)))

    dim_w = len(w_indexer)
    tracker = SpanTracker(dim_w)
    for coords in null_gen_coords:
        dense = [Scalar(0)] * dim_w
        for c, v in coords.items():
            dense[c] = v
        tracker.add(dense)
    basis = []
    for coords, variation in kernel_data:
        dense = [Scalar(0)] * dim_w
        for c, v in coords.items():
            dense[c] = v
        if tracker.add(dense):
            basis.append(variation)

    return GaugeSolveResult(gauge, False, len(basis), basis, cap)


# ---------------------------------------------------------------------------
# cohomology in the evaluated model
# ---------------------------------------------------------------------------


class CohomologySpace:
    """Cohomology of one degree at the base point, with representatives
    chosen in the orthogonal complement of the image inside the kernel."""

    def __init__(self, degree: int, term: FreeModule, representatives: list,
                 image_basis: list):
        self.degree = degree
        self.term = term
        self.representatives = representatives
        self.image_basis = image_basis
        self.rank = len(representatives)
        self.h_module = (
            FreeModule(term.ring, self.rank) if self.rank else None
        )

    def project_scalars(self, vector: list) -> list | None:
        """Coordinates in the representative basis of a kernel vector,
        or None when the vector is not in ker = span(reps + image)."""
        cols = self.representatives + self.image_basis
        if not cols:
            return None if any(not v.is_zero() for v in vector) else []
        M = Matrix.build(
            self.term.rank, len(cols), lambda r, c: cols[c][r]
        )
        sol = solve_linear(M, vector)
        if sol is None:
            return None
        return sol.particular[: self.rank]

    def project_polys(self, vector: list) -> list:
        """Descend a polynomial vector (componentwise on monomials)."""
        ring = self.term.ring
        out = [TruncPoly.zero(ring) for _ in range(self.rank)]
        exps = set()
        for p in vector:
            exps.update(p.terms)
        for exp in sorted(exps):
            w = [p.terms.get(exp, Scalar(0)) for p in vector]
            coords = self.project_scalars(w)
            if coords is None:
                raise NotCompatible(
                    "vector does not descend to cohomology at the base point"
                )
            for k, val in enumerate(coords):
                if not val.is_zero():
                    out[k] = out[k] + TruncPoly(ring, {exp: val})
        return out

    def project_forms(self, vector: list) -> list:
        """Descend a vector of 1-forms, one frame direction at a time."""
        ring = self.term.ring
        out = [ExteriorForm.zero(ring, 1) for _ in range(self.rank)]
        for k in range(ring.n_vars):
            polys = [e.component((k,)) for e in vector]
            coords = self.project_polys(polys)
            for j, p in enumerate(coords):
                if not p.is_zero():
                    out[j] = out[j] + ExteriorForm(ring, 1, {(k,): p})
        return out


def cohomology(F: BraneComplex, eval_points: list) -> dict:
    """Kernel/image data at the base point with rank-constancy certification
    across all evaluation points."""
    ring = F.ring
    if not eval_points:
        raise SizeMismatch("at least one evaluation point is required")
    points = []
    for pt in eval_points:
        pt = [Scalar.coerce(v) for v in pt]
        if len(pt) != ring.n_vars:
            raise SizeMismatch("evaluation point arity mismatch")
        points.append(pt)

    evaluated = {}
    for i, M in F.differentials.items():
        ranks = []
        mats = []
        for pt in points:
            Mp = M.map(lambda p: p.evaluate(pt))
            mats.append(Mp)
            ranks.append(matrix_rank(Mp))
        if len(set(ranks)) > 1:
            raise RankJump(
                f"differential at degree {i} has ranks {ranks} across the "
                f"evaluation points"
            )
        evaluated[i] = mats[0]

    spaces = {}
    for j in F.degrees:
        term = F.term(j)
        r = term.rank
        d_out = evaluated.get(j)
        if d_out is None and F.differential(j) is not None:
            d_out = F.differential(j).map(lambda p: p.evaluate(points[0]))
        if d_out is not None:
            ker = kernel_basis(d_out)
        else:
            ker = [
                [Scalar(1 if a == b else 0) for a in range(r)] for b in range(r)
            ]
        d_in = evaluated.get(j - 1)
        if d_in is None and F.differential(j - 1) is not None:
            d_in = F.differential(j - 1).map(lambda p: p.evaluate(points[0]))
        image = []
        if d_in is not None:
            tracker = SpanTracker(r)
            for c in range(d_in.cols):
                col = [d_in.entries[rr][c] for rr in range(d_in.rows)]
                if tracker.add(col):
                    image.append(col)
        rows = []
        if d_out is not None:
            rows.extend(
                [{c: v for c, v in enumerate(row) if not v.is_zero()}
                 for row in d_out.entries]
            )
        for b in image:
            rows.append(
                {c: v.conjugate() for c, v in enumerate(b) if not v.is_zero()}
            )
        if rows:
            reps = kernel_sparse(rows, r)
        else:
            reps = [
                [Scalar(1 if a == b else 0) for a in range(r)] for b in range(r)
            ]
        ker_dim = len(ker)
        assert len(reps) == ker_dim - len(image)
        spaces[j] = CohomologySpace(j, term, reps, image)
    return spaces


def _check_cocycle_representatives(F: BraneComplex, coh: dict, j: int):
    """Representatives must be exact cocycle sections, not merely kernel
    vectors at the base point."""
    d = F.differential(j)
    if d is None:
        return
    ring = F.ring
    for rep in coh[j].representatives:
        polys = [TruncPoly.constant(ring, v) for v in rep]
        image = d.apply(polys)
        if any(not p.is_zero() for p in image):
            raise NotCompatible(
                f"representative at degree {j} is not an exact cocycle "
                f"section; induced connections are undefined here"
            )


def _descend_connection(F: BraneComplex, A: Matrix, coh: dict, j: int) -> Connection:
    space = coh[j]
    ring = F.ring
    columns = []
    for rep in space.representatives:
        w = []
        for r in range(space.term.rank):
            acc = ExteriorForm.zero(ring, 1)
            for c in range(space.term.rank):
                if not rep[c].is_zero():
                    acc = acc + A.entries[r][c].scale(rep[c])
            w.append(acc)
        columns.append(space.project_forms(w))
    theta = Matrix.build(
        space.rank, space.rank, lambda r, c: columns[c][r]
    )
    return Connection(space.h_module, theta)


def induced_connections(F: BraneComplex, gauge: GaugeField,
                        eval_points: list | None = None, coh: dict | None = None) -> dict:
    """The connection each gauge field induces on every nonzero cohomology
    space (subtract the section inclusion and read off the 1-form part)."""
    ring = F.ring
    if coh is None:
        if eval_points is None:
            eval_points = [[Scalar(0)] * ring.n_vars]
        coh = cohomology(F, eval_points)
    out = {}
    for j, space in coh.items():
        if space.rank == 0:
            continue
        _check_cocycle_representatives(F, coh, j)
        # the projection part must descend to the identity on cohomology
        for k, rep in enumerate(space.representatives):
            polys = gauge.B[j].apply(
                [TruncPoly.constant(ring, v) for v in rep]
            )
            coords = space.project_polys(polys)
            expected = [
                TruncPoly.constant(ring, 1 if a == k else 0)
                for a in range(space.rank)
            ]
            if coords != expected:
                raise NotCompatible(
                    f"projection part does not descend to the identity on "
                    f"cohomology at degree {j}"
                )
        out[j] = _descend_connection(F, gauge.A[j], coh, j)
    return out


def induced_connection(F: BraneComplex, gauge: GaugeField, j: int,
                       eval_points: list | None = None) -> Connection | None:
    return induced_connections(F, gauge, eval_points).get(j)


def descend_variation(F: BraneComplex, variation: GaugeVariation, j: int,
                      eval_points: list | None = None, coh: dict | None = None) -> HomElement | None:
    """Induced variation on cohomology: an O-linear 1-form endomorphism."""
    ring = F.ring
    if coh is None:
        if eval_points is None:
            eval_points = [[Scalar(0)] * ring.n_vars]
        coh = cohomology(F, eval_points)
    space = coh.get(j)
    if space is None or space.rank == 0:
        return None
    _check_cocycle_representatives(F, coh, j)
    conn = _descend_connection(F, variation.A[j], coh, j)
    return HomElement(space.h_module, space.h_module, 1, conn.A)


def compatible_family_connections(F: BraneComplex, conns: dict,
                                  eval_points: list | None = None,
                                  coh: dict | None = None) -> dict:
    """Descend a family of connections intertwining the differentials."""
    ring = F.ring
    for i in F.degrees:
        if conns.get(i) is None:
            raise NotCompatible(f"no connection supplied at degree {i}")
        if conns[i].module != F.term(i):
            raise SizeMismatch(f"connection at degree {i} on the wrong module")
    for i in sorted(F.differentials):
        d = F.differentials[i]
        defect = (d @ conns[i].A) - (conns[i + 1].A @ d) - d_of_matrix(d)
        if not defect.is_zero():
            raise NotCompatible(
                f"family does not intertwine the differential at degree {i}"
            )
    if coh is None:
        if eval_points is None:
            eval_points = [[Scalar(0)] * ring.n_vars]
        coh = cohomology(F, eval_points)
    out = {}
    for j, space in coh.items():
        if space.rank == 0:
            continue
        _check_cocycle_representatives(F, coh, j)
        out[j] = _descend_connection(F, conns[j].A, coh, j)
    return out


def variation_difference(F: BraneComplex, psi: GaugeField, phi: GaugeField,
                         j: int, eval_points: list | None = None) -> HomElement | None:
    """The difference of the induced connections: O-linear, not a connection."""
    a = induced_connection(F, psi, j, eval_points)
    b = induced_connection(F, phi, j, eval_points)
    if a is None or b is None:
        return None
    return HomElement(b.module, b.module, 1, b.A - a.A)
