"""The Yang-Mills functional, its exact polynomial, and the critical-point
solver.

Moving a base connection along directions E_1..E_m expands the curvature
exactly as K0 + sum_i l_i B_i + sum_ij l_i l_j B_ij; pairing the expansion
with itself gives a polynomial of degree at most 4 whose gradient system
(degree at most 3 per component) carries the critical points.

Two pairings are provided.  `bilinear` is the trace form sum_ij <M_ij, N_ji>
without conjugation: it makes the polynomial genuinely holomorphic and the
Euler-Poincare and cone identities exact.  `hermitian` is the positive
Frobenius form sum_ij <M_ij, N_ij> with first-argument conjugation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .branes import (
    BraneComplex,
    ChainMap,
    GaugeField,
    GaugeVariation,
    cohomology,
    compatible_family_connections,
    cone,
    descend_variation,
    fzero,
    induced_connections,
    pidentity,
    pzero,
)
from .dg import Connection, FreeModule, HomElement
from .errors import (
    DegreeMismatch,
    NotCompatible,
    SizeMismatch,
    ToleranceUnreachable,
)
from .exact import ExteriorForm, Matrix, Ring, Scalar, TruncPoly, monomials_upto

MODES = ("hermitian", "bilinear")


def end_pairing(M: Matrix, N: Matrix, mode: str) -> Scalar:
    """Pairing of two k-form endomorphism matrices.

    hermitian: Frobenius sum of entrywise pairings (positive definite).
    bilinear: trace form pairing entry (i,j) with entry (j,i), the exact
    analogue of tr(M ^ star N)."""
    if mode not in MODES:
        raise ValueError(f"unknown pairing mode {mode!r}")
    if M.shape() != N.shape():
        raise SizeMismatch("pairing of end matrices with different shapes")
    total = Scalar(0)
    for i in range(M.rows):
        for j in range(M.cols):
            if mode == "hermitian":
                total = total + M.entries[i][j].torus_pairing(
                    N.entries[i][j], "hermitian"
                )
            else:
                total = total + M.entries[i][j].torus_pairing(
                    N.entries[j][i], "bilinear"
                )
    return total


# ---------------------------------------------------------------------------
# curvature expansion and the exact polynomial
# ---------------------------------------------------------------------------


class CurvatureExpansion:
    """Exact expansion of the curvature along variation directions."""

    def __init__(self, base: Connection, directions: list[HomElement]):
        module = base.module
        for E in directions:
            if E.source != module or E.target != module or E.degree != 1:
                raise SizeMismatch(
                    "variation directions must be 1-form endomorphisms of the base module"
                )
        self.base = base
        self.directions = directions
        self.m = len(directions)
        self.K0 = base.curvature_matrix()
        self.B = [base.end_derivative(E.matrix, 1) for E in directions]
        self.BB = [
            [directions[i].matrix @ directions[j].matrix for j in range(self.m)]
            for i in range(self.m)
        ]

    def connection_at(self, lams: list[Scalar]) -> Connection:
        A = self.base.A
        for lam, E in zip(lams, self.directions):
            A = A + E.matrix.map(lambda e: e.scale(lam))
        return Connection(self.base.module, A)

    def curvature_at(self, lams: list[Scalar]) -> Matrix:
        """Evaluate the expansion; agrees exactly with the curvature of the
        moved connection."""
        K = self.K0
        for i, lam in enumerate(lams):
            K = K + self.B[i].map(lambda e: e.scale(lam))
        for i, li in enumerate(lams):
            for j, lj in enumerate(lams):
                K = K + self.BB[i][j].map(lambda e: e.scale(li * lj))
        return K


def curvature_expansion(base: Connection, directions: list[HomElement]) -> CurvatureExpansion:
    return CurvatureExpansion(base, directions)


class YMPolynomial:
    """The exact polynomial value of the squared curvature norm.

    bilinear mode: coefficients map exponent tuples (degree <= 4) to
    scalars and the polynomial is holomorphic in the parameters.
    hermitian mode: keys are pairs (conjugated exponent, exponent) and the
    value is real on every input."""

    def __init__(self, m: int, mode: str, coefficients: dict):
        self.m = m
        self.mode = mode
        self.coefficients = {
            k: v for k, v in coefficients.items() if not v.is_zero()
        }

    def degree(self) -> int:
        if not self.coefficients:
            return 0
        if self.mode == "bilinear":
            return max(sum(k) for k in self.coefficients)
        return max(sum(a) + sum(b) for a, b in self.coefficients)

    def lambda_dependent(self) -> bool:
        if self.mode == "bilinear":
            return any(sum(k) > 0 for k in self.coefficients)
        return any(sum(a) + sum(b) > 0 for a, b in self.coefficients)

    def evaluate(self, lams: list[Scalar]) -> Scalar:
        lams = [Scalar.coerce(v) for v in lams]
        if len(lams) != self.m:
            raise SizeMismatch("wrong number of parameters")
        total = Scalar(0)
        if self.mode == "bilinear":
            for exps, c in self.coefficients.items():
                v = c
                for lam, e in zip(lams, exps):
                    for _ in range(e):
                        v = v * lam
                total = total + v
        else:
            for (a, b), c in self.coefficients.items():
                v = c
                for lam, e in zip(lams, a):
                    for _ in range(e):
                        v = v * lam.conjugate()
                for lam, e in zip(lams, b):
                    for _ in range(e):
                        v = v * lam
                total = total + v
        return total

    def as_trunc_poly(self) -> TruncPoly:
        if self.mode != "bilinear":
            raise DegreeMismatch("only the bilinear polynomial is holomorphic")
        ring = Ring(max(self.m, 1), 4)
        terms = {}
        for exps, c in self.coefficients.items():
            key = exps if self.m else (0,)
            terms[tuple(key)] = c
        return TruncPoly(ring, terms)

    def as_real_poly(self) -> TruncPoly:
        """Hermitian values as a real polynomial in (Re l_i, Im l_i)."""
        if self.mode != "hermitian":
            raise DegreeMismatch("real form only defined in hermitian mode")
        m = max(self.m, 1)
        ring = Ring(2 * m, 4)
        total = TruncPoly.zero(ring)
        for (a, b), c in self.coefficients.items():
            factor = TruncPoly.constant(ring, c)
            for j in range(self.m):
                xj = TruncPoly.variable(ring, j)
                yj = TruncPoly.variable(ring, m + j)
                conj = xj - yj.scale(Scalar(0, 1))
                plain = xj + yj.scale(Scalar(0, 1))
                for _ in range(a[j]):
                    factor = factor * conj
                for _ in range(b[j]):
                    factor = factor * plain
            total = total + factor
        for coeff in total.terms.values():
            if coeff.im != 0:
                raise DegreeMismatch("hermitian polynomial failed to be real")
        return total


def ym_polynomial(expansion: CurvatureExpansion, mode: str) -> YMPolynomial:
    """Pair the curvature expansion against itself, collecting parameter
    monomials exactly."""
    if mode not in MODES:
        raise ValueError(f"unknown pairing mode {mode!r}")
    m = expansion.m
    blocks = [((0,) * m, expansion.K0)]
    for i in range(m):
        e = [0] * m
        e[i] = 1
        blocks.append((tuple(e), expansion.B[i]))
    for i in range(m):
        for j in range(m):
            e = [0] * m
            e[i] += 1
            e[j] += 1
            blocks.append((tuple(e), expansion.BB[i][j]))
    coefficients: dict = {}
    for ea, X in blocks:
        for eb, Y in blocks:
            val = end_pairing(X, Y, mode)
            if val.is_zero():
                continue
            if mode == "bilinear":
                key = tuple(x + y for x, y in zip(ea, eb))
            else:
                key = (ea, eb)
            coefficients[key] = coefficients.get(key, Scalar(0)) + val
    return YMPolynomial(m, mode, coefficients)


def gradient_system(P: YMPolynomial) -> list[TruncPoly]:
    """Partial derivatives of the polynomial: m holomorphic components in
    bilinear mode, 2m real components in hermitian mode; degree <= 3."""
    if P.m == 0:
        return []
    if P.mode == "bilinear":
        poly = P.as_trunc_poly()
        return [poly.derivative(i) for i in range(P.m)]
    poly = P.as_real_poly()
    return [poly.derivative(i) for i in range(2 * P.m)]


def ym_sheaf(conn: Connection, mode: str) -> Scalar:
    K = conn.curvature_matrix()
    return end_pairing(K, K, mode)


# ---------------------------------------------------------------------------
# numeric critical points
# ---------------------------------------------------------------------------


@dataclass
class SolverConfig:
    starts: int = 40
    seed: int = 1
    tol: float = 1e-12
    max_iter: int = 80
    dedupe_tol: float = 1e-6
    box: float = 2.0
    rank_tol: float = 1e-8


@dataclass
class CriticalPoint:
    coords: tuple
    residual: float
    jacobian_rank: int
    multiplicity_estimate: int


@dataclass
class CriticalSet:
    mode: str
    n_vars: int
    bezout_bound: int
    points: list
    nonisolated: bool
    witness: tuple | None

    @property
    def isolated(self) -> list:
        return [p for p in self.points if p.jacobian_rank == self.n_vars]


def _compile(poly: TruncPoly):
    return [(complex(c), exps) for exps, c in poly.terms.items()]


def _eval_compiled(compiled, z):
    total = 0j
    for c, exps in compiled:
        v = c
        for zi, e in zip(z, exps):
            for _ in range(e):
                v = v * zi
        total += v
    return total


def solve_critical(system: list[TruncPoly], config: SolverConfig | None = None,
                   domain: str = "complex", mode: str = "bilinear") -> CriticalSet:
    """Multi-start Newton on a square polynomial system with deterministic
    seeded starts, deduplication, and Jacobian-rank isolation testing."""
    config = config or SolverConfig()
    if config.tol <= 0:
        raise ValueError("tolerance must be positive")
    if not system:
        return CriticalSet(mode, 0, 1, [], False, None)
    n = system[0].ring.n_vars
    if len(system) != n:
        raise SizeMismatch("gradient system must be square")
    bezout = 3 ** n

    if all(p.is_zero() for p in system):
        origin = CriticalPoint((0j,) * n, 0.0, 0, 1)
        witness = tuple(1.0 if i == 0 else 0.0 for i in range(n))
        return CriticalSet(mode, n, bezout, [origin], True, witness)

    compiled = [_compile(p) for p in system]
    jacobian = [
        [_compile(p.derivative(j)) for j in range(n)] for p in system
    ]

    rng = random.Random(config.seed)
    starts = [[0.0] * n]
    for _ in range(config.starts):
        if domain == "complex":
            starts.append(
                [
                    complex(
                        rng.uniform(-config.box, config.box),
                        rng.uniform(-config.box, config.box),
                    )
                    for _ in range(n)
                ]
            )
        else:
            starts.append([rng.uniform(-config.box, config.box) for _ in range(n)])

    converged = []
    for start in starts:
        z = np.array(start, dtype=complex)
        ok = False
        for _ in range(config.max_iter):
            F = np.array([_eval_compiled(c, z) for c in compiled])
            if float(np.max(np.abs(F))) <= config.tol:
                ok = True
                break
            J = np.array(
                [[_eval_compiled(jacobian[i][j], z) for j in range(n)] for i in range(n)]
            )
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                step, *_ = np.linalg.lstsq(J, -F, rcond=None)
            if not np.all(np.isfinite(step)):
                break
            z = z + step
            if float(np.max(np.abs(step))) < 1e-16 * (1.0 + float(np.max(np.abs(z)))):
                F = np.array([_eval_compiled(c, z) for c in compiled])
                ok = float(np.max(np.abs(F))) <= config.tol
                break
        if not ok:
            continue
        if domain == "real":
            if float(np.max(np.abs(z.imag))) > 1e-9:
                continue
            z = z.real.astype(complex)
        converged.append(z)

    if not converged:
        raise ToleranceUnreachable(
            "no Newton start converged for a nonzero gradient system"
        )

    def sort_key(z):
        return tuple(
            (round(float(v.real), 9), round(float(v.imag), 9)) for v in z
        )

    converged.sort(key=sort_key)
    unique = []
    for z in converged:
        if unique and float(np.linalg.norm(z - unique[-1])) <= config.dedupe_tol:
            continue
        if any(
            float(np.linalg.norm(z - u)) <= config.dedupe_tol for u in unique
        ):
            continue
        unique.append(z)

    flat_scale = config.tol ** 0.5
    candidates = []
    for z in unique:
        F = np.array([_eval_compiled(c, z) for c in compiled])
        residual = float(np.max(np.abs(F)))
        J = np.array(
            [[_eval_compiled(jacobian[i][j], z) for j in range(n)] for i in range(n)]
        )
        svals = np.linalg.svd(J, compute_uv=False)
        top = float(svals[0]) if len(svals) else 0.0
        if top < flat_scale:
            # the whole Jacobian is at noise scale: a degenerate basin,
            # never evidence of an isolated solution
            rank = 0
        else:
            rank = int(np.sum(svals > config.rank_tol * top))
        candidates.append((z, residual, rank, J))

    # degenerate basins produce clouds of tol-approximate points; merge them
    cluster_tol = max(config.dedupe_tol, config.tol ** 0.25)
    merged = []
    for z, residual, rank, J in candidates:
        if rank < n:
            hit = None
            for idx, (z2, res2, rank2, _) in enumerate(merged):
                if rank2 < n and float(np.linalg.norm(z - z2)) <= cluster_tol:
                    hit = idx
                    break
            if hit is not None:
                if residual < merged[hit][1]:
                    merged[hit] = (z, residual, rank, J)
                continue
        merged.append((z, residual, rank, J))

    points = []
    nonisolated = False
    witness = None
    for z, residual, rank, J in merged:
        mult = 1 if rank == n else (n - rank) + 1
        if rank < n and not nonisolated:
            nonisolated = True
            _, _, vh = np.linalg.svd(J)
            witness = tuple(complex(v) for v in vh[-1])
        points.append(
            CriticalPoint(tuple(complex(v) for v in z), residual, rank, mult)
        )
    return CriticalSet(mode, n, bezout, points, nonisolated, witness)


# ---------------------------------------------------------------------------
# brane-level functional and checkers
# ---------------------------------------------------------------------------


def sheaf_brane(conn: Connection) -> tuple[BraneComplex, GaugeField]:
    """A single-term brane carrying the given connection as its gauge field."""
    ring = conn.module.ring
    F = BraneComplex(ring, {0: conn.module}, {})
    gauge = GaugeField(
        F,
        {0: pidentity(ring, conn.module.rank)},
        {0: conn.A},
        {},
        F.default_morphism_degree("gauge"),
    )
    return F, gauge


def ym_brane(F: BraneComplex, gauge: GaugeField, mode: str,
             eval_points: list | None = None) -> Scalar:
    """Alternating sum of squared curvature norms over the induced
    cohomology connections; zero for acyclic branes."""
    induced = induced_connections(F, gauge, eval_points)
    total = Scalar(0)
    for j, conn in induced.items():
        value = ym_sheaf(conn, mode)
        total = total + (value if j % 2 == 0 else -value)
    return total


def ym_brane_family(F: BraneComplex, conns: dict, mode: str,
                    eval_points: list | None = None) -> Scalar:
    induced = compatible_family_connections(F, conns, eval_points)
    total = Scalar(0)
    for j, conn in induced.items():
        value = ym_sheaf(conn, mode)
        total = total + (value if j % 2 == 0 else -value)
    return total


@dataclass
class StationarityReport:
    pairing_side: Scalar
    expected_derivative: complex
    fd_derivative: complex
    agreement: float
    exactly_zero: bool


def _ym_at_perturbation(induced: dict, variations: dict, eps: Scalar, mode: str) -> Scalar:
    total = Scalar(0)
    for j, theta in induced.items():
        xi = variations.get(j)
        A = theta.A if xi is None else theta.A + xi.matrix.map(lambda e: e.scale(eps))
        K = Connection(theta.module, A).curvature_matrix()
        value = end_pairing(K, K, mode)
        total = total + (value if j % 2 == 0 else -value)
    return total


def stationarity_check(F: BraneComplex, gauge: GaugeField,
                       variation: GaugeVariation, mode: str,
                       eval_points: list | None = None,
                       steps=(Fraction(1, 10_000), Fraction(1, 100_000))) -> StationarityReport:
    """Exact pairing expression against a Richardson-extrapolated central
    finite difference of the functional along the variation."""
    ring = F.ring
    if eval_points is None:
        eval_points = [[Scalar(0)] * ring.n_vars]
    coh = cohomology(F, eval_points)
    induced = induced_connections(F, gauge, eval_points, coh=coh)
    variations = {}
    for j in induced:
        xi = descend_variation(F, variation, j, eval_points, coh=coh)
        if xi is not None:
            variations[j] = xi

    pairing = Scalar(0)
    for j, theta in induced.items():
        xi = variations.get(j)
        if xi is None:
            continue
        K = theta.curvature_matrix()
        D = theta.end_derivative(xi.matrix, 1)
        value = end_pairing(K, D, mode)
        pairing = pairing + (value if j % 2 == 0 else -value)

    if mode == "hermitian":
        expected = complex(2 * pairing.re, 0)
    else:
        expected = 2 * complex(pairing)

    def fd(h: Fraction) -> complex:
        plus = _ym_at_perturbation(induced, variations, Scalar(h), mode)
        minus = _ym_at_perturbation(induced, variations, Scalar(-h), mode)
        return (complex(plus) - complex(minus)) / (2 * float(h))

    d1 = fd(steps[0])
    d2 = fd(steps[1])
    ratio = float(steps[0] / steps[1])
    extrapolated = (ratio * ratio * d2 - d1) / (ratio * ratio - 1)

    scale = max(abs(expected), abs(extrapolated))
    agreement = abs(extrapolated - expected) / scale if scale > 0 else 0.0
    exactly_zero = pairing.is_zero() and abs(extrapolated) < 1e-30
    return StationarityReport(pairing, expected, extrapolated, agreement, exactly_zero)


@dataclass
class OrthogonalityReport:
    passed: bool
    n_directions: int
    witness_index: int | None
    witness_value: Scalar | None


def monomial_directions(module: FreeModule, max_poly_degree: int) -> list[HomElement]:
    """The full monomial basis of 1-form endomorphisms up to a degree cap."""
    ring = module.ring
    out = []
    for r in range(module.rank):
        for c in range(module.rank):
            for k in range(ring.n_vars):
                for exp in monomials_upto(ring.n_vars, max_poly_degree):
                    M = fzero(ring, module.rank, module.rank)
                    M.entries[r][c] = ExteriorForm(
                        ring, 1, {(k,): TruncPoly(ring, {exp: Scalar(1)})}
                    )
                    out.append(HomElement(module, module, 1, M))
    return out


def orthogonality_check(conn: Connection, mode: str,
                        directions: list[HomElement] | None = None,
                        max_poly_degree: int | None = None) -> OrthogonalityReport:
    """Is the curvature orthogonal to the image of the covariant derivative?

    Checks <K, nabla E> = 0 for E over the supplied directions (default:
    the full monomial basis within the degree budget)."""
    ring = conn.module.ring
    if directions is None:
        deg_a = max(
            (e.poly_degree() for row in conn.A.entries for e in row), default=0
        )
        deg_a = max(deg_a, 0)
        cap = ring.trunc_degree - deg_a if max_poly_degree is None else max_poly_degree
        if cap < 0:
            raise DegreeMismatch("degree budget exhausted by the connection matrix")
        directions = monomial_directions(conn.module, cap)
    K = conn.curvature_matrix()
    for idx, E in enumerate(directions):
        DE = conn.end_derivative(E.matrix, 1)
        value = end_pairing(K, DE, mode)
        if not value.is_zero():
            return OrthogonalityReport(False, len(directions), idx, value)
    return OrthogonalityReport(True, len(directions), None, None)


@dataclass
class EulerPoincareReport:
    term_sum: Scalar
    cohomology_sum: Scalar

    @property
    def equal(self) -> bool:
        return self.term_sum == self.cohomology_sum


def euler_poincare_check(F: BraneComplex, conns: dict, mode: str,
                         eval_points: list | None = None) -> EulerPoincareReport:
    """Alternating curvature-pairing sums over the terms and over the
    induced cohomology connections."""
    induced = compatible_family_connections(F, conns, eval_points)
    lhs = Scalar(0)
    for i in F.degrees:
        value = ym_sheaf(conns[i], mode)
        lhs = lhs + (value if i % 2 == 0 else -value)
    rhs = Scalar(0)
    for j, conn in induced.items():
        value = ym_sheaf(conn, mode)
        rhs = rhs + (value if j % 2 == 0 else -value)
    return EulerPoincareReport(lhs, rhs)


@dataclass
class ConeYMReport:
    ym_source: Scalar
    ym_target: Scalar
    ym_cone: Scalar

    @property
    def equal(self) -> bool:
        return (self.ym_target - self.ym_source) == self.ym_cone


def cone_ym(f: ChainMap, alpha: dict, beta: dict, mode: str,
            eval_points: list | None = None) -> ConeYMReport:
    """Cone additivity: the functional of the target minus the source equals
    the functional of the block-diagonal cone connection."""
    A, B = f.source, f.target
    ring = A.ring
    for i in sorted(set(A.degrees) & set(B.degrees)):
        fi = f.component(i)
        if fi is None:
            continue
        from .branes import d_of_matrix

        defect = (fi @ alpha[i].A) - d_of_matrix(fi) - (beta[i].A @ fi)
        if not defect.is_zero():
            raise NotCompatible(
                f"chain map does not intertwine the connections at degree {i}"
            )
    mc = cone(f)
    cone_conns = {}
    for i in mc.complex.degrees:
        ra, rb = mc.top_ranks[i], mc.bottom_ranks[i]
        blocks_a = alpha[i + 1].A if ra else None
        blocks_b = beta[i].A if rb else None
        entries = []
        for r in range(ra + rb):
            row = []
            for c in range(ra + rb):
                if r < ra and c < ra:
                    row.append(blocks_a.entries[r][c])
                elif r >= ra and c >= ra:
                    row.append(blocks_b.entries[r - ra][c - ra])
                else:
                    row.append(ExteriorForm.zero(ring, 1))
            entries.append(row)
        cone_conns[i] = Connection(mc.complex.term(i), Matrix(entries))
    ym_a = ym_brane_family(A, alpha, mode, eval_points)
    ym_b = ym_brane_family(B, beta, mode, eval_points)
    ym_c = ym_brane_family(mc.complex, cone_conns, mode, eval_points)
    return ConeYMReport(ym_a, ym_b, ym_c)


# ---------------------------------------------------------------------------
# split-brane harness
# ---------------------------------------------------------------------------


@dataclass
class HarnessReport:
    induced_match_blocks: bool
    stationary_pairings: dict
    stationary_exact: bool
    orthogonality: dict
    all_orthogonal: bool


def build_split_brane(h_conns: dict, g_modules: dict, delta_g: dict) -> tuple[BraneComplex, dict]:
    """Assemble the split complex whose terms are H^i + G^i with the
    differential (a, b) |-> (0, delta_G b), and the block-diagonal family
    with flat G-blocks."""
    degrees = sorted(set(h_conns) | set(g_modules))
    ring = None
    for conn in h_conns.values():
        ring = conn.module.ring
    for mod in g_modules.values():
        ring = mod.ring
    terms = {}
    layouts = {}
    for i in degrees:
        rh = h_conns[i].module.rank if i in h_conns else 0
        rg = g_modules[i].rank if i in g_modules else 0
        layouts[i] = (rh, rg)
        if rh + rg:
            terms[i] = FreeModule(ring, rh + rg)
    diffs = {}
    for i, dG in delta_g.items():
        rh, rg = layouts[i]
        rh2, rg2 = layouts[i + 1]
        entries = []
        for r in range(rh2 + rg2):
            row = []
            for c in range(rh + rg):
                if r >= rh2 and c >= rh:
                    row.append(dG.entries[r - rh2][c - rh])
                else:
                    row.append(TruncPoly.zero(ring))
            entries.append(row)
        diffs[i] = Matrix(entries)
    F = BraneComplex(ring, terms, diffs)
    conns = {}
    for i in F.degrees:
        rh, rg = layouts[i]
        entries = []
        for r in range(rh + rg):
            row = []
            for c in range(rh + rg):
                if r < rh and c < rh:
                    row.append(h_conns[i].A.entries[r][c])
                else:
                    row.append(ExteriorForm.zero(ring, 1))
            entries.append(row)
        conns[i] = Connection(F.term(i), Matrix(entries))
    return F, conns


def semisimple_converse_harness(h_conns: dict, g_modules: dict, delta_g: dict,
                                mode: str, variations: list | None = None,
                                eval_points: list | None = None) -> HarnessReport:
    """On a split brane, check that brane-level stationarity forces each
    induced cohomology connection to pass the orthogonality check."""
    F, conns = build_split_brane(h_conns, g_modules, delta_g)
    ring = F.ring
    if eval_points is None:
        eval_points = [[Scalar(0)] * ring.n_vars]
    gauge = GaugeField(
        F,
        {i: pidentity(ring, F.rank(i)) for i in F.degrees},
        {i: conns[i].A for i in F.degrees},
        {
            i: pzero(ring, F.rank(i - 1), F.rank(i))
            for i in F.degrees
            if F.rank(i - 1)
        },
        F.default_morphism_degree("gauge"),
    )
    if not gauge.verify():
        raise NotCompatible("split family is not a gauge field")

    coh = cohomology(F, eval_points)
    induced = induced_connections(F, gauge, eval_points, coh=coh)
    match = True
    for j, theta in induced.items():
        if j in h_conns and theta.A.shape() == h_conns[j].A.shape():
            if theta.A != h_conns[j].A:
                match = False
        else:
            match = False

    if variations is None:
        from .branes import gauge_solve

        deg_conn = max(
            (
                e.poly_degree()
                for conn in conns.values()
                for row in conn.A.entries
                for e in row
            ),
            default=0,
        )
        cap = min(
            F.default_morphism_degree("gauge"),
            ring.trunc_degree - max(deg_conn, 0),
        )
        variations = gauge_solve(F, morphism_degree=max(cap, 0)).basis

    pairings = {}
    stationary = True
    for idx, var in enumerate(variations):
        report_sum = Scalar(0)
        for j, theta in induced.items():
            xi = descend_variation(F, var, j, eval_points, coh=coh)
            if xi is None:
                continue
            K = theta.curvature_matrix()
            D = theta.end_derivative(xi.matrix, 1)
            value = end_pairing(K, D, mode)
            report_sum = report_sum + (value if j % 2 == 0 else -value)
        pairings[idx] = report_sum
        if not report_sum.is_zero():
            stationary = False

    orthogonality = {}
    all_ok = True
    for j, theta in induced.items():
        report = orthogonality_check(theta, mode)
        orthogonality[j] = report
        all_ok = all_ok and report.passed
    return HarnessReport(match, pairings, stationary, orthogonality, all_ok)
