"""Free-module model of sheaves: jet pairs, splittings, connections,
curvature.

A section of a rank-r free module is a vector of polynomials; a jet pair
carries a section together with a vector of 1-forms, with the twisted
scalar action f.(sigma, beta) = (f sigma, f beta + df sigma).  Splittings
of the jet projection correspond exactly to connections d + A.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeMismatch, NotASplitting, SizeMismatch
from .exact import ExteriorForm, Matrix, Ring, TruncPoly


@dataclass(frozen=True)
class FreeModule:
    ring: Ring
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise SizeMismatch("module rank must be positive")

    def zero_section(self) -> "FormVector":
        return FormVector.zero(self, 0)

    def basis_section(self, k: int) -> "FormVector":
        entries = [
            ExteriorForm.from_poly(
                TruncPoly.constant(self.ring, 1 if i == k else 0)
            )
            for i in range(self.rank)
        ]
        return FormVector(self, 0, entries)


class FormVector:
    """A module element with values in degree-k forms (uniform degree)."""

    __slots__ = ("module", "degree", "entries")

    def __init__(self, module: FreeModule, degree: int, entries):
        entries = list(entries)
        if len(entries) != module.rank:
            raise SizeMismatch("entry count does not match module rank")
        for e in entries:
            if e.degree != degree:
                raise DegreeMismatch("nonuniform degree in form vector")
        self.module = module
        self.degree = degree
        self.entries = entries

    @staticmethod
    def zero(module: FreeModule, degree: int) -> "FormVector":
        return FormVector(
            module,
            degree,
            [ExteriorForm.zero(module.ring, degree) for _ in range(module.rank)],
        )

    @staticmethod
    def from_polys(module: FreeModule, polys) -> "FormVector":
        return FormVector(
            module, 0, [ExteriorForm.from_poly(p) for p in polys]
        )

    def polys(self) -> list[TruncPoly]:
        if self.degree != 0:
            raise DegreeMismatch("only degree-0 vectors unwrap to polynomials")
        return [e.component(()) for e in self.entries]

    def __add__(self, other: "FormVector") -> "FormVector":
        if self.module != other.module or self.degree != other.degree:
            raise SizeMismatch("form vectors not compatible")
        return FormVector(
            self.module,
            self.degree,
            [a + b for a, b in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        return FormVector(self.module, self.degree, [-a for a in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value) -> "FormVector":
        return FormVector(
            self.module, self.degree, [e.scale(value) for e in self.entries]
        )

    def exterior_d(self) -> "FormVector":
        return FormVector(
            self.module, self.degree + 1, [e.exterior_d() for e in self.entries]
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, FormVector):
            return NotImplemented
        return (
            self.module == other.module
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"FormVector({', '.join(str(e) for e in self.entries)})"


class JetElement:
    """A pair (section, 1-form part) of the jet of a free module."""

    __slots__ = ("sigma", "beta")

    def __init__(self, sigma: FormVector, beta: FormVector):
        if sigma.module != beta.module:
            raise SizeMismatch("jet parts live over different modules")
        if sigma.degree != 0 or beta.degree != 1:
            raise DegreeMismatch("jet element needs a (0-form, 1-form) pair")
        self.sigma = sigma
        self.beta = beta

    def __add__(self, other):
        return JetElement(self.sigma + other.sigma, self.beta + other.beta)

    def __sub__(self, other):
        return JetElement(self.sigma - other.sigma, self.beta - other.beta)

    def is_zero(self):
        return self.sigma.is_zero() and self.beta.is_zero()

    def __eq__(self, other):
        if not isinstance(other, JetElement):
            return NotImplemented
        return self.sigma == other.sigma and self.beta == other.beta

    def __repr__(self):
        return f"JetElement(sigma={self.sigma!r}, beta={self.beta!r})"


def jet_action(f: TruncPoly, j: JetElement) -> JetElement:
    """Twisted scalar action f.(sigma, beta) = (f sigma, f beta + df sigma)."""
    df = ExteriorForm.from_poly(f).exterior_d()
    sigma = j.sigma.scale(f)
    beta = j.beta.scale(f) + FormVector(
        j.sigma.module,
        1,
        [df.scale(p) for p in j.sigma.polys()],
    )
    return JetElement(sigma, beta)


def jet_inclusion(sigma: FormVector) -> JetElement:
    """Embed a section with vanishing 1-form part.

    This is additive but not module-linear: the defect against the twisted
    action is exactly (0, df tensor sigma)."""
    return JetElement(sigma, FormVector.zero(sigma.module, 1))


def jet_projection(j: JetElement) -> FormVector:
    return j.sigma


def omega_inclusion(beta: FormVector) -> JetElement:
    """Embed a 1-form part with vanishing section: the kernel of the
    projection."""
    return JetElement(FormVector.zero(beta.module, 0), beta)


def poly_identity(ring: Ring, n: int) -> Matrix:
    return Matrix.identity(
        n, TruncPoly.constant(ring, 1), TruncPoly.zero(ring)
    )


def form_zero_matrix(ring: Ring, rows: int, cols: int, degree: int = 1) -> Matrix:
    return Matrix.build(
        rows, cols, lambda r, c: ExteriorForm.zero(ring, degree)
    )


class JetMorphism:
    """A module morphism into the jet, pinned by matrices (B, A).

    The underlying map sends a section s to (B s, B ds + A s); this is the
    general shape of a morphism that is linear for the twisted action.
    """

    __slots__ = ("module", "B", "A")

    def __init__(self, module: FreeModule, B: Matrix, A: Matrix):
        r = module.rank
        if B.shape() != (r, r) or A.shape() != (r, r):
            raise SizeMismatch("jet morphism blocks must be rank x rank")
        self.module = module
        self.B = B
        self.A = A

    def __call__(self, s: FormVector) -> JetElement:
        sigma = FormVector(
            self.module, 0, [e for e in _apply_poly(self.B, s)]
        )
        beta_entries = [
            a + b
            for a, b in zip(
                _apply_poly(self.B, s.exterior_d()), self.A.apply(s.entries)
            )
        ]
        return JetElement(sigma, FormVector(self.module, 1, beta_entries))

    def projection_part(self) -> Matrix:
        return self.B


def _apply_poly(M: Matrix, v: FormVector) -> list:
    # poly matrix times form vector, entrywise scaling
    out = []
    for r in range(M.rows):
        acc = v.entries[0].scale(M.entries[r][0])
        for k in range(1, M.cols):
            acc = acc + v.entries[k].scale(M.entries[r][k])
        out.append(acc)
    return out


class Connection:
    """A holomorphic connection d + A on a free module; A is a matrix of
    1-forms and sections differentiate as ds + A s."""

    __slots__ = ("module", "A")

    def __init__(self, module: FreeModule, A: Matrix):
        r = module.rank
        if A.shape() != (r, r):
            raise SizeMismatch("connection matrix must be rank x rank")
        for row in A.entries:
            for e in row:
                if e.degree != 1:
                    raise DegreeMismatch("connection matrix entries must be 1-forms")
        self.module = module
        self.A = A

    @staticmethod
    def flat(module: FreeModule) -> "Connection":
        return Connection(
            module, form_zero_matrix(module.ring, module.rank, module.rank)
        )

    def apply(self, s: FormVector) -> FormVector:
        if s.degree != 0:
            raise DegreeMismatch("connections differentiate sections")
        return self.extend(s)

    def extend(self, omega: FormVector) -> FormVector:
        """Covariant derivative on k-form-valued elements.

        Computed as d(omega) + A wedge omega, which agrees with the
        Leibniz extension d(w) s + (-1)^k w ^ (del s) on decomposables."""
        return FormVector(
            self.module,
            omega.degree + 1,
            [
                a + b
                for a, b in zip(
                    omega.exterior_d().entries, self.A.apply(omega.entries)
                )
            ],
        )

    def curvature_matrix(self) -> Matrix:
        """The matrix dA + A ^ A of 2-forms."""
        return self.A.map(lambda e: e.exterior_d()) + (self.A @ self.A)

    def curvature(self) -> "HomElement":
        return HomElement(self.module, self.module, 2, self.curvature_matrix())

    def curvature_by_composition(self) -> "HomElement":
        """Independent path: evaluate nabla^(1) . nabla on basis sections."""
        cols = []
        for k in range(self.module.rank):
            e_k = self.module.basis_section(k)
            cols.append(self.extend(self.apply(e_k)).entries)
        matrix = Matrix.build(
            self.module.rank, self.module.rank, lambda r, c: cols[c][r]
        )
        return HomElement(self.module, self.module, 2, matrix)

    def end_derivative(self, M: Matrix, p: int) -> Matrix:
        """Covariant derivative on End-valued p-forms:
        dM + A^M - (-1)^p M^A."""
        out = M.map(lambda e: e.exterior_d()) + (self.A @ M)
        correction = M @ self.A
        if p % 2 == 0:
            return out - correction
        return out + correction

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.module == other.module and self.A == other.A

    def __repr__(self):
        return f"Connection(rank={self.module.rank}, A={self.A!r})"


class HomElement:
    """A k-form-valued morphism between free modules (matrix of k-forms)."""

    __slots__ = ("source", "target", "degree", "matrix")

    def __init__(self, source: FreeModule, target: FreeModule, degree: int, matrix: Matrix):
        if matrix.shape() != (target.rank, source.rank):
            raise SizeMismatch("hom element matrix has wrong shape")
        for row in matrix.entries:
            for e in row:
                if e.degree != degree:
                    raise DegreeMismatch("hom element entries of wrong degree")
        self.source = source
        self.target = target
        self.degree = degree
        self.matrix = matrix

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __add__(self, other):
        return HomElement(self.source, self.target, self.degree, self.matrix + other.matrix)

    def __sub__(self, other):
        return HomElement(self.source, self.target, self.degree, self.matrix - other.matrix)

    def scale(self, value):
        return HomElement(self.source, self.target, self.degree, self.matrix.scale(value))

    def __eq__(self, other):
        if not isinstance(other, HomElement):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.matrix == other.matrix
        )

    def __repr__(self):
        return f"HomElement(degree={self.degree}, matrix={self.matrix!r})"


def splitting_to_connection(phi: JetMorphism) -> Connection:
    """Read a connection off a splitting of the jet projection."""
    ring = phi.module.ring
    if phi.B != poly_identity(ring, phi.module.rank):
        raise NotASplitting("projection composed with the morphism is not the identity")
    return Connection(phi.module, phi.A)


def connection_to_splitting(conn: Connection) -> JetMorphism:
    return JetMorphism(
        conn.module, poly_identity(conn.module.ring, conn.module.rank), conn.A
    )


def leibniz_defect(conn: Connection, f: TruncPoly, s: FormVector) -> FormVector:
    """nabla(f s) - df s - f nabla(s); identically zero for connections."""
    df = ExteriorForm.from_poly(f).exterior_d()
    lhs = conn.apply(s.scale(f))
    rhs = FormVector(
        s.module, 1, [df.scale(p) for p in s.polys()]
    ) + conn.apply(s).scale(f)
    return lhs - rhs


def bianchi_check(conn: Connection) -> bool:
    """Second covariant derivative of the curvature vanishes identically."""
    K = conn.curvature_matrix()
    return conn.end_derivative(K, 2).is_zero()
