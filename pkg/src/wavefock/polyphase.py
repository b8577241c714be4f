"""Loop matrices: the polyphase picture of a filter bank.

A bank with filters m_k(z) = sum_j c^(k)_j z^j has the N x N loop matrix

    A_{k,l}(z) = (1/N) sum_{w^N = z} w^(-l) m_k(w),

whose (k, l) entry collects the coefficients c^(k)_{Nm+l} at exponent m.  The
filters are recovered as m_k(z) = sum_l A_{k,l}(z^N) z^l.  Unitarity of A on
the circle characterises the orthogonal case; invertibility with dual loop
Atilde = A^{*-1} characterises the dual-pair case.  The Gram data of the
operator family is carried by AA*(z) and its pointwise inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularLoopError
from .filterbank import FilterBank
from .laurent import (
    DEFAULT_GRID,
    LaurentPoly,
    TorusPoint,
    adjoint_poly,
    poly_from_json,
    poly_to_json,
    torus_grid,
    upsample,
)

SINGULAR_TOL = 1e-10


class LoopMatrix:
    """N x N matrix of Laurent polynomials; rows index filters, columns phases."""

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        N = len(entries)
        if any(len(row) != N for row in entries):
            raise ValueError("loop matrix must be square")
        self.N = N
        self.entries = entries

    @classmethod
    def identity(cls, N: int) -> "LoopMatrix":
        return cls(
            [
                [LaurentPoly.one() if i == j else LaurentPoly.zero() for j in range(N)]
                for i in range(N)
            ]
        )

    @classmethod
    def from_constant(cls, mat) -> "LoopMatrix":
        mat = np.asarray(mat)
        return cls(
            [[LaurentPoly({0: mat[i, j]}) for j in range(mat.shape[1])] for i in range(mat.shape[0])]
        )

    def __matmul__(self, other: "LoopMatrix") -> "LoopMatrix":
        if self.N != other.N:
            raise ValueError("size mismatch")
        out = []
        for i in range(self.N):
            row = []
            for j in range(self.N):
                acc = LaurentPoly.zero()
                for k in range(self.N):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return LoopMatrix(out)

    def adjoint(self) -> "LoopMatrix":
        """Pointwise conjugate transpose as a Laurent-matrix function."""
        return LoopMatrix(
            [[adjoint_poly(self.entries[j][i]) for j in range(self.N)] for i in range(self.N)]
        )

    def sample(self, z: TorusPoint) -> np.ndarray:
        return np.array(
            [[self.entries[i][j].eval(z) for j in range(self.N)] for i in range(self.N)]
        )

    def sample_grid(self, grid: int = DEFAULT_GRID) -> np.ndarray:
        out = np.zeros((grid, self.N, self.N), dtype=complex)
        for i in range(self.N):
            for j in range(self.N):
                out[:, i, j] = self.entries[i][j].eval_grid(grid)
        return out

    def max_abs_exp(self) -> int:
        m = 0
        for row in self.entries:
            for p in row:
                if not p.is_zero:
                    m = max(m, abs(p.min_exp), abs(p.max_exp))
        return m

    def isclose(self, other: "LoopMatrix", tol: float = 1e-12) -> bool:
        return all(
            self.entries[i][j].isclose(other.entries[i][j], tol)
            for i in range(self.N)
            for j in range(self.N)
        )

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "entries": [[poly_to_json(p) for p in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LoopMatrix":
        if not isinstance(obj, dict) or "entries" not in obj:
            raise ValueError("loop JSON must have key 'entries'")
        return cls([[poly_from_json(p) for p in row] for row in obj["entries"]])

    def __repr__(self):
        return f"LoopMatrix(N={self.N}, max_abs_exp={self.max_abs_exp()})"


@dataclass
class SampledLoop:
    """Pointwise values of a loop on the grid; used when no exact Laurent
    inverse exists (determinant is not a monomial unit)."""

    N: int
    grid: int
    values: np.ndarray  # shape (grid, N, N)
    exact: bool = False


# ----------------------------------------------------------------------
# filters <-> loop


def loop_from_filters(bank: FilterBank):
    """Loop matrices (A, Atilde or None) of a bank, by coefficient splitting."""

    def one_side(filters):
        rows = []
        for m in filters:
            row = []
            for l in range(bank.N):
                row.append(
                    LaurentPoly(
                        {
                            (k - l) // bank.N: c
                            for k, c in m.coeffs().items()
                            if (k - l) % bank.N == 0
                        }
                    )
                )
            rows.append(row)
        return LoopMatrix(rows)

    A = one_side(bank.filters)
    At = None if bank.dual_filters is None else one_side(bank.dual_filters)
    return A, At


def filters_from_loop(A: LoopMatrix) -> FilterBank:
    """Bank with m_k(z) = sum_l A_{k,l}(z^N) z^l (primary side only)."""
    N = A.N
    filters = []
    for k in range(N):
        m = LaurentPoly.zero()
        for l in range(N):
            m = m + upsample(A.entries[k][l], N).shift(l)
        filters.append(m)
    return FilterBank(N, filters)


# ----------------------------------------------------------------------
# determinants and the dual loop


def loop_det(A: LoopMatrix) -> LaurentPoly:
    """Determinant by cofactor expansion; fine for the small N in scope."""
    ent = A.entries

    def det(rows, cols):
        if len(rows) == 1:
            return ent[rows[0]][cols[0]]
        total = LaurentPoly.zero()
        r0 = rows[0]
        for pos, c in enumerate(cols):
            minor = det(rows[1:], cols[:pos] + cols[pos + 1 :])
            term = ent[r0][c] * minor
            total = total + (term if pos % 2 == 0 else -term)
        return total

    idx = list(range(A.N))
    return det(idx, idx)


def loop_adjugate(A: LoopMatrix) -> LoopMatrix:
    """Adjugate matrix: adj(A)_{ij} = (-1)^(i+j) det(minor_ji)."""
    ent = A.entries
    idx = list(range(A.N))

    def minor_det(r, c):
        rows = [i for i in idx if i != r]
        cols = [j for j in idx if j != c]
        sub = LoopMatrix([[ent[i][j] for j in cols] for i in rows]) if rows else None
        return loop_det(sub) if sub else LaurentPoly.one()

    out = []
    for i in range(A.N):
        row = []
        for j in range(A.N):
            d = minor_det(j, i)
            row.append(d if (i + j) % 2 == 0 else -d)
        out.append(row)
    return LoopMatrix(out)


def as_monomial_unit(p: LaurentPoly, eps: float = 1e-12):
    """Return (exponent, coeff) if p is a single monomial with nonzero
    coefficient once terms below eps (relative) are discarded, else None."""
    if p.is_zero:
        return None
    top = p.coeff_sup()
    terms = [(k, c) for k, c in p.coeffs().items() if abs(c) > eps * top]
    if len(terms) != 1:
        return None
    return terms[0]


def _check_invertible_on_grid(A: LoopMatrix, grid: int):
    det_vals = loop_det(A).eval_grid(grid)
    worst = float(np.min(np.abs(det_vals)))
    if worst < SINGULAR_TOL:
        raise SingularLoopError(
            f"|det A| reaches {worst:.3e} on the grid; loop is not invertible"
        )
    return det_vals


def dual_loop(A: LoopMatrix, grid: int = DEFAULT_GRID):
    """The dual loop Atilde = A^{*-1}.

    Exact Laurent result when det A is a monomial unit (adjugate divided by a
    monomial is again a Laurent matrix); otherwise a `SampledLoop` holding the
    pointwise inverse of A(z)^* on the grid.
    """
    _check_invertible_on_grid(A, grid)
    A_star = A.adjoint()
    det_star = loop_det(A_star)
    unit = as_monomial_unit(det_star)
    if unit is not None:
        exp, coeff = unit
        adj = loop_adjugate(A_star)
        inv = LoopMatrix(
            [[p.shift(-exp) * (1.0 / coeff) for p in row] for row in adj.entries]
        )
        return inv
    vals = A_star.sample_grid(grid)
    return SampledLoop(N=A.N, grid=grid, values=np.linalg.inv(vals), exact=False)


def loop_pair_residual(A: LoopMatrix, At, grid: int = DEFAULT_GRID) -> float:
    """sup over the grid of ||A(z)^* Atilde(z) - I|| (spectral norm)."""
    a_star = A.adjoint().sample_grid(grid)
    if isinstance(At, LoopMatrix):
        b = At.sample_grid(grid)
    else:
        if At.grid != grid:
            raise ValueError("sampled loop grid does not match requested grid")
        b = At.values
    eye = np.eye(A.N)
    return float(max(np.linalg.norm(a_star[t] @ b[t] - eye, 2) for t in range(grid)))


def loop_unitarity_residual(A: LoopMatrix, grid: int = DEFAULT_GRID) -> float:
    """sup over the grid of ||A(z) A(z)^* - I||."""
    vals = A.sample_grid(grid)
    eye = np.eye(A.N)
    return float(
        max(np.linalg.norm(vals[t] @ vals[t].conj().T - eye, 2) for t in range(grid))
    )


# ----------------------------------------------------------------------
# modulation matrices


def modulation_matrix(bank: FilterBank, z: TorusPoint, dual: bool = False) -> np.ndarray:
    """M(z)[k, l] = (1/sqrt N) m_k(w_l) over the principal root fiber w_l of z."""
    N = bank.N
    filters = bank.duals_or_primaries if dual else bank.filters
    fiber = [z.root(N, l) for l in range(N)]
    M = np.array([[m.eval(w) for w in fiber] for m in filters])
    return M / np.sqrt(N)


def modulation_matrix_check(bank: FilterBank, grid: int = DEFAULT_GRID):
    """(pair residual, unitarity residual), each a sup over the grid.

    The pair residual measures ||M(z)^* Mtilde(z) - I||; the unitarity
    residual measures ||M(z)^* M(z) - I||.  They coincide for self-dual banks.
    """
    eye = np.eye(bank.N)
    pair = 0.0
    unit = 0.0
    for z in torus_grid(grid):
        M = modulation_matrix(bank, z)
        unit = max(unit, float(np.linalg.norm(M.conj().T @ M - eye, 2)))
        if bank.is_self_dual:
            pair = unit
        else:
            Mt = modulation_matrix(bank, z, dual=True)
            pair = max(pair, float(np.linalg.norm(M.conj().T @ Mt - eye, 2)))
    return pair, unit


# ----------------------------------------------------------------------
# Gram data


@dataclass
class GramMatrixFunction:
    """AA*(z) with its pointwise inverse and the assembled doubled matrix.

    choi_points[t] is the 2N x 2N block matrix [[AA*, I], [I, (AA*)^-1]] at
    grid point t.  It is Hermitian PSD of rank N at every point: it factors
    as [Y; Y^-*][Y; Y^-*]^* for any square root Y of AA*.
    """

    N: int
    grid: int
    gram: list  # N x N nested list of LaurentPoly for AA*
    samples: np.ndarray  # (grid, N, N) values of AA*
    inverses: np.ndarray  # (grid, N, N) pointwise inverses
    choi_points: np.ndarray  # (grid, 2N, 2N)
    min_eigs: np.ndarray  # (grid,)
    ranks: np.ndarray  # (grid,) at tolerance

    def gram_entry(self, i: int, j: int) -> LaurentPoly:
        return self.gram[i][j]

    def report(self) -> dict:
        return {
            "N": self.N,
            "grid": self.grid,
            "min_eigenvalue": float(np.min(self.min_eigs)),
            "rank_min": int(np.min(self.ranks)),
            "rank_max": int(np.max(self.ranks)),
        }


def gram_entries(bank: FilterBank) -> list:
    """The exact Laurent matrix AA*(z) of the primary loop."""
    A, _ = loop_from_filters(bank)
    N = bank.N
    out = []
    for i in range(N):
        row = []
        for j in range(N):
            acc = LaurentPoly.zero()
            for k in range(N):
                acc = acc + A.entries[i][k] * adjoint_poly(A.entries[j][k])
            row.append(acc)
        out.append(row)
    return out


def gram_function(
    bank: FilterBank, grid: int = DEFAULT_GRID, rank_tol: float = 1e-8
) -> GramMatrixFunction:
    """Assemble AA*(z) exactly and the doubled positive matrix on the grid."""
    A, _ = loop_from_filters(bank)
    _check_invertible_on_grid(A, grid)
    N = bank.N
    gram = gram_entries(bank)

    samples = np.zeros((grid, N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            samples[:, i, j] = gram[i][j].eval_grid(grid)
    inverses = np.linalg.inv(samples)

    eye = np.eye(N)
    choi_points = np.zeros((grid, 2 * N, 2 * N), dtype=complex)
    choi_points[:, :N, :N] = samples
    choi_points[:, :N, N:] = eye
    choi_points[:, N:, :N] = eye
    choi_points[:, N:, N:] = inverses

    eigs = np.linalg.eigvalsh(0.5 * (choi_points + choi_points.conj().transpose(0, 2, 1)))
    min_eigs = eigs[:, 0]
    ranks = (eigs > rank_tol * np.maximum(eigs[:, -1:], 1e-300)).sum(axis=1)

    return GramMatrixFunction(
        N=N,
        grid=grid,
        gram=gram,
        samples=samples,
        inverses=inverses,
        choi_points=choi_points,
        min_eigs=min_eigs,
        ranks=ranks,
    )
