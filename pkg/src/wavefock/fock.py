"""Fock space of a positive block matrix: Grams, quotients, creation operators.

A system of N letters over a d-dimensional base space is encoded by an
(Nd) x (Nd) positive block matrix P with d x d blocks p_ij.  Level k of the
pre-Fock space is spanned by word tensors w (x) h; its Gram has the block
entry p_{w_1 w'_1} ... p_{w_k w'_k}.  Quotienting by the Gram kernel gives a
finite-dimensional truncated Fock space on which the letter-prepending
creation operators act; their compressions recover p_ij through T_i* T_j.

Everything is dense numpy; the level caps keep eigendecompositions cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPsdError, NotUnitaryError, SizeCapError

PSD_HARD = 1e-8
PSD_WARN = 1e-10
RANK_CUTOFF = 1e-10
SIZE_CAP = 4096
LETTER_CAP = 16
MAX_LEVEL = 4


# ----------------------------------------------------------------------
# the block matrix


@dataclass(frozen=True)
class ChoiMatrix:
    """N letters over a d-dimensional base space; matrix is (Nd) x (Nd)."""

    N: int
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise ValueError("N and d must be positive")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.N * self.d, self.N * self.d):
            raise ValueError(f"matrix must be {self.N * self.d} square")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix, d: int = 1) -> "ChoiMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        n, _ = matrix.shape
        if n % d:
            raise ValueError("matrix size is not a multiple of d")
        return cls(n // d, d, matrix)

    def block(self, i: int, j: int) -> np.ndarray:
        d = self.d
        return self.matrix[i * d : (i + 1) * d, j * d : (j + 1) * d]

    def blocks(self) -> np.ndarray:
        """All blocks as an (N, N, d, d) array."""
        N, d = self.N, self.d
        return self.matrix.reshape(N, d, N, d).transpose(0, 2, 1, 3)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "blocks": [
                [[float(x.real), float(x.imag)] for x in row] for row in self.matrix
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChoiMatrix":
        try:
            N, d = int(obj["N"]), int(obj["d"])
            rows = obj["blocks"]
            matrix = np.array(
                [[complex(re, im) for re, im in row] for row in rows], dtype=complex
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed block matrix document: {exc}") from exc
        return cls(N, d, matrix)


@dataclass
class ChoiReport:
    hermiticity_residual: float
    eigenvalues: np.ndarray
    rank: int
    norm: float
    kernel: np.ndarray
    warning: bool

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def to_json(self) -> dict:
        return {
            "hermiticity_residual": self.hermiticity_residual,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "min_eigenvalue": self.min_eigenvalue,
            "rank": self.rank,
            "norm": self.norm,
            "kernel_dimension": int(self.kernel.shape[1]),
            "warning": self.warning,
        }


def validate_choi(P: ChoiMatrix, hard: float = PSD_HARD, warn: float = PSD_WARN) -> ChoiReport:
    """Hermiticity and spectrum report; hard failure below -`hard`."""
    m = P.matrix
    herm = float(np.linalg.norm(m - m.conj().T, 2))
    sym = (m + m.conj().T) / 2
    eigvals, eigvecs = np.linalg.eigh(sym)
    lo = float(eigvals[0])
    if lo < -hard:
        raise NotPsdError(f"minimum eigenvalue {lo:.3e} below -{hard:.0e}")
    rank = int(np.sum(eigvals > RANK_CUTOFF * max(eigvals[-1], 1.0)))
    kernel = eigvecs[:, : m.shape[0] - rank]
    return ChoiReport(
        hermiticity_residual=herm,
        eigenvalues=eigvals,
        rank=rank,
        norm=float(max(eigvals[-1], 0.0)),
        kernel=kernel,
        warning=lo < -warn or herm > warn,
    )


# ----------------------------------------------------------------------
# level Grams and quotients


def _level_size(P: ChoiMatrix, k: int, size_cap: int) -> int:
    size = P.N**k * P.d
    if size > size_cap:
        raise SizeCapError(f"level {k} needs {size} spanning vectors (cap {size_cap})")
    return size


def level_gram(P: ChoiMatrix, k: int, size_cap: int = SIZE_CAP) -> np.ndarray:
    """Gram of level k in word-major order, i_1 most significant.

    Recursion: prepending letters multiplies the new block on the left,
    G_{k+1}[(i w), (j w')] = p_ij G_k[w, w'].  Products of noncommuting
    blocks need not produce a Hermitian matrix; that failure aborts the run
    rather than being symmetrized away.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    size = _level_size(P, k, size_cap)
    d = P.d
    G = np.eye(d, dtype=complex)
    blocks = P.blocks()
    for level in range(1, k + 1):
        prev = G.shape[0] // d
        g4 = G.reshape(prev, d, prev, d)
        G = np.einsum("ijab,wbvc->iwajvc", blocks, g4).reshape(
            P.N * prev * d, P.N * prev * d
        )
        drift = float(np.linalg.norm(G - G.conj().T, 2))
        scale = max(1.0, P.norm**level)
        if drift > PSD_HARD * scale:
            raise NotPsdError(
                f"level {level} Gram is not Hermitian (drift {drift:.3e}); "
                "noncommuting blocks break the word-product form"
            )
        G = (G + G.conj().T) / 2
        if G.shape[0] <= 2048:
            lo = float(np.linalg.eigvalsh(G)[0])
            if lo < -PSD_HARD * scale:
                raise NotPsdError(f"level {level} Gram eigenvalue {lo:.3e}")
    assert G.shape[0] == size
    return G


@dataclass
class KernelReport:
    k: int
    basis: np.ndarray
    predicted_dim: int | None
    spanning_residual: float | None

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    @property
    def matches_prediction(self) -> bool | None:
        if self.predicted_dim is None:
            return None
        return self.dim == self.predicted_dim

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "dimension": self.dim,
            "predicted_dimension": self.predicted_dim,
            "matches_prediction": self.matches_prediction,
            "spanning_residual": self.spanning_residual,
        }


def level_kernel(
    P: ChoiMatrix,
    k: int,
    size_cap: int = SIZE_CAP,
    rng: np.random.Generator | None = None,
) -> KernelReport:
    """Kernel of the level-k Gram with the scalar-case cross-checks.

    For d = 1 the Gram is an exact Kronecker power, so the kernel dimension
    is N^k - r^k and is spanned by word tensors with one factor in ker P;
    both facts are verified.  No closed form is attempted for d > 1.
    """
    G = level_gram(P, k, size_cap)
    eigvals, eigvecs = np.linalg.eigh(G)
    cutoff = RANK_CUTOFF * max(float(eigvals[-1]), 1.0)
    n_kernel = int(np.sum(eigvals <= cutoff))
    basis = eigvecs[:, :n_kernel]

    predicted = None
    spanning = None
    if P.d == 1:
        choi_report = validate_choi(P)
        predicted = P.N**k - choi_report.rank**k
        if k >= 1 and predicted > 0:
            kerP = choi_report.kernel
            rng = rng or np.random.default_rng(0)
            worst = 0.0
            for pos in range(k):
                for col in range(kerP.shape[1]):
                    factors = [
                        rng.standard_normal(P.N) + 1j * rng.standard_normal(P.N)
                        for _ in range(k)
                    ]
                    factors[pos] = kerP[:, col]
                    t = factors[0]
                    for f in factors[1:]:
                        t = np.kron(t, f)
                    nrm = np.linalg.norm(t)
                    if nrm > 0:
                        worst = max(worst, float(np.linalg.norm(G @ t) / nrm))
            spanning = worst
        elif predicted == 0:
            spanning = 0.0
    return KernelReport(k=k, basis=basis, predicted_dim=predicted, spanning_residual=spanning)


def quotient_basis(
    P: ChoiMatrix, k: int, size_cap: int = SIZE_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """(V_k, G_k) with V_k* G_k V_k = I on the quotient of level k."""
    G = level_gram(P, k, size_cap)
    eigvals, eigvecs = np.linalg.eigh(G)
    cutoff = RANK_CUTOFF * max(float(eigvals[-1]), 1.0)
    keep = eigvals > cutoff
    V = eigvecs[:, keep] / np.sqrt(eigvals[keep])
    return V, G


# ----------------------------------------------------------------------
# the truncated space and its creation operators


@dataclass
class FockLevel:
    k: int
    gram: np.ndarray
    quotient: np.ndarray  # V_k
    kernel: np.ndarray

    @property
    def q(self) -> int:
        return int(self.quotient.shape[1])


@dataclass
class TruncatedFock:
    choi: ChoiMatrix
    K: int
    levels: list = field(default_factory=list)

    def level(self, k: int) -> FockLevel:
        return self.levels[k]

    @property
    def quotient_dims(self) -> list:
        return [lvl.q for lvl in self.levels]

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "quotient_dims": self.quotient_dims,
            "kernel_dims": [int(lvl.kernel.shape[1]) for lvl in self.levels],
            "gram_norms": [float(np.linalg.norm(lvl.gram, 2)) for lvl in self.levels],
        }


def truncated_fock(
    P: ChoiMatrix,
    K: int,
    size_cap: int = SIZE_CAP,
    max_level: int = MAX_LEVEL,
    letter_cap: int = LETTER_CAP,
) -> TruncatedFock:
    if K > max_level:
        raise SizeCapError(f"truncation level {K} above cap {max_level}")
    if P.N * P.d > letter_cap:
        raise SizeCapError(f"N*d = {P.N * P.d} above cap {letter_cap}")
    validate_choi(P)
    levels = []
    for k in range(K + 1):
        G = level_gram(P, k, size_cap)
        eigvals, eigvecs = np.linalg.eigh(G)
        cutoff = RANK_CUTOFF * max(float(eigvals[-1]), 1.0)
        keep = eigvals > cutoff
        V = eigvecs[:, keep] / np.sqrt(eigvals[keep])
        levels.append(FockLevel(k=k, gram=G, quotient=V, kernel=eigvecs[:, ~keep]))
    return TruncatedFock(choi=P, K=K, levels=levels)


def prepend_embedding(N: int, d: int, k: int, i: int) -> np.ndarray:
    """E_i: level-k spanning coordinates -> level-(k+1), word w -> iw."""
    size = N**k * d
    E = np.zeros((N * size, size))
    E[i * size : (i + 1) * size, :] = np.eye(size)
    return E


@dataclass
class CreationOps:
    """Quotient matrices of T_i between consecutive truncation levels."""

    fock: TruncatedFock
    ops: list  # ops[k][i]: level k -> k+1
    well_definedness_residual: float

    @property
    def N(self) -> int:
        return self.fock.choi.N

    @property
    def K(self) -> int:
        return self.fock.K

    def op(self, i: int, k: int) -> np.ndarray:
        return self.ops[k][i]

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "quotient_dims": self.fock.quotient_dims,
            "well_definedness_residual": self.well_definedness_residual,
        }


def creation_matrices(
    P: ChoiMatrix,
    K: int,
    size_cap: int = SIZE_CAP,
    max_level: int = MAX_LEVEL,
    letter_cap: int = LETTER_CAP,
) -> CreationOps:
    """T_i^(k) = V_{k+1}* G_{k+1} E_i V_k for all letters and levels k < K.

    Letter-prepending maps Gram-null vectors to Gram-null vectors; the
    returned residual is the worst squared Phi-norm of such an image (the
    quadratic form itself; its square root sits at sqrt(eps) even for exact
    kernels, so the form is the meaningful zero test).
    """
    fock = truncated_fock(P, K, size_cap, max_level, letter_cap)
    ops = []
    worst = 0.0
    for k in range(K):
        lvl, nxt = fock.level(k), fock.level(k + 1)
        row = []
        for i in range(P.N):
            E = prepend_embedding(P.N, P.d, k, i)
            row.append(nxt.quotient.conj().T @ nxt.gram @ E @ lvl.quotient)
            ker = lvl.kernel
            if ker.shape[1]:
                img = E @ ker
                sq = np.einsum("ij,ik,kj->j", img.conj(), nxt.gram, img).real
                worst = max(worst, float(np.abs(sq).max()))
        ops.append(row)
    return CreationOps(fock=fock, ops=ops, well_definedness_residual=worst)


# ----------------------------------------------------------------------
# relation checks


def _blocks_commute(P: ChoiMatrix, tol: float = 1e-10) -> bool:
    blocks = P.blocks().reshape(P.N * P.N, P.d, P.d)
    for a in range(blocks.shape[0]):
        for b in range(a + 1, blocks.shape[0]):
            comm = blocks[a] @ blocks[b] - blocks[b] @ blocks[a]
            if np.linalg.norm(comm, 2) > tol:
                return False
    return True


@dataclass
class TstarTReport:
    vacuum_residual: float
    general_residual: float
    commuting: bool
    norm_law_residual: float | None
    norm_law_argmax: int | None
    gram_norm_gap: float
    attainment_gap: float | None

    def to_json(self) -> dict:
        return {
            "vacuum_residual": self.vacuum_residual,
            "general_residual": self.general_residual,
            "commuting": self.commuting,
            "norm_law_residual": self.norm_law_residual,
            "norm_law_argmax": self.norm_law_argmax,
            "gram_norm_gap": self.gram_norm_gap,
            "attainment_gap": self.attainment_gap,
        }


def tstar_t_check(ops: CreationOps, P: ChoiMatrix | None = None) -> TstarTReport:
    """T_i* T_j against the block data of P.

    (a) on the vacuum level the product matrix is p_ij exactly;
    (b) at level k it is the quotient compression of w (x) h -> w (x) p_ij h;
    (c) for pairwise commuting blocks the largest ||T_i* T_i|| over levels
        equals ||p_ii|| and is attained on the vacuum;
    (d) ||G_k|| <= ||P||^k, attained for d = 1 by top-eigenvector powers.
    """
    P = P or ops.fock.choi
    fock = ops.fock
    N, d = P.N, P.d
    vacuum = 0.0
    general = 0.0
    for i in range(N):
        for j in range(N):
            prod = ops.op(i, 0).conj().T @ ops.op(j, 0)
            vacuum = max(vacuum, float(np.linalg.norm(prod - P.block(i, j), 2)))
            for k in range(ops.K):
                lvl = fock.level(k)
                target = (
                    lvl.quotient.conj().T
                    @ lvl.gram
                    @ np.kron(np.eye(N**k), P.block(i, j))
                    @ lvl.quotient
                )
                prod_k = ops.op(i, k).conj().T @ ops.op(j, k)
                general = max(general, float(np.linalg.norm(prod_k - target, 2)))

    commuting = _blocks_commute(P)
    norm_law = None
    argmax = None
    if commuting:
        norm_law = 0.0
        for i in range(N):
            target = float(np.linalg.norm(P.block(i, i), 2))
            norms = [
                float(np.linalg.norm(ops.op(i, k).conj().T @ ops.op(i, k), 2))
                for k in range(ops.K)
            ]
            best = int(np.argmax(norms))
            # strictness guard is relative: quotient conditioning can push a
            # higher level above the vacuum norm by ~1e-12 of pure roundoff
            if best != 0 and norms[best] > norms[0] + 1e-9 * max(1.0, norms[0]):
                argmax = best
            norm_law = max(norm_law, abs(max(norms) - target))
        argmax = argmax or 0

    pnorm = P.norm
    gap = 0.0
    attain = None
    for k in range(ops.K + 1):
        gk = float(np.linalg.norm(fock.level(k).gram, 2))
        gap = max(gap, (gk - pnorm**k) / max(1.0, pnorm**k))
    if d == 1:
        attain = 0.0
        eigvals, eigvecs = np.linalg.eigh((P.matrix + P.matrix.conj().T) / 2)
        top = eigvecs[:, -1]
        for k in range(1, ops.K + 1):
            t = top
            for _ in range(k - 1):
                t = np.kron(t, top)
            rayleigh = float((t.conj() @ fock.level(k).gram @ t).real)
            attain = max(attain, abs(pnorm**k - rayleigh) / max(1.0, pnorm**k))
    return TstarTReport(
        vacuum_residual=vacuum,
        general_residual=general,
        commuting=commuting,
        norm_law_residual=norm_law,
        norm_law_argmax=argmax,
        gram_norm_gap=gap,
        attainment_gap=attain,
    )


@dataclass
class ProjectionsReport:
    residual: float
    exact: list
    truncation_limited: list

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "exact": self.exact,
            "truncation_limited": self.truncation_limited,
        }


def fourier_projections_check(P: ChoiMatrix, K: int, **caps) -> ProjectionsReport:
    """Level projections on the truncated sum: complete, orthogonal, and
    intertwining T_i P_k = P_{k+1} T_i for k < K.

    The top-level identity T_i P_K = P_{K+1} T_i needs level K+1 and is
    reported as truncation-limited rather than checked.
    """
    ops = creation_matrices(P, K, **caps)
    dims = ops.fock.quotient_dims
    total = sum(dims)
    offsets = np.cumsum([0] + dims)
    projections = []
    for k in range(K + 1):
        diag = np.zeros(total)
        diag[offsets[k] : offsets[k + 1]] = 1.0
        projections.append(np.diag(diag))
    residual = float(np.linalg.norm(sum(projections) - np.eye(total), 2))
    T_full = []
    for i in range(ops.N):
        T = np.zeros((total, total), dtype=complex)
        for k in range(K):
            T[offsets[k + 1] : offsets[k + 2], offsets[k] : offsets[k + 1]] = ops.op(i, k)
        T_full.append(T)
    for i in range(ops.N):
        for k in range(K):
            lhs = T_full[i] @ projections[k]
            rhs = projections[k + 1] @ T_full[i]
            residual = max(residual, float(np.linalg.norm(lhs - rhs, 2)))
        # P_0 annihilates every creation image
        residual = max(
            residual, float(np.linalg.norm(projections[0] @ T_full[i], 2))
        )
    return ProjectionsReport(
        residual=residual,
        exact=["sum_to_identity", "intertwine_below_top", "vacuum_annihilation"],
        truncation_limited=[f"intertwine_at_level_{K}"],
    )


def basis_change_equivalence(
    P: ChoiMatrix, U: np.ndarray, K: int = 2, **caps
) -> float:
    """Residual of the unitary equivalence under a letter basis change.

    P' = (U (x) I_d) P (U* (x) I_d); level-wise U^{(x)k} (x) I_d compresses
    to a quotient unitary Q_k, and Q_{k+1} T_i = sum_a U_{ai} T'_a Q_k.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (P.N, P.N):
        raise ValueError("U must act on the letter index")
    defect = float(np.linalg.norm(U.conj().T @ U - np.eye(P.N), 2))
    if defect > 1e-10:
        raise NotUnitaryError(f"U*U differs from I by {defect:.3e}")
    Pp = ChoiMatrix(
        P.N,
        P.d,
        np.kron(U, np.eye(P.d)) @ P.matrix @ np.kron(U.conj().T, np.eye(P.d)),
    )
    ops = creation_matrices(P, K, **caps)
    ops_p = creation_matrices(Pp, K, **caps)
    omegas = []
    for k in range(K + 1):
        W = np.eye(1, dtype=complex)
        for _ in range(k):
            W = np.kron(W, U)
        omegas.append(np.kron(W, np.eye(P.d)))
    Q = []
    for k in range(K + 1):
        lvl_p = ops_p.fock.level(k)
        Q.append(lvl_p.quotient.conj().T @ lvl_p.gram @ omegas[k] @ ops.fock.level(k).quotient)
    residual = 0.0
    for k in range(K + 1):
        eye_defect = np.linalg.norm(Q[k].conj().T @ Q[k] - np.eye(Q[k].shape[1]), 2)
        residual = max(residual, float(eye_defect))
    for k in range(K):
        for i in range(P.N):
            lhs = Q[k + 1] @ ops.op(i, k)
            rhs = sum(U[a, i] * ops_p.op(a, k) @ Q[k] for a in range(P.N))
            residual = max(residual, float(np.linalg.norm(lhs - rhs, 2)))
    return residual
