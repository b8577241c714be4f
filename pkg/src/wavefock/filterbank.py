"""N-band filter banks as systems of isometries.

A bank holds a scale N and N subband filters m_0..m_{N-1}, optionally with a
dual family.  The associated operators act on Laurent polynomials by

    S_i f = m_i * upsample(f, N)        (filter after N-fold upsampling)
    S_i^* f = decimate(adjoint(m_i) * f, N)

and `relation_report` measures how far the family is from satisfying the
isometry, range-orthogonality, completeness and dual-pairing identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DualLengthMismatchError, NotReconstructiveError
from .laurent import (
    DEFAULT_GRID,
    LaurentPoly,
    adjoint_poly,
    decimate,
    poly_from_json,
    poly_to_json,
    upsample,
)

DEFAULT_TOL = 1e-9


class FilterBank:
    """Scale N with N primary filters and an optional dual family.

    The genus g is the smallest integer such that every filter exponent lies
    in [-Ng+1, Ng-1]; it is always computed from the stored filters.
    """

    def __init__(self, N: int, filters, dual_filters=None):
        if N < 2:
            raise ValueError("scale N must be at least 2")
        filters = list(filters)
        if len(filters) != N:
            raise DualLengthMismatchError(
                f"expected {N} primary filters, got {len(filters)}"
            )
        if dual_filters is not None:
            dual_filters = list(dual_filters)
            if len(dual_filters) != N:
                raise DualLengthMismatchError(
                    f"expected {N} dual filters, got {len(dual_filters)}"
                )
        self.N = N
        self.filters = filters
        self.dual_filters = dual_filters

    @property
    def is_self_dual(self) -> bool:
        return self.dual_filters is None

    @property
    def duals_or_primaries(self) -> list:
        return self.dual_filters if self.dual_filters is not None else self.filters

    @property
    def genus(self) -> int:
        all_filters = self.filters + (self.dual_filters or [])
        m = 0
        for p in all_filters:
            if not p.is_zero:
                m = max(m, abs(p.min_exp), abs(p.max_exp))
        return max(1, math.ceil((m + 1) / self.N))

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "filters": [poly_to_json(p) for p in self.filters],
            "dual_filters": None
            if self.dual_filters is None
            else [poly_to_json(p) for p in self.dual_filters],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FilterBank":
        if not isinstance(obj, dict) or "N" not in obj or "filters" not in obj:
            raise ValueError("filter bank JSON must have keys 'N' and 'filters'")
        duals = obj.get("dual_filters")
        return cls(
            int(obj["N"]),
            [poly_from_json(p) for p in obj["filters"]],
            None if duals is None else [poly_from_json(p) for p in duals],
        )

    def __repr__(self):
        tag = "self-dual" if self.is_self_dual else "with duals"
        return f"FilterBank(N={self.N}, genus={self.genus}, {tag})"


# ----------------------------------------------------------------------
# the operators


def apply_S(m: LaurentPoly, f: LaurentPoly, N: int) -> LaurentPoly:
    """S f = m * f(z^N)."""
    return m * upsample(f, N)


def apply_S_adjoint(m: LaurentPoly, f: LaurentPoly, N: int) -> LaurentPoly:
    """S^* f = decimate(adjoint(m) * f, N), the transfer-operator form."""
    return decimate(adjoint_poly(m) * f, N)


# ----------------------------------------------------------------------
# relation verification


@dataclass
class RelationReport:
    N: int
    tolerance: float
    grid: int
    mode_range: int
    pair_residuals: list = field(repr=False)  # sup |R(adj(m_i) mdual_j) - delta_ij|
    self_residuals: list = field(repr=False)  # same with duals = primaries
    completeness_residual: float = 0.0  # sum_i S_i Sdual_i^* = I on tested modes
    self_completeness_residual: float = 0.0

    @property
    def isometry(self) -> bool:
        return max(self.self_residuals[i][i] for i in range(self.N)) < self.tolerance

    @property
    def orthogonal_ranges(self) -> bool:
        off = [
            self.self_residuals[i][j]
            for i in range(self.N)
            for j in range(self.N)
            if i != j
        ]
        return max(off) < self.tolerance

    @property
    def cuntz(self) -> bool:
        return (
            self.isometry
            and self.orthogonal_ranges
            and self.self_completeness_residual < self.tolerance
        )

    @property
    def biorthogonal(self) -> bool:
        pair = max(self.pair_residuals[i][j] for i in range(self.N) for j in range(self.N))
        return pair < self.tolerance and self.completeness_residual < self.tolerance

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "tolerance": self.tolerance,
            "grid": self.grid,
            "mode_range": self.mode_range,
            "pair_residuals": self.pair_residuals,
            "self_residuals": self.self_residuals,
            "completeness_residual": self.completeness_residual,
            "self_completeness_residual": self.self_completeness_residual,
            "verdicts": {
                "isometry": self.isometry,
                "orthogonal_ranges": self.orthogonal_ranges,
                "cuntz": self.cuntz,
                "biorthogonal": self.biorthogonal,
            },
        }


def _pair_residual_matrix(filters, duals, N, grid):
    out = []
    for i, mi in enumerate(filters):
        row = []
        for j, mj in enumerate(duals):
            q = decimate(adjoint_poly(mi) * mj, N)
            if i == j:
                q = q - LaurentPoly.one()
            row.append(q.sup_grid(grid))
        out.append(row)
    return out


def _completeness_residual(filters, duals, N, mode_range):
    worst = 0.0
    for n in range(-mode_range, mode_range + 1):
        e_n = LaurentPoly.monomial(n)
        total = LaurentPoly.zero()
        for m, md in zip(filters, duals):
            total = total + apply_S(m, apply_S_adjoint(md, e_n, N), N)
        worst = max(worst, (total - e_n).coeff_norm())
    return worst


def relation_report(
    bank: FilterBank,
    mode_range: int | None = None,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> RelationReport:
    """Residuals for the subband relations, plus verdicts at `tol`.

    Completeness is tested exactly on the Fourier modes e_n, |n| <= mode_range;
    each image is finitely supported, so no truncation enters.  mode_range must
    be at least N * genus so the tested modes are not clipped.
    """
    N = bank.N
    floor = N * bank.genus
    if mode_range is None:
        mode_range = max(floor, 8)
    elif mode_range < floor:
        raise ValueError(f"mode_range {mode_range} below N*genus = {floor}")

    duals = bank.duals_or_primaries
    self_res = _pair_residual_matrix(bank.filters, bank.filters, N, grid)
    self_comp = _completeness_residual(bank.filters, bank.filters, N, mode_range)
    if bank.is_self_dual:
        pair_res, comp = self_res, self_comp
    else:
        pair_res = _pair_residual_matrix(bank.filters, duals, N, grid)
        comp = _completeness_residual(bank.filters, duals, N, mode_range)

    return RelationReport(
        N=N,
        tolerance=tol,
        grid=grid,
        mode_range=mode_range,
        pair_residuals=pair_res,
        self_residuals=self_res,
        completeness_residual=comp,
        self_completeness_residual=self_comp,
    )


# ----------------------------------------------------------------------
# module expansion over words


def all_words(N: int, k: int):
    """Words (i_1, ..., i_k) over {0..N-1} in lexicographic order."""
    if k == 0:
        return [()]
    return [(i,) + w for i in range(N) for w in all_words(N, k - 1)]


def word_basis(bank: FilterBank, word) -> LaurentPoly:
    """b_w = m_{i_1}(z) m_{i_2}(z^N) ... m_{i_k}(z^{N^(k-1)})."""
    b = LaurentPoly.one()
    scale = 1
    for i in word:
        b = b * upsample(bank.filters[i], scale)
        scale *= bank.N
    return b


def module_expand(
    bank: FilterBank,
    f: LaurentPoly,
    k: int,
    tol: float = DEFAULT_TOL,
    check: bool = True,
) -> dict:
    """Subband components of f over all words of length k.

    The component at word w = (i_1, ..., i_k) is the iterated dual adjoint
    Sdual_{i_k}^* ... Sdual_{i_1}^* f with Sdual_{i_1}^* applied first.  For a
    bank passing the pairing verdict, f = sum_w b_w * upsample(f_w, N^k).
    """
    if k < 1:
        raise ValueError("word length k must be at least 1")
    if check:
        report = relation_report(bank, tol=tol)
        if not (report.biorthogonal or report.cuntz):
            raise NotReconstructiveError(
                "bank fails both the orthogonal and the dual-pairing verdict"
            )
    duals = bank.duals_or_primaries
    components = {}
    for word in all_words(bank.N, k):
        g = f
        for i in word:
            g = apply_S_adjoint(duals[i], g, bank.N)
        components[word] = g
    return components


def module_reconstruct(bank: FilterBank, components: dict) -> LaurentPoly:
    """Reassemble sum_w b_w(z) * f_w(z^(N^k)) from `module_expand` output."""
    total = LaurentPoly.zero()
    for word, f_w in components.items():
        total = total + word_basis(bank, word) * upsample(f_w, bank.N ** len(word))
    return total
