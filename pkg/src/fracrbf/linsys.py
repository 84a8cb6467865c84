"""Dense collocation system: assembly, LU solve, condition estimate.

System layout (interior-first ordering from geometry): the first n_interior
rows impose the fractional equation through the exact operator images plus
the exterior tails, the remaining rows pin the expansion to the boundary
values through plain basis evaluation.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import LinAlgWarning, get_lapack_funcs

from fracrbf.exterior import build_tail_factors
from fracrbf.rbf import phi_block, psi_block
from fracrbf.specialfun import coeff_mu

__all__ = [
    "SystemMatrices",
    "assemble",
    "lu_solve",
    "nodal_values",
    "condition_estimate",
    "nodal_operator",
    "dump_matrix",
]


def _factor(mat):
    """LU with partial pivoting; an exactly zero pivot means singular."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = sla.lu_factor(mat, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise np.linalg.LinAlgError("exactly singular matrix (zero pivot)")
    return lu, piv


@dataclass
class SystemMatrices:
    """Assembled collocation matrices plus factorization handles."""

    ps: object
    basis: object
    a_phi: np.ndarray
    a_psi_top: np.ndarray
    tail: object
    s: np.ndarray
    _s_lu: tuple = field(default=None, repr=False)
    _phi_lu: tuple = field(default=None, repr=False)

    @property
    def n_interior(self):
        return self.ps.n_interior

    def s_lu(self):
        if self._s_lu is None:
            self._s_lu = _factor(self.s)
        return self._s_lu

    def phi_lu(self):
        if self._phi_lu is None:
            self._phi_lu = _factor(self.a_phi)
        return self._phi_lu

    def solve(self, rhs):
        return sla.lu_solve(self.s_lu(), np.asarray(rhs, dtype=float))


def assemble(ps, basis, K=10, M=64):
    """Build A_phi, the top psi block, the tail factors and the system S."""
    n_int = ps.n_interior
    p = basis.params
    a_phi = phi_block(basis, ps.points)
    a_psi_top = psi_block(basis, ps.interior)
    tail = build_tail_factors(ps, basis, K=K, M=M)
    top = basis.eps ** p.alpha * coeff_mu(p) * a_psi_top + tail.assemble()
    s = np.vstack([top, a_phi[n_int:, :]])
    return SystemMatrices(ps, basis, a_phi, a_psi_top, tail, s)


def lu_solve(system, rhs):
    """Solve system @ x = rhs by LU with partial pivoting.

    Accepts a SystemMatrices (factors cached) or a plain square matrix.
    """
    rhs = np.asarray(rhs, dtype=float)
    if isinstance(system, SystemMatrices):
        return system.solve(rhs)
    return sla.lu_solve(_factor(np.asarray(system, dtype=float)), rhs)


def nodal_values(sm, lam):
    """Expansion values at the equation points: top block of A_phi times lam."""
    return sm.a_phi[: sm.n_interior, :] @ np.asarray(lam, dtype=float)


def condition_estimate(system):
    """1-norm condition estimate of the interpolation matrix A_phi
    (Hager-Higham style through the LAPACK reciprocal-condition routine)."""
    if isinstance(system, SystemMatrices):
        mat = system.a_phi
        lu, _ = system.phi_lu()
    else:
        mat = np.asarray(system, dtype=float)
        lu, _ = _factor(mat)
    anorm = float(np.max(np.abs(mat).sum(axis=0)))
    gecon = get_lapack_funcs(("gecon",), (mat,))[0]
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise np.linalg.LinAlgError("condition estimation failed")
    if rcond == 0.0 or not np.isfinite(rcond):
        return np.inf
    return 1.0 / float(rcond)


def nodal_operator(sm, rows=None):
    """Square operator on nodal interior values.

    Columns 0..n_interior-1 of A_phi^{-1} turn interior nodal values (with
    zero boundary values) into coefficients; `rows` (default: the equation
    rows of S) maps coefficients to operator values at the interior points.
    """
    n_int = sm.n_interior
    n = sm.a_phi.shape[0]
    rhs = np.zeros((n, n_int))
    rhs[:n_int, :] = np.eye(n_int)
    coeff_map = sla.lu_solve(sm.phi_lu(), rhs)
    w = sm.s[:n_int, :] if rows is None else np.asarray(rows, dtype=float)
    return w @ coeff_map


def dump_matrix(mat, path):
    """Plain-text row-major dump with a dimension header, for debugging."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    with open(path, "w") as fh:
        fh.write(f"{mat.shape[0]} {mat.shape[1]}\n")
        for row in mat:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
