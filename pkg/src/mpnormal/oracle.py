"""Independent numerical checks of the closed-form spectrum and normality.

Nothing here calls the closed-form eigenvalue formula except where
explicitly comparing against it:

* the characteristic equation ``det(exp((lambda - A) l) - W) = 0`` and its
  roots via the matrix logarithm of ``W*``;
* a finite-difference discretization of ``u' + A u = lambda u`` with the
  boundary closure ``u_N = W u_0`` eliminated into the matrix;
* trapezoid quadrature of the norm identity and of eigenfunction Gram
  matrices.

Finite-difference layout: unknowns ``u_0 .. u_{N-1}`` stacked as
``x[j * dim + c]``; row block ``j`` holds the stencil between nodes ``j``
and ``j + 1``, and node ``N`` is replaced by ``W u_0``.  The discrete
problem is the pencil ``D x = lambda M x``.  For the default implicit
trapezoid scheme,

    D[j, j] = -I/h + A/2,   D[j, j+1] = I/h + A/2,   D[N-1, 0] = (I/h + A/2) W
    M[j, j] = I/2,          M[j, j+1] = I/2,         M[N-1, 0] = W/2

and the one-sided (forward Euler) scheme uses
``D[j, j] = -I/h + A``, ``D[j, j+1] = I/h``, ``D[N-1, 0] = W/h``, ``M = I``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import BoundaryNotZero, SingularStencil
from .extension import simultaneous_eigenbasis
from .hilbert import matrix_exponential

SCHEMES = ("trapezoid", "forward")


def characteristic_residual(block, lam):
    """Scaled ``|det(exp((lam I - A) l) - W)|``; zero exactly at eigenvalues.

    The determinant is divided by ``prod_i (||E_i|| + ||W_i||)`` over rows
    ``i`` of ``E = exp((lam I - A) l)`` and ``W``.  By Hadamard's inequality
    the result lies in ``[0, 1]``.
    """
    n = block.dim
    E = matrix_exponential(complex(lam) * np.eye(n) - block.A, block.length)
    M = E - block.W
    scale = np.prod(np.linalg.norm(E, axis=1) + np.linalg.norm(block.W, axis=1))
    return float(abs(np.linalg.det(M)) / scale)


def characteristic_eigenvalues(block, k_max):
    """Eigenvalues for ``|k| <= k_max`` solved from the boundary condition.

    Along a joint eigenvector, ``u(t) = exp((lam - A)(t - a)) v`` meets
    ``u(b) = W u(a)`` iff ``exp(-(lam - alpha) l) = conj(omega)``.  So
    ``lam = g - 2 pi i k / l``, where ``g`` runs over the eigenvalues of
    ``A - logm(W*) / l``.  That matrix is normal, so a general eigensolver
    handles it, and no joint eigenbasis is formed.
    """
    length = block.length
    G = block.A - scipy.linalg.logm(block.W.conj().T) / length
    g = np.linalg.eigvals(G)
    # arg(conj(omega)) lives on (-pi, pi], so Im(g) * l must lie in [-pi, pi);
    # logm lands on +pi for W* = -1 - 0j (signed zero)
    on_cut = g.imag * length >= np.pi * (1 - 8 * np.finfo(float).eps)
    g = np.where(on_cut, g - 2j * np.pi / length, g)
    ks = np.arange(-k_max, k_max + 1)
    return (g[:, None] - 2j * np.pi * ks[None, :] / length).ravel()


def hausdorff_distance(X, Y):
    """Hausdorff distance between two finite subsets of the complex plane."""
    X = np.asarray(X, dtype=complex).ravel()
    Y = np.asarray(Y, dtype=complex).ravel()
    if X.size == 0 or Y.size == 0:
        return 0.0 if X.size == Y.size else float("inf")
    D = np.abs(X[:, None] - Y[None, :])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


@dataclass(frozen=True, eq=False)
class DiscretizedOperator:
    """Boundary-eliminated pencil ``(stiffness, mass)`` of size ``dim * N``."""

    stiffness: scipy.sparse.csc_matrix
    mass: scipy.sparse.csc_matrix
    scheme: str
    block: object
    N: int

    @property
    def size(self):
        return self.stiffness.shape[0]

    @property
    def matrix(self):
        """Dense standard-form matrix ``M^{-1} D`` (small grids only)."""
        return np.linalg.solve(self.mass.toarray(), self.stiffness.toarray())


def discretize(block, N, scheme="trapezoid"):
    if N < 16:
        raise ValueError("need N >= 16")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    d = block.dim
    h = block.length / N
    A, W = block.A, block.W
    I = np.eye(d)
    shift = scipy.sparse.diags([np.ones(N - 1)], [1], shape=(N, N), format="csr")
    corner = scipy.sparse.csr_matrix(([1.0], ([N - 1], [0])), shape=(N, N))
    eye = scipy.sparse.identity(N, format="csr")
    if scheme == "trapezoid":
        fwd = I / h + A / 2
        D = (
            scipy.sparse.kron(eye, -I / h + A / 2)
            + scipy.sparse.kron(shift, fwd)
            + scipy.sparse.kron(corner, fwd @ W)
        )
        M = scipy.sparse.kron(eye, I / 2) + scipy.sparse.kron(shift, I / 2) + scipy.sparse.kron(corner, W / 2)
    else:
        D = scipy.sparse.kron(eye, -I / h + A) + scipy.sparse.kron(shift, I / h) + scipy.sparse.kron(corner, W / h)
        M = scipy.sparse.identity(N * d, format="csc", dtype=complex)
    D = scipy.sparse.csc_matrix(D, dtype=complex)
    M = scipy.sparse.csc_matrix(M, dtype=complex)
    if D.shape != (N * d, N * d) or M.shape != D.shape:
        raise SingularStencil(f"assembled shapes {D.shape}, {M.shape}; expected {(N * d, N * d)}")
    return DiscretizedOperator(D, M, scheme, block, N)


def fd_eigenvalues(block, N, count, scheme="trapezoid"):
    """The ``count`` discrete eigenvalues nearest the origin, by ascending modulus.

    Large grids use shift-invert Arnoldi at zero (eigenvalues of
    ``D^{-1} M`` of largest modulus) with a fixed start vector so repeated
    runs agree bitwise; small problems fall back to a dense pencil solve.
    """
    op = discretize(block, N, scheme)
    n = op.size
    if count < 1 or count > n:
        raise ValueError(f"count must be in [1, {n}]")
    if count >= n - 2 or n <= 256:
        vals = scipy.linalg.eigvals(op.stiffness.toarray(), op.mass.toarray())
        vals = vals[np.isfinite(vals)]
    else:
        try:
            lu = scipy.sparse.linalg.splu(op.stiffness)
        except RuntimeError as exc:
            raise SingularStencil(f"stiffness matrix is singular: {exc}") from exc
        mass = op.mass
        linop = scipy.sparse.linalg.LinearOperator(
            (n, n), matvec=lambda x: lu.solve(mass @ x), dtype=complex
        )
        v0 = np.ones(n, dtype=complex) / np.sqrt(n)
        theta = scipy.sparse.linalg.eigs(linop, k=count, which="LM", v0=v0, return_eigenvectors=False)
        vals = 1.0 / theta
    vals = vals[np.argsort(np.abs(vals), kind="stable")]
    return vals[:count]


def resolved_window(block, N):
    """Largest ``|Im lambda|`` at which the grid still resolves an eigenvalue."""
    return np.pi * (N / 8) / block.length


def pair_nearest(approx, exact):
    """Distance from each approximate eigenvalue to its nearest exact one."""
    approx = np.asarray(approx, dtype=complex)
    exact = np.asarray(exact, dtype=complex)
    return np.abs(approx[:, None] - exact[None, :]).min(axis=1)


@dataclass
class GridFunction:
    """Vector function sampled on ``N + 1`` equispaced nodes of ``[a, b]``.

    ``values`` has shape ``(N + 1, dim)``.  ``derivative`` holds exact
    derivative samples when known; otherwise second-order differences are
    used.
    """

    block_index: int
    nodes: np.ndarray
    values: np.ndarray
    derivative: Optional[np.ndarray] = None

    @classmethod
    def sample(cls, interval, N, f, df=None, block_index=1, dim=None):
        t = np.linspace(interval.a, interval.b, N + 1)

        def _eval(fun):
            v = np.asarray(fun(t), dtype=complex)
            if v.ndim == 1:
                v = v[:, None]
            if dim is not None and v.shape[1] != dim:
                v = np.broadcast_to(v, (t.size, dim)).copy()
            return v

        return cls(block_index, t, _eval(f), _eval(df) if df is not None else None)

    @property
    def spacing(self):
        return self.nodes[1] - self.nodes[0]

    def derivative_values(self):
        if self.derivative is not None:
            return self.derivative
        return np.gradient(self.values, self.spacing, axis=0, edge_order=2)


def _integrate(sq, nodes):
    return float(scipy.integrate.trapezoid(sq, nodes))


def quadrature_norm_identity(block, u, adjoint=False, boundary_tol=1e-12):
    """Quadrature of both sides of ``||u' + A u||^2 = ||u'||^2 + ||A u||^2``.

    Valid for ``u`` vanishing at both endpoints, where the cross term
    integrates to the boundary values of ``(u, A u)``.  ``adjoint=True``
    uses ``-u' + A u`` on the left instead, which must give the same number.

    Returns
    -------
    (lhs, rhs) : tuple of float
    """
    vals = np.asarray(u.values, dtype=complex)
    for end, name in ((vals[0], "a"), (vals[-1], "b")):
        if np.linalg.norm(end) > boundary_tol:
            raise BoundaryNotZero(f"u({name}) has norm {np.linalg.norm(end):.3e}")
    du = u.derivative_values()
    Au = vals @ block.A.T
    Lu = (-du if adjoint else du) + Au
    sq = lambda X: np.sum(np.abs(X) ** 2, axis=1)
    lhs = _integrate(sq(Lu), u.nodes)
    rhs = _integrate(sq(du), u.nodes) + _integrate(sq(Au), u.nodes)
    return lhs, rhs


def boundary_cancellation(block, u0):
    """``|(W u0, A W u0) - (u0, A u0)|``: the boundary term with ``u(b) = W u(a)``.

    It vanishes for every ``u0`` exactly when ``W* A W = A``, which for
    unitary ``W`` means ``W`` commutes with ``A``.
    """
    u0 = np.asarray(u0, dtype=complex)
    ub = block.W @ u0
    return float(abs(np.vdot(ub, block.A @ ub) - np.vdot(u0, block.A @ u0)))


def eigenfunction_gram(block, records, N=4096):
    """Trapezoid Gram matrix of quadrature-normalized eigenfunctions.

    The eigenfunction of a record ``(lambda, m)`` is
    ``exp((lambda - alpha_m)(t - a)) v_m``.
    """
    modes = {mp.m: mp for mp in simultaneous_eigenbasis(block)}
    a = block.interval.a
    t = np.linspace(a, block.interval.b, N + 1)
    w = np.full(N + 1, t[1] - t[0])
    w[0] = w[-1] = (t[1] - t[0]) / 2
    F = []
    for r in records:
        mp = modes[r.mode_index]
        f = np.exp((r.value - mp.alpha) * (t - a))[:, None] * mp.vector[None, :]
        norm = np.sqrt(np.sum(w * np.sum(np.abs(f) ** 2, axis=1)))
        F.append(f / norm)
    F = np.array(F)
    return np.einsum("rtd,t,std->rs", F.conj(), w, F)
