"""Numerical witnesses: Hermitian matrices with prescribed spectra and a PSD low-rank sum.

Each A(s) is parametrized as U(s) diag(alpha(s)) U(s)^*, and the penalty

    sum_{k > r} mu_k^2 + sum_{k <= r} min(mu_k, 0)^2

on the eigenvalues mu of B = sum_s A(s) is driven to zero by steepest descent
on the unitary group, U(s) <- exp(eps [A(s), G]) U(s), where G is the
gradient of the penalty with respect to B.  Restarts are run as a numpy
batch; every restart owns its generator, seeded from (seed, restart index),
so the outcome does not depend on how restarts are grouped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .feasibility import SpectrumInstance, cached_system, check, check_dagger
from .horn import MAJOR, RANK

log = logging.getLogger(__name__)

ROUNDING_DENOMINATOR = 10**6
GAP_THRESHOLD = 1e-9


@dataclass
class OptimizerConfig:
    restarts: int = 100
    max_iterations: int = 2000
    tolerance: float = 1e-7
    initial_step: float = 0.5
    min_step: float = 1e-12
    armijo: float = 1e-4
    seed: int = 0
    batch_size: int = 50

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class RealizationResult:
    success: bool
    matrices: list[np.ndarray]
    sum_eigenvalues: np.ndarray
    residual: float
    iterations: int
    restarts_used: int
    restart_index: int = -1


@dataclass
class VerificationReport:
    spectrum_ok: bool
    psd_ok: bool
    rank_ok: bool
    spectrum_deviation: float
    min_eigenvalue: float
    excess_eigenvalue: float
    sum_eigenvalues: np.ndarray = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return self.spectrum_ok and self.psd_ok and self.rank_ok


def is_hermitian(H: np.ndarray, atol: float = 1e-12) -> bool:
    H = np.asarray(H)
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    return H.ndim == 2 and H.shape[0] == H.shape[1] and np.allclose(H, H.conj().T, rtol=0, atol=atol * scale)


def hermitian_eigen(H: np.ndarray, atol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors (columns)."""
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H, atol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    return w[::-1].copy(), V[:, ::-1].copy()


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with R's phases divided out."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return (G + G.conj().T) / 2


def _penalty_from_eigs(mu_desc: np.ndarray, r: int) -> np.ndarray:
    head = np.minimum(mu_desc[..., :r], 0.0)
    return np.sum(head**2, axis=-1) + np.sum(mu_desc[..., r:] ** 2, axis=-1)


def penalty(B: np.ndarray, r: int) -> float:
    mu, _ = hermitian_eigen(B, atol=1e-9)
    return float(_penalty_from_eigs(mu, r))


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _eigh_desc(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, V = np.linalg.eigh(B)
    return w[..., ::-1], V[..., ::-1]


def _assemble(U: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    # U: (R, m, n, n), alpha: (m, n) -> A: (R, m, n, n)
    return (U * alpha[None, :, None, :]) @ np.conj(np.swapaxes(U, -1, -2))


def _rotations(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of the Hermitian -iC so that exp(eps C) = W diag(exp(i eps h)) W^*."""
    h, W = np.linalg.eigh(-1j * C)
    return h, W


def _apply(U: np.ndarray, h: np.ndarray, W: np.ndarray, eps: np.ndarray) -> np.ndarray:
    phase = np.exp(1j * eps[:, None] * h)
    E = (W * phase[:, None, :]) @ np.conj(np.swapaxes(W, -1, -2))
    return E @ U


def _run_batch(alpha: np.ndarray, r: int, indices: list[int], cfg: OptimizerConfig):
    m, n = alpha.shape
    R = len(indices)
    rngs = [_restart_rng(cfg.seed, k) for k in indices]
    U = np.empty((R, m, n, n), dtype=complex)
    for j, k in enumerate(indices):
        for s in range(m):
            U[j, s] = np.eye(n) if k == 0 else random_unitary(n, rngs[j])

    scale = max(float(np.max(np.abs(alpha))), 1e-300)
    step0 = cfg.initial_step / scale**2

    active = np.ones(R, dtype=bool)
    succeeded = np.zeros(R, dtype=bool)
    iterations = np.zeros(R, dtype=int)
    A = _assemble(U, alpha)
    mu, V = _eigh_desc(A.sum(axis=1))
    P = _penalty_from_eigs(mu, r)

    for it in range(cfg.max_iterations + 1):
        done = P < cfg.tolerance
        succeeded |= done & active
        active &= ~done
        if succeeded.any():
            # restarts with a higher index than a success can no longer win
            first = int(np.argmax(succeeded))
            active[first + 1:] = False
        if not active.any() or it == cfg.max_iterations:
            break
        idx = np.nonzero(active)[0]
        mu_a, V_a, A_a = mu[idx], V[idx], A[idx]
        w = 2.0 * mu_a
        w[:, :r] = 2.0 * np.minimum(mu_a[:, :r], 0.0)
        G = (V_a * w[:, None, :]) @ np.conj(np.swapaxes(V_a, -1, -2))
        G = G[:, None]
        C = A_a @ G - G @ A_a
        if 0 < r < n:
            gaps = mu_a[:, r - 1] - mu_a[:, r]
            for j in np.nonzero(gaps < GAP_THRESHOLD)[0]:
                g = rngs[idx[j]]
                X = g.standard_normal((m, n, n)) + 1j * g.standard_normal((m, n, n))
                noise = (X - np.conj(np.swapaxes(X, -1, -2))) / 2
                C[j] += 1e-6 * (1.0 + np.linalg.norm(C[j])) * noise / np.linalg.norm(noise)
        gnorm2 = np.sum(np.abs(C) ** 2, axis=(1, 2, 3))
        h, W = _rotations(C.reshape(-1, n, n))
        h = h.reshape(len(idx), m, n)
        W = W.reshape(len(idx), m, n, n)

        eps = np.full(len(idx), step0)
        pending = np.ones(len(idx), dtype=bool)
        newU = U[idx].copy()
        newP = P[idx].copy()
        newA, newMu, newV = A_a.copy(), mu_a.copy(), V_a.copy()
        while pending.any():
            sel = np.nonzero(pending)[0]
            Ut = _apply(U[idx[sel]].reshape(-1, n, n), h[sel].reshape(-1, n), W[sel].reshape(-1, n, n),
                        np.repeat(eps[sel], m)).reshape(len(sel), m, n, n)
            At = _assemble(Ut, alpha)
            mut, Vt = _eigh_desc(At.sum(axis=1))
            Pt = _penalty_from_eigs(mut, r)
            ok = Pt <= P[idx[sel]] - cfg.armijo * eps[sel] * gnorm2[sel]
            acc = sel[ok]
            newU[acc], newP[acc], newA[acc], newMu[acc], newV[acc] = Ut[ok], Pt[ok], At[ok], mut[ok], Vt[ok]
            pending[acc] = False
            eps[sel[~ok]] /= 2
            stuck = pending & (eps < cfg.min_step)
            pending &= ~stuck
        moved = newP < P[idx]
        U[idx], A[idx], mu[idx], V[idx] = newU, newA, newMu, newV
        P[idx] = newP
        iterations[idx] += 1
        # stationary: the line search could not make progress
        stalled = idx[~moved]
        active[stalled] = False

    return U, A, mu, P, succeeded, iterations


def realize(inst: SpectrumInstance, cfg: OptimizerConfig | None = None) -> RealizationResult:
    """Search for witness matrices; ``success=False`` means "not found", not "infeasible"."""
    cfg = cfg or OptimizerConfig()
    if check_dagger(inst):
        raise ValueError("realize needs weakly decreasing tuples")
    alpha = np.array([[float(x) for x in row] for row in inst.alpha])
    best = None
    used = 0
    total_iterations = 0
    for start in range(0, cfg.restarts, cfg.batch_size):
        indices = list(range(start, min(start + cfg.batch_size, cfg.restarts)))
        U, A, mu, P, succeeded, iters = _run_batch(alpha, inst.r, indices, cfg)
        total_iterations += int(iters.sum())
        if succeeded.any():
            j = int(np.argmax(succeeded))
            used = indices[j] + 1
            log.debug("restart %d succeeded with residual %.3e", indices[j], P[j])
            return RealizationResult(True, list(A[j]), mu[j].copy(), float(P[j]), int(iters[j]), used, indices[j])
        j = int(np.argmin(P))
        used = indices[-1] + 1
        if best is None or P[j] < best.residual:
            best = RealizationResult(False, list(A[j]), mu[j].copy(), float(P[j]), int(iters[j]), used, indices[j])
    best.restarts_used = used
    return best


def verify_realization(matrices, inst: SpectrumInstance, tol: float) -> VerificationReport:
    if len(matrices) != inst.m or any(np.shape(M) != (inst.n, inst.n) for M in matrices):
        raise ValueError("matrix count or shape does not match the instance")
    deviation = 0.0
    for M, row in zip(matrices, inst.alpha):
        w, _ = hermitian_eigen(M, atol=1e-9)
        target = np.sort(np.array([float(x) for x in row]))[::-1]
        deviation = max(deviation, float(np.max(np.abs(w - target))))
    beta, _ = hermitian_eigen(sum(np.asarray(M, dtype=complex) for M in matrices), atol=1e-9)
    lam_min = float(beta[-1])
    excess = float(beta[inst.r]) if inst.r < inst.n else float("-inf")
    return VerificationReport(
        spectrum_ok=deviation <= tol,
        psd_ok=lam_min >= -tol,
        rank_ok=excess <= tol,
        spectrum_deviation=deviation,
        min_eigenvalue=lam_min,
        excess_eigenvalue=excess,
        sum_eigenvalues=beta,
    )


def _round(x: float) -> Fraction:
    return Fraction(round(x * ROUNDING_DENOMINATOR), ROUNDING_DENOMINATOR)


def _structural_rows(n: int, m: int, r: int, rows) -> set[str]:
    """Rows tight by construction, which the rounding audit must skip.

    With r = 0 the sum vanishes, so the trace rows are equalities; with m <= 2
    as well, the second spectrum is the negated reversal of the first and every
    row is an equality. With m = 1 the spectrum is that of B itself, whose
    trailing zeros make rows tight.
    """
    if m == 1 or (r == 0 and m == 2):
        return {row.id for row in rows}
    if r != 0:
        return set()
    return {row.id for row in rows if row.kind in (MAJOR, RANK) and row.source.t == n}


def _exact_rounding(alpha: list[list[Fraction]], m: int, r: int) -> None:
    """Restore, in place, the exact relations that rounding may have broken."""
    if m == 1:
        n = len(alpha[0])
        for i in range(r, n):
            alpha[0][i] = Fraction(0)
    elif r == 0 and m == 2:
        alpha[1] = [-x for x in reversed(alpha[0])]
    elif r == 0:
        alpha[-1][-1] -= sum(sum(row) for row in alpha)


def forward_sample(n: int, m: int, r: int, rng: np.random.Generator, max_draws: int = 1000):
    """Draw matrices with PSD sum of rank <= r and return (rounded instance, matrices).

    A draw is rejected when any non-structural slack of its unrounded spectra
    is below 10 n m / 10^6, so rounding to denominator 10^6 cannot flip a verdict.
    The rounded instance is also checked exactly before it is returned.
    """
    if m < 1 or not 0 <= r <= n:
        raise ValueError(f"invalid sample size n={n}, m={m}, r={r}")
    system = cached_system(n, m, r)
    rows = system.rows()
    skip = _structural_rows(n, m, r, rows)
    margin = 10 * n * m / ROUNDING_DENOMINATOR
    coeffs = np.array([[float(c) for c in row.coeffs] for row in rows if row.id not in skip])
    for _ in range(max_draws):
        mats = [random_hermitian(n, rng) for _ in range(m - 1)]
        beta = np.zeros(n)
        beta[:r] = rng.uniform(0.0, 2.0, size=r)
        Vb = random_unitary(n, rng)
        B = (Vb * beta) @ Vb.conj().T
        mats.append(B - sum(mats, np.zeros((n, n), dtype=complex)))
        spectra = np.array([hermitian_eigen(M, atol=1e-9)[0] for M in mats])
        if coeffs.size and float(np.min(coeffs @ spectra.ravel())) < margin:
            continue
        alpha = [[_round(x) for x in row] for row in spectra]
        _exact_rounding(alpha, m, r)
        if any(row[i] < row[i + 1] for row in alpha for i in range(n - 1)):
            continue
        inst = SpectrumInstance(n, m, r, tuple(tuple(row) for row in alpha))
        if not check(inst, system).feasible:
            continue
        return inst, mats
    raise RuntimeError(f"no draw passed the rounding-margin audit in {max_draws} attempts")


def sum_spectrum_slacks(inst: SpectrumInstance, beta: np.ndarray) -> list[float]:
    """Numerical slacks of  sum_s sum_{i in I(s)} alpha_i(s) - sum of the t smallest beta  >= 0
    over all major rows."""
    n = inst.n
    x = np.array([float(v) for v in inst.flat()])
    beta = np.sort(np.asarray(beta, dtype=float))[::-1]
    out = []
    for row in cached_system(inst.n, inst.m, inst.n).rows():
        if row.kind != MAJOR:
            continue
        t = row.source.t
        out.append(float(np.dot([float(c) for c in row.coeffs], x)) - float(np.sum(beta[n - t:])))
    return out

