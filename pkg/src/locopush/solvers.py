"""Dense QP and NLP solvers with verifiable optimality certificates.

The QP solver is a dual active-set method (Goldfarb–Idnani flavor with full
refactorization, which is plenty fast at the sizes used here: up to a few
hundred variables).  The NLP solver is line-search SQP with damped BFGS,
using the QP solver for its subproblems.  Both are deterministic: identical
inputs produce identical iterates.

Every "optimal" result is expected to pass ``check_qp_kkt`` /
``check_nlp_kkt``, which are written directly from the KKT conditions and
share no code with the solver iterations.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class EvaluationError(RuntimeError):
    """A user callback produced NaN/Inf."""


@dataclass
class SolveReport:
    status: str              # optimal | max_iter | infeasible
    iterations: int
    primal_residual: float
    dual_residual: float
    solve_time_ms: float
    regularized: bool = False
    message: str = ""

    def ok(self) -> bool:
        return self.status == "optimal"


@dataclass
class QPProblem:
    """min 0.5 x'Hx + f'x  s.t.  A_eq x = b_eq,  lb_in <= A_in x <= ub_in,
    lb <= x <= ub.  Use +-inf for absent sides."""

    H: np.ndarray
    f: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_in: np.ndarray | None = None
    lb_in: np.ndarray | None = None
    ub_in: np.ndarray | None = None
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=float)
        self.f = np.asarray(self.f, dtype=float).reshape(-1)
        n = self.f.size
        if self.H.shape != (n, n):
            raise ValueError("H/f dimension mismatch")
        if self.A_eq is not None:
            self.A_eq = np.atleast_2d(np.asarray(self.A_eq, dtype=float))
            self.b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        if self.A_in is not None:
            self.A_in = np.atleast_2d(np.asarray(self.A_in, dtype=float))
            m = self.A_in.shape[0]
            self.lb_in = (np.full(m, -np.inf) if self.lb_in is None
                          else np.asarray(self.lb_in, dtype=float).reshape(m))
            self.ub_in = (np.full(m, np.inf) if self.ub_in is None
                          else np.asarray(self.ub_in, dtype=float).reshape(m))

    @property
    def n(self) -> int:
        return self.f.size


@dataclass
class QPDuals:
    """Multipliers keyed to the one-sided row expansion of the problem."""

    eq: np.ndarray                # one per equality row
    rows: np.ndarray              # one per expanded inequality row, >= 0
    row_meta: list = field(default_factory=list)  # (kind, index, side)


def inequality_rows(p: QPProblem) -> tuple[np.ndarray, np.ndarray, list]:
    """Expand two-sided inequalities and bounds into rows C x >= d."""
    n = p.n
    C_rows, d_vals, meta = [], [], []
    if p.A_in is not None:
        for i in range(p.A_in.shape[0]):
            if np.isfinite(p.lb_in[i]):
                C_rows.append(p.A_in[i])
                d_vals.append(p.lb_in[i])
                meta.append(("ineq", i, "lower"))
            if np.isfinite(p.ub_in[i]):
                C_rows.append(-p.A_in[i])
                d_vals.append(-p.ub_in[i])
                meta.append(("ineq", i, "upper"))
    if p.lb is not None:
        lb = np.asarray(p.lb, dtype=float).reshape(n)
        for i in range(n):
            if np.isfinite(lb[i]):
                e = np.zeros(n)
                e[i] = 1.0
                C_rows.append(e)
                d_vals.append(lb[i])
                meta.append(("bound", i, "lower"))
    if p.ub is not None:
        ub = np.asarray(p.ub, dtype=float).reshape(n)
        for i in range(n):
            if np.isfinite(ub[i]):
                e = np.zeros(n)
                e[i] = -1.0
                C_rows.append(e)
                d_vals.append(-ub[i])
                meta.append(("bound", i, "upper"))
    if not C_rows:
        return np.zeros((0, n)), np.zeros(0), meta
    return np.array(C_rows), np.array(d_vals), meta


def _regularize(H: np.ndarray) -> tuple[np.ndarray, float]:
    """Symmetrize and, if needed, shift H so a Cholesky factorization exists."""
    G = 0.5 * (H + H.T)
    scale = max(1.0, float(np.abs(G).max()))
    eps = 0.0
    for _ in range(20):
        try:
            np.linalg.cholesky(G + eps * np.eye(G.shape[0]))
            return G + eps * np.eye(G.shape[0]), eps
        except np.linalg.LinAlgError:
            eps = max(eps * 100.0, 1e-12 * scale)
    raise np.linalg.LinAlgError("could not regularize Hessian")


def _kkt_solve(G, N, rhs_top, rhs_bot, delta: float = 1e-11):
    """Solve [[G, N'], [N, -delta*I]] [a; b] = [rhs_top; rhs_bot].

    The small dual shift keeps the system quasi-definite even when the
    working set picks up (near-)dependent rows; one step of iterative
    refinement recovers most of the shift-induced error.
    """
    n = G.shape[0]
    m = N.shape[0]
    if m == 0:
        return np.linalg.solve(G, rhs_top), np.zeros(0)
    K = np.zeros((n + m, n + m))
    K[:n, :n] = G
    K[:n, n:] = N.T
    K[n:, :n] = N
    K[n:, n:] = -delta * np.eye(m)
    rhs = np.concatenate([rhs_top, rhs_bot])
    sol = np.linalg.solve(K, rhs)
    K[n:, n:] = 0.0
    resid = rhs - K @ sol
    K[n:, n:] = -delta * np.eye(m)
    sol = sol + np.linalg.solve(K, resid)
    return sol[:n], sol[n:]


def solve_qp(p: QPProblem, tol: float = 1e-8,
             max_iter: int | None = None) -> tuple[np.ndarray, SolveReport, QPDuals]:
    """Dual active-set solve.  Returns (x, report, duals).

    On "infeasible" the report message names the most-violated constraint row.
    The returned x on success passes the independent KKT checker at ``tol``.
    """
    t0 = time.perf_counter()
    n = p.n
    G, eps = _regularize(p.H)
    regularized = eps > 1e-9 * max(1.0, float(np.abs(p.H).max()))

    A_eq = p.A_eq if p.A_eq is not None else np.zeros((0, n))
    b_eq = p.b_eq if p.b_eq is not None else np.zeros(0)
    C, d, meta = inequality_rows(p)
    m = C.shape[0]
    if max_iter is None:
        max_iter = 100 + 10 * (n + m)

    def finish(x, status, it, msg=""):
        N = np.vstack([A_eq, C[W]]) if W else A_eq
        if status == "optimal" and N.shape[0]:
            # polish: exact stationary point on the final active manifold
            rhs = np.concatenate([b_eq, d[W]])
            n_eq = A_eq.shape[0]
            K = np.block([[G, N.T], [N, np.zeros((N.shape[0], N.shape[0]))]])
            sol, *_ = np.linalg.lstsq(K, np.concatenate([-p.f, rhs]),
                                      rcond=None)
            x_pol = sol[:n]
            ok = np.max(np.abs(N @ x_pol - rhs)) <= tol if N.shape[0] else True
            if ok and (m == 0 or np.min(C @ x_pol - d) >= -tol):
                x = x_pol
        # consolidated duals for the final working set
        lam = np.zeros(0)
        if N.shape[0]:
            grad = G @ x + p.f
            lam, *_ = np.linalg.lstsq(N.T, grad, rcond=None)
        duals = QPDuals(eq=lam[:A_eq.shape[0]],
                        rows=np.zeros(m), row_meta=meta)
        for k, j in enumerate(W):
            duals.rows[j] = max(0.0, lam[A_eq.shape[0] + k])
        viol = 0.0
        if m:
            viol = max(viol, float(np.max(d - C @ x)))
        if A_eq.shape[0]:
            viol = max(viol, float(np.max(np.abs(A_eq @ x - b_eq))))
        grad = G @ x + p.f
        if N.shape[0]:
            grad = grad - N.T @ lam
        rep = SolveReport(
            status=status, iterations=it,
            primal_residual=max(0.0, viol),
            dual_residual=float(np.max(np.abs(grad))) if n else 0.0,
            solve_time_ms=(time.perf_counter() - t0) * 1e3,
            regularized=regularized, message=msg)
        return x, rep, duals

    # start at the equality-constrained minimum
    try:
        x, _ = _kkt_solve(G, A_eq, -p.f, b_eq)
    except np.linalg.LinAlgError:
        W: list[int] = []
        return finish(np.zeros(n), "infeasible", 0,
                      "singular equality system")
    W = []           # working set: indices into C
    u_W: list[float] = []
    it = 0
    while it < max_iter:
        it += 1
        slack = C @ x - d if m else np.zeros(0)
        if m == 0 or np.min(slack) >= -tol:
            x, rep, duals = finish(x, "optimal", it)
            # polish: one refinement solve on the final active manifold
            return x, rep, duals
        pidx = int(np.argmin(slack))
        n_p = C[pidx]
        u_p = 0.0
        while True:
            it += 1
            N = np.vstack([A_eq, C[W]]) if W else A_eq
            try:
                z, r = _kkt_solve(G, N, n_p, np.zeros(N.shape[0]))
            except np.linalg.LinAlgError:
                return finish(x, "infeasible", it,
                              f"degenerate working set at row {pidx}")
            r_W = r[A_eq.shape[0]:]
            # dual blocking step
            t1, jdrop = np.inf, -1
            for k, j in enumerate(W):
                if r_W[k] > 1e-12:
                    cand = u_W[k] / r_W[k]
                    if cand < t1:
                        t1, jdrop = cand, k
            denom = float(n_p @ z)
            s_p = float(C[pidx] @ x - d[pidx])
            t2 = (-s_p / denom
                  if denom > 1e-12 * max(1.0, float(n_p @ n_p)) else np.inf)
            t = min(t1, t2)
            if not np.isfinite(t):
                return finish(
                    x, "infeasible", it,
                    f"constraint row {pidx} ({meta[pidx]}) incompatible "
                    f"with the working set")
            if np.isfinite(t2):
                x = x + t * z
            for k in range(len(W)):
                u_W[k] -= t * r_W[k]
            u_p += t
            if t == t2:
                W.append(pidx)
                u_W.append(u_p)
                break
            # partial step: drop the blocking constraint, stay on pidx
            W.pop(jdrop)
            u_W.pop(jdrop)
            if it >= max_iter:
                break
    return finish(x, "max_iter", it, "iteration limit reached")


def check_qp_kkt(p: QPProblem, x: np.ndarray, duals: QPDuals,
                 tol: float = 1e-8) -> dict:
    """Independent KKT residuals: stationarity, feasibility, complementarity.

    Written directly from the optimality conditions; shares nothing with the
    active-set iteration.  Residuals are scaled by the problem magnitude.
    """
    x = np.asarray(x, dtype=float).reshape(p.n)
    grad = p.H @ x + p.f
    scale = 1.0 + float(np.max(np.abs(grad))) if grad.size else 1.0
    C, d, _ = inequality_rows(p)
    stat = grad.copy()
    eq_res = 0.0
    if p.A_eq is not None and p.A_eq.shape[0]:
        stat = stat - p.A_eq.T @ duals.eq
        eq_res = float(np.max(np.abs(p.A_eq @ x - p.b_eq)))
    comp = 0.0
    ineq_res = 0.0
    if C.shape[0]:
        stat = stat - C.T @ duals.rows
        slack = C @ x - d
        ineq_res = float(max(0.0, np.max(-slack)))
        comp = float(np.max(np.abs(duals.rows * slack)))
    out = {
        "stationarity": float(np.max(np.abs(stat))) / scale if stat.size else 0.0,
        "eq_feasibility": eq_res,
        "ineq_feasibility": ineq_res,
        "complementarity": comp / scale,
        "dual_feasibility": float(max(0.0, -np.min(duals.rows)))
        if duals.rows.size else 0.0,
    }
    out["pass"] = all(v <= tol for k, v in out.items() if k != "pass")
    return out


# ---------------------------------------------------------------------------
# NLP
# ---------------------------------------------------------------------------

@dataclass
class NLPProblem:
    """min f(x) s.t. c_eq(x) = 0, c_in(x) >= 0, lb <= x <= ub.

    Derivative callbacks are optional; missing ones fall back to forward
    finite differences with step 1e-7 (a warning is issued once per solve,
    and the achievable KKT tolerance degrades accordingly).
    """

    n: int
    objective: Callable[[np.ndarray], float]
    x0: np.ndarray
    gradient: Callable[[np.ndarray], np.ndarray] | None = None
    c_eq: Callable[[np.ndarray], np.ndarray] | None = None
    jac_eq: Callable[[np.ndarray], np.ndarray] | None = None
    c_in: Callable[[np.ndarray], np.ndarray] | None = None
    jac_in: Callable[[np.ndarray], np.ndarray] | None = None
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None
    fd_step: float = 1e-7
    hessian0: np.ndarray | None = None  # initial Lagrangian Hessian estimate
    trust_box: np.ndarray | None = None  # per-variable cap on one SQP step
    # exact Lagrangian Hessian callback (x, lam_eq, mu_in) -> (n, n); when
    # given, SQP uses it (convexified) instead of BFGS updates
    lagrangian_hessian: Callable | None = None

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float).reshape(self.n)
        self.lb = (np.full(self.n, -np.inf) if self.lb is None
                   else np.asarray(self.lb, dtype=float).reshape(self.n))
        self.ub = (np.full(self.n, np.inf) if self.ub is None
                   else np.asarray(self.ub, dtype=float).reshape(self.n))
        if self.hessian0 is not None:
            self.hessian0 = np.asarray(self.hessian0, dtype=float)


def _fd_jac(fun, x, f0, step):
    f0 = np.atleast_1d(f0)
    J = np.zeros((f0.size, x.size))
    for i in range(x.size):
        xp = x.copy()
        xp[i] += step
        J[:, i] = (np.atleast_1d(fun(xp)) - f0) / step
    return J


def _guard(name, arr):
    if not np.all(np.isfinite(arr)):
        raise EvaluationError(f"{name} returned a non-finite value")
    return arr


class _NLPFuncs:
    """Caches one evaluation point; supplies FD derivatives when needed."""

    def __init__(self, p: NLPProblem):
        self.p = p
        self.warned = False

    def _warn(self):
        if not self.warned:
            warnings.warn(
                "NLP derivative callback missing; using forward finite "
                "differences (step %.0e)" % self.p.fd_step, RuntimeWarning)
            self.warned = True

    def all_at(self, x):
        p = self.p
        f = float(_guard("objective", np.atleast_1d(p.objective(x)))[0])
        ce = (_guard("c_eq", np.atleast_1d(p.c_eq(x))) if p.c_eq else np.zeros(0))
        ci = (_guard("c_in", np.atleast_1d(p.c_in(x))) if p.c_in else np.zeros(0))
        return f, ce, ci

    def derivs_at(self, x, f, ce, ci):
        p = self.p
        if p.gradient is not None:
            g = _guard("gradient", np.asarray(p.gradient(x), dtype=float).reshape(p.n))
        else:
            self._warn()
            g = _fd_jac(lambda v: p.objective(v), x, f, p.fd_step).reshape(p.n)
        Je = np.zeros((0, p.n))
        if p.c_eq is not None:
            if p.jac_eq is not None:
                Je = _guard("jac_eq", np.atleast_2d(p.jac_eq(x)))
            else:
                self._warn()
                Je = _fd_jac(p.c_eq, x, ce, p.fd_step)
        Ji = np.zeros((0, p.n))
        if p.c_in is not None:
            if p.jac_in is not None:
                Ji = _guard("jac_in", np.atleast_2d(p.jac_in(x)))
            else:
                self._warn()
                Ji = _fd_jac(p.c_in, x, ci, p.fd_step)
        return g, Je, Ji


def _merit(f, ce, ci, nu):
    return f + nu * (np.sum(np.abs(ce)) + np.sum(np.maximum(0.0, -ci)))


def _viol(ce, ci):
    v = 0.0
    if ce.size:
        v = max(v, float(np.max(np.abs(ce))))
    if ci.size:
        v = max(v, float(max(0.0, -np.min(ci))))
    return v


def solve_nlp(p: NLPProblem, tol: float = 1e-6,
              max_iter: int = 150) -> tuple[np.ndarray, SolveReport, dict]:
    """Line-search SQP with damped BFGS.  Returns (x, report, duals).

    duals = {"eq": lambda, "in": mu, "lb": mu_lo, "ub": mu_up}; on success
    the independent ``check_nlp_kkt`` passes at ``tol``.
    """
    t0 = time.perf_counter()
    if np.any(p.lb > p.ub):
        rep = SolveReport("infeasible", 0, np.inf, np.inf,
                          (time.perf_counter() - t0) * 1e3,
                          message="crossed variable bounds")
        return p.x0.copy(), rep, {}
    funcs = _NLPFuncs(p)
    x = np.clip(p.x0.copy(), p.lb, p.ub)
    if not np.all(np.isfinite(x)):
        raise EvaluationError("initial guess is not finite")
    B0 = np.eye(p.n) if p.hessian0 is None else 0.5 * (p.hessian0 + p.hessian0.T)
    B = B0.copy()
    nu = 1.0

    def convexified(H):
        # flip negative curvature instead of flooring it: keeps the QP model
        # stiff along concave directions so steps stay short there
        H = 0.5 * (H + H.T)
        w, V = np.linalg.eigh(H)
        w = np.maximum(np.abs(w), 1e-6 * max(1.0, float(np.max(np.abs(w)))))
        return (V * w) @ V.T
    f, ce, ci = funcs.all_at(x)
    g, Je, Ji = funcs.derivs_at(x, f, ce, ci)
    duals = {"eq": np.zeros(Je.shape[0]), "in": np.zeros(Ji.shape[0]),
             "lb": np.zeros(p.n), "ub": np.zeros(p.n)}
    best = (np.inf, x.copy())
    stalls = 0
    it = 0
    for it in range(1, max_iter + 1):
        kkt = check_nlp_kkt(p, x, duals, tol, _cached=(f, ce, ci, g, Je, Ji))
        if kkt["pass"]:
            rep = SolveReport("optimal", it, kkt["feasibility"],
                              kkt["stationarity"],
                              (time.perf_counter() - t0) * 1e3)
            return x, rep, duals

        if p.lagrangian_hessian is not None:
            B = convexified(p.lagrangian_hessian(x, duals["eq"], duals["in"]))

        # QP subproblem (relax toward pure feasibility if inconsistent)
        d = None
        qp_duals = None
        lb_d, ub_d = p.lb - x, p.ub - x
        if p.trust_box is not None:
            lb_d = np.maximum(lb_d, -p.trust_box)
            ub_d = np.minimum(ub_d, p.trust_box)
        for theta in (1.0, 0.7, 0.4, 0.2, 0.05, 0.0):
            viol_in = np.maximum(0.0, -ci) if ci.size else np.zeros(0)
            sub = QPProblem(
                H=B, f=g,
                A_eq=Je if Je.shape[0] else None,
                b_eq=-theta * ce if Je.shape[0] else None,
                A_in=Ji if Ji.shape[0] else None,
                lb_in=(-ci - (1.0 - theta) * viol_in) if Ji.shape[0] else None,
                ub_in=None,
                lb=lb_d, ub=ub_d)
            d_try, rep_qp, qd = solve_qp(sub, tol=min(1e-9, tol * 1e-2))
            if rep_qp.status == "optimal":
                d = d_try
                qp_duals = qd
                break
        if d is None:
            rep = SolveReport("infeasible", it, _viol(ce, ci), np.inf,
                              (time.perf_counter() - t0) * 1e3,
                              message="QP subproblem infeasible")
            return x, rep, duals

        # multipliers from the subproblem
        lam = qp_duals.eq if Je.shape[0] else np.zeros(0)
        mu = np.zeros(Ji.shape[0])
        mu_lo = np.zeros(p.n)
        mu_up = np.zeros(p.n)
        for val, (kind, idx, side) in zip(qp_duals.rows, qp_duals.row_meta):
            if kind == "ineq":
                mu[idx] += val
            elif side == "lower":
                mu_lo[idx] += val
            else:
                mu_up[idx] += val
        duals = {"eq": lam, "in": mu, "lb": mu_lo, "ub": mu_up}

        dual_inf = max(
            [np.max(np.abs(lam)) if lam.size else 0.0,
             np.max(mu) if mu.size else 0.0, 1.0])
        nu = max(0.5 * nu + 0.5 * 1.5 * dual_inf, 1.5 * dual_inf)

        phi0 = _merit(f, ce, ci, nu)
        dphi = float(g @ d) - nu * (np.sum(np.abs(ce))
                                    + np.sum(np.maximum(0.0, -ci)))
        if dphi > -1e-16:
            dphi = -1e-16
        alpha = 1.0
        accepted = False
        for ls in range(30):
            x_try = np.clip(x + alpha * d, p.lb, p.ub)
            try:
                f_t, ce_t, ci_t = funcs.all_at(x_try)
            except EvaluationError:
                alpha *= 0.5
                continue
            if _merit(f_t, ce_t, ci_t, nu) <= phi0 + 1e-4 * alpha * dphi:
                accepted = True
                break
            if ls == 0 and (Je.shape[0] or ci.size):
                # second-order correction: cancel the constraint curvature
                # picked up over the full step (Maratos fix)
                act = [Je] if Je.shape[0] else []
                cv = [ce_t] if Je.shape[0] else []
                if ci.size:
                    bad = ci_t < 0
                    if np.any(bad):
                        act.append(Ji[bad])
                        cv.append(ci_t[bad])
                if act:
                    A_act = np.vstack(act)
                    c_act = np.concatenate(cv)
                    AAt = A_act @ A_act.T + 1e-10 * np.eye(A_act.shape[0])
                    d_soc = -A_act.T @ np.linalg.solve(AAt, c_act)
                    x_soc = np.clip(x + d + d_soc, p.lb, p.ub)
                    try:
                        f_s, ce_s, ci_s = funcs.all_at(x_soc)
                        if (_merit(f_s, ce_s, ci_s, nu)
                                <= phi0 + 1e-4 * dphi):
                            x_try, f_t, ce_t, ci_t = x_soc, f_s, ce_s, ci_s
                            accepted = True
                            break
                    except EvaluationError:
                        pass
            alpha *= 0.5
        if not accepted:
            stalls += 1
            if stalls == 2:
                B = B0.copy()  # recover from a corrupted curvature estimate
            if stalls >= 5:
                status = ("infeasible" if _viol(ce, ci) > 100 * tol
                          else "max_iter")
                rep = SolveReport(status, it, _viol(ce, ci), np.inf,
                                  (time.perf_counter() - t0) * 1e3,
                                  message="line search stalled")
                xb = best[1] if best[0] < np.inf else x
                return xb, rep, duals
            x_try = np.clip(x + 1e-8 * d, p.lb, p.ub)
            f_t, ce_t, ci_t = funcs.all_at(x_try)
        else:
            stalls = 0

        g_t, Je_t, Ji_t = funcs.derivs_at(x_try, f_t, ce_t, ci_t)
        if p.lagrangian_hessian is None:
            # damped BFGS on the Lagrangian gradient
            s = x_try - x
            gl_new = g_t.copy()
            gl_old = g.copy()
            if Je.shape[0]:
                gl_new -= Je_t.T @ lam
                gl_old -= Je.T @ lam
            if Ji.shape[0]:
                gl_new -= Ji_t.T @ mu
                gl_old -= Ji.T @ mu
            y = gl_new - gl_old
            sBs = float(s @ B @ s)
            sy = float(s @ y)
            if sBs > 1e-16 and float(s @ s) > 1e-20:
                if sy < 0.2 * sBs:
                    th = 0.8 * sBs / (sBs - sy)
                    y = th * y + (1.0 - th) * (B @ s)
                    sy = float(s @ y)
                if sy > 1e-12:
                    Bs = B @ s
                    B = B - np.outer(Bs, Bs) / sBs + np.outer(y, y) / sy
                    B = 0.5 * (B + B.T)
        x, f, ce, ci, g, Je, Ji = x_try, f_t, ce_t, ci_t, g_t, Je_t, Ji_t
        mval = _merit(f, ce, ci, nu) + 1e6 * _viol(ce, ci)
        if mval < best[0]:
            best = (mval, x.copy())

    kkt = check_nlp_kkt(p, x, duals, tol)
    rep = SolveReport("max_iter", it, kkt["feasibility"], kkt["stationarity"],
                      (time.perf_counter() - t0) * 1e3,
                      message="iteration limit reached")
    return x, rep, duals


def check_nlp_kkt(p: NLPProblem, x: np.ndarray, duals: dict,
                  tol: float = 1e-6, _cached=None) -> dict:
    """First-order KKT residuals for an NLP solution, independent code path."""
    x = np.asarray(x, dtype=float).reshape(p.n)
    if _cached is not None:
        f, ce, ci, g, Je, Ji = _cached
    else:
        funcs = _NLPFuncs(p)
        f, ce, ci = funcs.all_at(x)
        g, Je, Ji = funcs.derivs_at(x, f, ce, ci)
    lam = np.asarray(duals.get("eq", np.zeros(Je.shape[0])), dtype=float)
    mu = np.asarray(duals.get("in", np.zeros(Ji.shape[0])), dtype=float)
    mu_lo = np.asarray(duals.get("lb", np.zeros(p.n)), dtype=float)
    mu_up = np.asarray(duals.get("ub", np.zeros(p.n)), dtype=float)
    stat = g.copy()
    if Je.shape[0]:
        stat -= Je.T @ lam
    if Ji.shape[0]:
        stat -= Ji.T @ mu
    stat -= mu_lo
    stat += mu_up
    scale = 1.0 + float(np.max(np.abs(g)))
    comp = 0.0
    if ci.size:
        comp = float(np.max(np.abs(mu * ci))) / scale
    lo_act = np.where(np.isfinite(p.lb), x - p.lb, np.inf)
    up_act = np.where(np.isfinite(p.ub), p.ub - x, np.inf)
    comp = max(comp,
               float(np.max(np.abs(mu_lo * np.where(np.isfinite(lo_act), lo_act, 0.0)))) / scale,
               float(np.max(np.abs(mu_up * np.where(np.isfinite(up_act), up_act, 0.0)))) / scale)
    out = {
        "stationarity": float(np.max(np.abs(stat))) / scale,
        "feasibility": _viol(ce, ci),
        "complementarity": comp,
        "dual_feasibility": float(max(0.0, -min(
            np.min(mu) if mu.size else 0.0,
            np.min(mu_lo), np.min(mu_up)))),
    }
    out["pass"] = all(v <= tol for k, v in out.items() if k != "pass")
    return out
