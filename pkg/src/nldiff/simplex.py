"""Dense simplex solvers for  max c.x  subject to  A x <= b,  x free.

Two routes share one optimality certificate:

* :func:`simplex_solve` -- textbook two-phase tableau simplex with Bland's
  rule on the standard form  [A, -A, I] z = b, z >= 0.
* :class:`ActiveSetLP` -- revised simplex on the vertex (active-set)
  form, for a family of LPs that share ``A`` and ``b`` and differ only in
  ``c``; many LPs are pivoted together and warm-started from earlier
  optima.

A solution is accepted only with a certificate: primal feasibility
A x <= b + tol, dual feasibility y >= -tol with A^T y = c, and a zero
duality gap.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import LPError, LPInfeasibleError, LPIterationError, LPUnboundedError

FEAS_TOL = 1e-9
# random anti-stall picks only consider pivot elements at least this
# fraction of the largest eligible one
PIVOT_FLOOR = 1e-2
# smallest admissible cosine between an entering row and the edge direction
PIVOT_TOL = 1e-9


@dataclass
class LPResult:
    x: np.ndarray
    value: float
    duals: np.ndarray
    iterations: int = 0
    active: tuple[int, ...] = ()

    def __iter__(self):
        yield self.x
        yield self.value


def certify(A, b, c, x, y, tol: float = FEAS_TOL) -> None:
    """Raise :class:`LPError` unless (x, y) is a primal/dual optimal pair."""
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    scale = 1.0 + max(np.abs(c).max(initial=0.0), np.abs(b).max(initial=0.0))
    viol = (A @ x - b).max(initial=-np.inf)
    if viol > tol * (1.0 + np.abs(b).max(initial=0.0)):
        raise LPError(f"primal infeasible by {viol:.3e}")
    if y.min(initial=0.0) < -tol * scale:
        raise LPError(f"negative dual {y.min():.3e}: reduced costs not optimal")
    resid = np.abs(A.T @ y - c).max(initial=0.0)
    if resid > tol * scale:
        raise LPError(f"dual residual {resid:.3e}")
    gap = abs(float(b @ y) - float(c @ x))
    if gap > tol * scale * (1.0 + abs(float(c @ x))):
        raise LPError(f"duality gap {gap:.3e}")


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _bland_iterate(T, basis, ncols, max_iter, tol, allowed):
    """Primal simplex on tableau ``T`` (last row: reduced costs, maximize)."""
    it = 0
    m = len(basis)
    while True:
        rc = T[-1, :ncols]
        cand = np.flatnonzero((rc > tol) & allowed)
        if cand.size == 0:
            return it
        if it >= max_iter:
            raise LPIterationError(f"iteration cap {max_iter} exceeded")
        j = cand[0]
        colj = T[:m, j]
        pos = np.flatnonzero(colj > tol)
        if pos.size == 0:
            raise LPUnboundedError("objective unbounded above")
        ratios = T[pos, -1] / colj[pos]
        best = ratios.min()
        ties = pos[ratios <= best + tol * max(1.0, abs(best))]
        r = min(ties, key=lambda i: basis[i])
        _pivot(T, r, j)
        basis[r] = j
        it += 1


def simplex_solve(c, A, b, max_iter: int = 50_000, tol: float = 1e-11) -> LPResult:
    """Maximize c.x subject to A x <= b with x free (two-phase, Bland's rule)."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64).ravel()
    c = np.asarray(c, dtype=np.float64).ravel()
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("shape mismatch between c, A and b")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise ValueError("LP data must be finite")

    # standard form columns: x+ (n), x- (n), slacks (m), artificials (k)
    std = np.hstack([A, -A, np.eye(m)])
    sign = np.where(b < 0, -1.0, 1.0)
    neg = np.flatnonzero(b < 0)
    k = neg.size
    nstd = 2 * n + m
    T = np.zeros((m + 1, nstd + k + 1))
    T[:m, :nstd] = std * sign[:, None]
    T[:m, -1] = b * sign
    T[neg, nstd + np.arange(k)] = 1.0
    basis = [2 * n + i for i in range(m)]
    for a, i in enumerate(neg):
        basis[i] = nstd + a
    iters = 0

    if k:
        # phase 1: maximize -sum(artificials)
        T[-1, :] = T[neg, :].sum(axis=0)
        T[-1, nstd : nstd + k] = 0.0
        allowed = np.ones(nstd + k, dtype=bool)
        iters += _bland_iterate(T, basis, nstd + k, max_iter, tol, allowed)
        if T[-1, -1] > 1e-9 * (1.0 + np.abs(b).max()):
            raise LPInfeasibleError("constraints admit no solution")
        # drive zero-level artificials out of the basis
        for r in range(m):
            if basis[r] >= nstd:
                nz = np.flatnonzero(np.abs(T[r, :nstd]) > 1e-9)
                if nz.size:
                    _pivot(T, r, nz[0])
                    basis[r] = nz[0]
        keep = [r for r in range(m) if basis[r] < nstd]
        T = np.vstack([T[keep], T[-1:]])
        T = np.hstack([T[:, :nstd], T[:, -1:]])
        basis = [basis[r] for r in keep]

    cstd = np.concatenate([c, -c, np.zeros(m)])
    mm = len(basis)
    T[-1, :] = 0.0
    T[-1, :nstd] = cstd
    cb = cstd[basis]
    T[-1, :] -= cb @ T[:mm, :]
    allowed = np.ones(nstd, dtype=bool)
    iters += _bland_iterate(T, basis, nstd, max_iter, tol, allowed)

    z = np.zeros(nstd)
    z[basis] = T[:mm, -1]
    x = z[:n] - z[n : 2 * n]
    # duals from the final basis of the original (unscaled) standard form
    y = np.linalg.lstsq(std[:, basis].T, cstd[basis], rcond=None)[0]
    y = np.where(np.abs(y) < 1e-14, 0.0, y)
    certify(A, b, c, x, y)
    basic_slacks = {j - 2 * n for j in basis if j >= 2 * n}
    active = tuple(i for i in range(m) if i not in basic_slacks)
    return LPResult(x=x, value=float(c @ x), duals=y, iterations=iters, active=active)


def _random_pick(default: np.ndarray, mask: np.ndarray, which: np.ndarray, rng) -> np.ndarray:
    """``default``, except that rows flagged in ``which`` get the column of a
    uniformly chosen True entry of ``mask``."""
    out = default.copy()
    r = np.flatnonzero(which)
    out[r] = np.argmax(np.where(mask[r], rng.random_sample((r.size, mask.shape[1])), -1.0), axis=1)
    return out


@dataclass
class Vertices:
    """A batch of vertices of {a : G a <= b}: active rows, inverse of the
    active submatrix and coordinates, one vertex per row."""

    active: np.ndarray  # (P, n) int
    inv: np.ndarray  # (P, n, n)
    x: np.ndarray  # (P, n)

    def __len__(self):
        return len(self.x)

    def take(self, idx) -> Vertices:
        return Vertices(self.active[idx], self.inv[idx], self.x[idx])

    @staticmethod
    def concat(parts) -> Vertices:
        return Vertices(*(np.concatenate([getattr(v, f) for v in parts]) for f in ("active", "inv", "x")))


class _SeedPool:
    """Bounded set of distinct vertices used to start cold LPs."""

    def __init__(self, n: int, limit: int):
        self.limit = limit
        self.keys: set[tuple[int, ...]] = set()
        self.parts: list[Vertices] = []
        self._flat: Vertices | None = None

    def __len__(self):
        return len(self.keys)

    def add(self, V: Vertices) -> None:
        keep = []
        for j, act in enumerate(np.sort(V.active, axis=1)):
            if len(self.keys) >= self.limit:
                break
            key = tuple(act.tolist())
            if key not in self.keys:
                self.keys.add(key)
                keep.append(j)
        if keep:
            self.parts.append(V.take(np.array(keep)))
            self._flat = None

    @property
    def all(self) -> Vertices:
        if self._flat is None:
            self._flat = Vertices.concat(self.parts)
            self.parts = [self._flat]
        return self._flat

    def best(self, C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(index, value) of the seed maximizing each row of ``C``."""
        X = self.all.x
        idx = np.empty(len(C), dtype=np.intp)
        step = max(1, 2**22 // len(X))
        for lo in range(0, len(C), step):
            idx[lo : lo + step] = np.argmax(C[lo : lo + step] @ X.T, axis=1)
        return idx, np.einsum("pi,pi->p", C, X[idx])


@dataclass
class BatchSolution:
    values: np.ndarray
    vertices: Vertices  # optimal vertices of the full problem
    duals: np.ndarray  # multipliers on each vertex's active rows
    pivots: int
    warm: Vertices  # optima on the coarsest level, to warm-start the next call


class _Level:
    """The subproblem made of a subset of the constraint rows."""

    def __init__(self, G, b, rows):
        self.rows = np.asarray(rows, dtype=np.intp)
        self.G = np.ascontiguousarray(G[self.rows])
        self.b = b[self.rows]
        self.pos = np.full(len(G), -1, dtype=np.intp)
        self.pos[self.rows] = np.arange(len(self.rows))
        self.norms = np.sqrt((self.G**2).sum(axis=1))


class ActiveSetLP:
    """Revised simplex over vertices of the fixed polytope {a : G a <= b}.

    ``b`` must be strictly positive so that ``a = 0`` is interior; this is
    the case for the harmonic local-variation LP (b = 1). The polytope must
    be bounded.

    Sampled-gradient constraints are highly degenerate (hundreds of rows
    can be tight at one vertex) and neighbouring rows are nearly parallel,
    so bases are ill-conditioned (condition numbers around 1e7 are normal).
    Pricing is steepest edge with a Harris ratio test. When a row's
    objective has not improved for ``degenerate_limit`` pivots it
    alternates short bursts of random pivots (leaving and entering rows
    drawn among the eligible ones) with regular ones until it improves.
    Random bursts break degenerate cycles and, unlike Bland's rule, do not
    crawl. The random stream is seeded per call and chunk, so results are
    reproducible.

    ``levels`` optionally lists nested subsets of rows, coarsest first
    (for sampled constraints: coarser boundary meshes). The primal simplex
    runs on the coarsest level only; each finer level starts from the
    previous optimum, which stays dual feasible, and restores primal
    feasibility with the dual simplex. A final primal pass on the full row
    set guarantees optimality.

    LPs are pivoted in lockstep batches that share the linear algebra.
    Basis inverses get rank-one updates and are recomputed from scratch
    every ``refresh`` pivots and before a result is accepted.
    """

    def __init__(
        self,
        G,
        b=None,
        levels=None,
        tol: float = 1e-10,
        max_iter: int = 10_000,
        degenerate_limit: int = 20,
        refresh: int = 25,
        seed_limit: int = 4096,
        chunk: int = 512,
        threads: int = 1,
    ):
        self.G = np.ascontiguousarray(G, dtype=np.float64)
        m, n = self.G.shape
        self.b = np.ones(m) if b is None else np.asarray(b, dtype=np.float64)
        if np.any(self.b <= 0):
            raise ValueError("right-hand side must be strictly positive")
        rows = [np.sort(np.asarray(r, dtype=np.intp)) for r in (levels or [])]
        if not rows or len(rows[-1]) != m:
            rows.append(np.arange(m))
        for coarse, fine in zip(rows[:-1], rows[1:]):
            if not np.isin(coarse, fine).all():
                raise ValueError("constraint levels must be nested")
        self.levels = [_Level(self.G, self.b, r) for r in rows]
        self.tol = tol
        self.degenerate_limit = degenerate_limit
        self.max_iter = max_iter
        self.refresh = refresh
        self.chunk = chunk
        self.threads = max(1, threads)
        self.seeds = _SeedPool(n, seed_limit)
        self._calls = 0

    @property
    def n(self) -> int:
        return self.G.shape[1]

    def _vertices(self, active: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Exact inverses and coordinates for a batch of active sets."""
        GB = self.G[active]
        bB = self.b[active]
        inv = np.linalg.inv(GB)
        x = np.einsum("pij,pj->pi", inv, bB)
        x += np.einsum("pij,pj->pi", inv, bB - np.einsum("pij,pj->pi", GB, x))  # iterative refinement
        return inv, x

    def _check_feasible(self, x: np.ndarray) -> None:
        viol = (x @ self.G.T - self.b).max(initial=-np.inf)
        if viol > FEAS_TOL * (1.0 + self.b.max()):
            raise LPError(f"vertex infeasible by {viol:.3e}")

    @staticmethod
    def _ratio_test(lv: _Level, x, d, active, stuck, rng=None):
        """Batched Harris two-pass ratio test along directions ``d``.

        Pass one finds the longest step keeping every row within a small
        feasibility tolerance; pass two picks, among rows blocking before
        that step, the one with the largest pivot element (a random one for
        rows flagged ``stuck``). Returns (entering level row, step, G d).
        """
        Gd = d @ lv.G.T
        np.put_along_axis(Gd, lv.pos[active], 0.0, axis=1)
        # pivot elements must be large relative to |G_i| |d|: smaller ones are
        # rounding noise from an entering row in the span of the others
        cand = Gd > PIVOT_TOL * lv.norms[None, :] * np.sqrt((d * d).sum(axis=1))[:, None]
        if not cand.any(axis=1).all():
            raise LPUnboundedError("objective unbounded above (constraint samples rank deficient?)")
        slack = np.maximum(lv.b - x @ lv.G.T, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            t_all = np.where(cand, slack / Gd, np.inf)
            t_max = np.where(cand, (slack + 1e-12) / Gd, np.inf).min(axis=1)
        ok = t_all <= t_max[:, None]
        okG = np.where(ok, Gd, -np.inf)
        i = np.argmax(okG, axis=1)
        if stuck.any():
            # random choice, but never a tiny pivot element
            i = _random_pick(i, okG >= PIVOT_FLOOR * okG.max(axis=1)[:, None], stuck, rng)
        rows = np.arange(len(i))
        return i, t_all[rows, i], Gd[rows, i]

    def _crash(self, c: np.ndarray, tries: int = 20) -> Vertices:
        """A vertex of the coarsest level with a well-conditioned basis.

        Walks from the interior point a = 0, never decreasing c.a; if the
        walk ends on a nearly singular active set it is repeated with a
        slightly rotated objective.
        """
        rng = np.random.RandomState(1)
        scale = np.abs(c).max() + 1e-300
        for k in range(tries):
            obj = c if k == 0 else c + 0.1 * scale * rng.standard_normal(c.shape)
            active = self._crash_walk(obj)
            if np.linalg.cond(self.G[active]) < 1e10:
                act = np.array([active], dtype=np.intp)
                inv, x = self._vertices(act)
                return Vertices(act, inv, x)
        raise LPError("could not find a well-conditioned starting vertex")

    def _crash_walk(self, c: np.ndarray) -> list[int]:
        lv = self.levels[0]
        n = self.n
        x = np.zeros((1, n))
        active: list[int] = []
        for _ in range(n):
            if active:
                _, _, vt = np.linalg.svd(self.G[active])
                N = vt[len(active) :]
            else:
                N = np.eye(n)
            d = N.T @ (N @ c)
            if np.abs(d).max() <= 1e-12 * (1.0 + np.abs(c).max()):
                d = N[0]
            act = np.array(active, dtype=np.intp).reshape(1, -1)
            i, t, _ = self._ratio_test(lv, x, d[None], act, np.zeros(1, bool))
            x = x + t[0] * d
            active.append(int(lv.rows[i[0]]))
        return active

    # -- pivoting -------------------------------------------------------------
    def _iterate(self, C: np.ndarray, V: Vertices, rng, lv: _Level, dual: bool):
        """Pivot every row of ``C`` from ``V`` to optimality on level ``lv``.

        Primal mode needs primal feasible starts and keeps them feasible;
        dual mode needs dual feasible starts (nonnegative multipliers) and
        keeps those. Returns (optimal vertices, duals, pivots).
        """
        P, n = C.shape
        active, inv, x = V.active.copy(), V.inv.copy(), V.x.copy()
        out = Vertices(active.copy(), inv.copy(), x.copy())
        Yout = np.zeros((P, n))
        tol = self.tol * (1.0 + np.abs(C).max(axis=1))
        ftol = 0.1 * FEAS_TOL * (1.0 + lv.b.max())
        stalled = np.zeros(P, dtype=np.intp)  # pivots since the objective last moved
        best = np.einsum("pi,pi->p", C, x)
        since = np.zeros(P, dtype=np.intp)  # rank-one updates since last exact inverse
        live = np.arange(P)
        pivots = 0
        for _ in range(self.max_iter + 1):
            Y = np.einsum("pji,pj->pi", inv, C[live])
            if dual:
                r = x @ lv.G.T - lv.b
                np.put_along_axis(r, lv.pos[active], -np.inf, axis=1)
                viol = r > ftol
                done = ~viol.any(axis=1)
            else:
                negm = Y < -tol[live, None]
                done = ~negm.any(axis=1)
            stale = since > 0
            recheck = done & stale
            if recheck.any():
                # accept a result only with a freshly computed inverse
                j = np.flatnonzero(recheck)
                inv[j], x[j] = self._vertices(active[j])
                since[j] = 0
            fin = done & ~stale
            if fin.any():
                j = np.flatnonzero(fin)
                p = live[j]
                out.active[p], out.inv[p], out.x[p], Yout[p] = active[j], inv[j], x[j], Y[j]
                keep = ~fin
                live, active, inv, x = live[keep], active[keep], inv[keep], x[keep]
                stalled, best, since, Y, done = stalled[keep], best[keep], since[keep], Y[keep], done[keep]
                if dual:
                    r, viol = r[keep], viol[keep]
                else:
                    negm = negm[keep]
            if live.size == 0:
                return out, Yout, pivots
            j = np.flatnonzero(~done)
            if j.size == 0:
                continue
            if pivots >= self.max_iter * P:
                break
            # once stalled, alternate bursts of random and regular pivots
            over = stalled[j] - self.degenerate_limit
            stuck = (over >= 0) & (over % (2 * self.degenerate_limit) < self.degenerate_limit // 2)
            Bi = inv[j]
            rows = np.arange(j.size)
            if dual:
                # entering row: the most violated one
                rj = r[j]
                i = np.argmax(rj, axis=1)
                if stuck.any():
                    i = _random_pick(i, viol[j], stuck, rng)
                w = np.einsum("pk,pkj->pj", lv.G[i], Bi)
                cand = w > PIVOT_TOL * lv.norms[i][:, None] * np.sqrt((Bi**2).sum(axis=1))
                if not cand.any(axis=1).all():
                    raise LPInfeasibleError("constraints are inconsistent")
                yj = np.maximum(Y[j], 0.0)
                with np.errstate(divide="ignore", invalid="ignore"):
                    ratio = np.where(cand, yj / w, np.inf)
                    t_max = np.where(cand, (yj + tol[live[j], None]) / w, np.inf).min(axis=1)
                okw = np.where(ratio <= t_max[:, None], w, -np.inf)
                pos = np.argmax(okw, axis=1)
                if stuck.any():
                    pos = _random_pick(pos, okw >= PIVOT_FLOOR * okw.max(axis=1)[:, None], stuck, rng)
                wk = w[rows, pos]
                u = Bi[rows, :, pos]
                x[j] -= (rj[rows, i] / wk)[:, None] * u
                gd = -wk
                wi = w
            else:
                # steepest edge: largest rate of increase per unit step length
                norms = np.sqrt((Bi**2).sum(axis=1))
                pos = np.argmax(np.where(negm[j], -Y[j] / norms, -np.inf), axis=1)
                if stuck.any():
                    pos = _random_pick(pos, negm[j], stuck, rng)
                u = Bi[rows, :, pos]  # column of the leaving row
                i, t, gd = self._ratio_test(lv, x[j], -u, active[j], stuck, rng)
                x[j] -= t[:, None] * u
                wi = np.einsum("pk,pkj->pj", lv.G[i], Bi)
            # replace basis row pos by G[i]: inv <- inv + u (G[i] inv - e_pos)^T / (G[i] . d)
            wi[rows, pos] -= 1.0
            inv[j] = Bi + np.einsum("pi,pj->pij", u, wi) / gd[:, None, None]
            active[j, pos] = lv.rows[i]
            # the primal objective rises, the dual one falls; tiny moves count as stalls
            obj = np.einsum("pi,pi->p", C[live[j]], x[j])
            gain = best[j] - obj if dual else obj - best[j]
            moved = gain > 1e-12 * (1.0 + np.abs(obj))
            stalled[j] = np.where(moved, 0, stalled[j] + 1)
            best[j] = np.where(moved, obj, best[j])
            since[j] += 1
            pivots += j.size
            due = j[since[j] >= self.refresh]
            if due.size:
                inv[due], x[due] = self._vertices(active[due])
                since[due] = 0
        raise LPIterationError(f"iteration cap {self.max_iter} exceeded")

    def _pivot(self, C: np.ndarray, V: Vertices, level: int = 0, dual: bool = False):
        lv = self.levels[level]
        bounds = list(range(0, len(C), self.chunk)) + [len(C)]
        jobs = [(a, C[a:e], V.take(slice(a, e))) for a, e in zip(bounds[:-1], bounds[1:])]
        self._calls += 1
        calls = self._calls

        def run(job):
            rng = np.random.RandomState([calls, job[0]])
            return self._iterate(job[1], job[2], rng, lv, dual)

        if self.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                results = list(ex.map(run, jobs))
        else:
            results = [run(job) for job in jobs]
        if not results:
            return V, np.zeros((0, self.n)), 0
        out = Vertices.concat([r[0] for r in results])
        return out, np.concatenate([r[1] for r in results]), sum(r[2] for r in results)

    # -- solving --------------------------------------------------------------
    def _cold(self, C: np.ndarray):
        """Coarse-level solve without warm starts, in growing waves that
        feed the seed pool."""
        if len(self.seeds) == 0:
            self.seeds.add(self._crash(C[np.argmax(np.abs(C).sum(axis=1))]))
        order = np.random.RandomState(0).permutation(len(C))
        outs, pivots = [], 0
        lo, size = 0, 32
        while lo < len(C):
            sel = order[lo : lo + size]
            k, _ = self.seeds.best(C[sel])
            V, _, it = self._pivot(C[sel], self.seeds.all.take(k))
            self.seeds.add(V)
            outs.append(V)
            pivots += it
            lo += size
            size = min(2 * size, 4 * self.chunk * self.threads)
        return Vertices.concat(outs).take(np.argsort(order)), pivots

    def _warm(self, C: np.ndarray, warm: Vertices, candidates):
        if candidates is None:
            start = np.arange(len(C))
        else:
            candidates = np.asarray(candidates, dtype=np.intp)
            scores = np.einsum("pki,pi->pk", warm.x[candidates], C)
            start = candidates[np.arange(len(C)), np.argmax(scores, axis=1)]
        V = warm.take(start)
        # a seed with a better objective is usually a closer start
        k, sv = self.seeds.best(C)
        better = sv > np.einsum("pi,pi->p", C, V.x)
        if better.any():
            s = self.seeds.all.take(k[better])
            V.active[better], V.inv[better], V.x[better] = s.active, s.inv, s.x
        V, _, pivots = self._pivot(C, V)
        self.seeds.add(V)
        return V, pivots

    def solve_many(self, C, warm: Vertices | None = None, candidates=None, start: Vertices | None = None) -> BatchSolution:
        """Solve one LP per row of ``C``.

        ``warm`` holds starting vertices on the coarsest level, normally
        the ``warm`` field of an earlier solution; ``candidates``
        optionally lists, per row, several indices into ``warm`` of which
        the best for that row's objective is used.

        ``start`` gives one vertex of the full problem per row, normally
        the ``vertices`` of an earlier solution. Rows whose start is still
        optimal are done without a pivot. The others go through the coarse
        levels from ``warm`` (aligned with the rows unless ``candidates``
        says otherwise) or, without ``warm``, are pivoted from their start
        on the full problem.
        """
        C = np.atleast_2d(np.asarray(C, dtype=np.float64))
        if start is None:
            return self._multilevel(C, warm, candidates)
        if len(start) != len(C):
            raise ValueError(f"{len(start)} start vertices for {len(C)} objectives")
        Y = np.einsum("pji,pj->pi", start.inv, C)
        tol = self.tol * (1.0 + np.abs(C).max(axis=1))
        todo = np.flatnonzero((Y < -tol[:, None]).any(axis=1))
        V = Vertices(start.active.copy(), start.inv.copy(), start.x.copy())
        W = None
        if warm is not None:
            if candidates is None and len(warm) != len(C):
                raise ValueError("warm vertices are not aligned with the objectives")
            W = warm.take(np.arange(len(C))) if candidates is None else None
        pivots = 0
        if todo.size:
            if warm is None:
                sub, Ysub, pivots = self._pivot(C[todo], start.take(todo), len(self.levels) - 1)
            else:
                cand = todo[:, None] if candidates is None else np.asarray(candidates)[todo]
                res = self._multilevel(C[todo], warm, cand)
                sub, Ysub, pivots = res.vertices, res.duals, res.pivots
                if W is not None:
                    W.active[todo], W.inv[todo], W.x[todo] = res.warm.active, res.warm.inv, res.warm.x
            V.active[todo], V.inv[todo], V.x[todo] = sub.active, sub.inv, sub.x
            Y[todo] = Ysub
        self._check_feasible(V.x)
        return BatchSolution(np.einsum("pi,pi->p", C, V.x), V, Y, pivots, W)

    def _multilevel(self, C, warm, candidates) -> BatchSolution:
        if warm is None or len(self.seeds) == 0:
            V0, pivots = self._cold(C)
        else:
            V0, pivots = self._warm(C, warm, candidates)
        V = V0
        for k in range(1, len(self.levels)):
            V, _, it = self._pivot(C, V, k, dual=True)
            pivots += it
        V, Y, it = self._pivot(C, V, len(self.levels) - 1)
        pivots += it
        self._check_feasible(V.x)
        return BatchSolution(np.einsum("pi,pi->p", C, V.x), V, Y, pivots, V0)

    def solve(self, c) -> LPResult:
        """Single certified LP."""
        c = np.asarray(c, dtype=np.float64)
        sol = self.solve_many(c[None])
        V = sol.vertices
        duals = np.zeros(self.G.shape[0])
        duals[V.active[0]] = sol.duals[0]
        certify(self.G, self.b, c, V.x[0], duals)
        return LPResult(
            x=V.x[0].copy(), value=float(sol.values[0]), duals=duals, iterations=sol.pivots, active=tuple(int(k) for k in V.active[0])
        )
