"""Bracketed 1-D minimization helpers (coarse scan + golden-section refinement)."""

from __future__ import annotations

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0  # 1/phi^2

SCAN_SAMPLES = 1024
PARAM_TOL = 1e-12


def golden_section(f, a: float, b: float, tol: float = PARAM_TOL) -> tuple[float, float]:
    """Minimize scalar f on [a, b]; returns (t_min, f(t_min))."""
    h = b - a
    if h <= tol:
        t = 0.5 * (a + b)
        return t, f(t)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def golden_section_vec(f, a: np.ndarray, b: np.ndarray, tol: float = PARAM_TOL,
                       max_iter: int = 90) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized golden-section search over per-row brackets [a_i, b_i].

    f maps a parameter array to an objective array of the same shape.  All rows
    iterate in lockstep until every bracket width is below tol.
    """
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(max_iter):
        if np.all(b - a <= tol):
            break
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        h = b - a
        new_c = a + _INVPHI2 * h
        new_d = a + _INVPHI * h
        # Rows moving left reuse fc as the new fd; rows moving right reuse fd as fc.
        eval_c = np.where(left, new_c, new_d)
        fe = f(eval_c)
        fd_next = np.where(left, fc, fe)
        fc_next = np.where(left, fe, fd)
        c, d, fc, fd = new_c, new_d, fc_next, fd_next
    t = 0.5 * (a + b)
    return t, f(t)


def stationary_polish(stat, t0: float, lo: float, hi: float,
                      step0: float = 1e-6, max_iter: int = 12) -> float:
    """Secant refinement of the projection parameter near a golden-section seed.

    Comparison-based search resolves a flat minimum only to ~sqrt(eps) in the
    parameter; driving the stationarity function stat(t) = (curve(t) - x) .
    curve'(t) to zero recovers full precision.  Falls back to t0 when the
    residual does not shrink or the iterate escapes the window.
    """
    span = hi - lo
    t_prev = min(max(t0 - step0, lo), hi)
    t_cur = min(max(t0 + step0, lo), hi)
    if t_prev == t_cur:
        return t0
    f_prev = stat(t_prev)
    f_cur = stat(t_cur)
    best_t, best_f = (t_prev, abs(f_prev)) if abs(f_prev) < abs(f_cur) else (t_cur, abs(f_cur))
    f0 = abs(stat(t0))
    if f0 <= best_f:
        best_t, best_f = t0, f0
    for _ in range(max_iter):
        denom = f_cur - f_prev
        if denom == 0.0:
            break
        t_next = t_cur - f_cur * (t_cur - t_prev) / denom
        if not (lo <= t_next <= hi) or abs(t_next - t0) > 0.05 * span + 10.0 * step0:
            break
        f_next = stat(t_next)
        t_prev, f_prev, t_cur, f_cur = t_cur, f_cur, t_next, f_next
        if abs(f_next) < best_f:
            best_t, best_f = t_next, abs(f_next)
        if f_next == 0.0:
            break
    return best_t


def local_minima_indices(values: np.ndarray, closed: bool) -> np.ndarray:
    """Indices of samples that are local minima of a scanned objective.

    For closed curves the comparison wraps around; for open ones the endpoints
    qualify when they beat their single neighbor.  Plateau samples (equal
    neighbors) count, so flat near-optimal stretches are not dropped.
    """
    n = len(values)
    if n < 3:
        return np.arange(n)
    if closed:
        prev = np.roll(values, 1)
        nxt = np.roll(values, -1)
        mask = (values <= prev) & (values <= nxt)
    else:
        mask = np.empty(n, dtype=bool)
        mask[0] = values[0] <= values[1]
        mask[-1] = values[-1] <= values[-2]
        mask[1:-1] = (values[1:-1] <= values[:-2]) & (values[1:-1] <= values[2:])
    return np.nonzero(mask)[0]
