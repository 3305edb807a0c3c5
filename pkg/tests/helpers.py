"""Shared test helpers: independent oracles and data generators.

The oracles here deliberately avoid the library's vectorized code
paths: similarity and score oracles are plain double loops, the
quadratic-objective oracle is a matrix-free conjugate-gradient descent,
and the metric oracle works in exact rational arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "keel"


def keel_file(name: str) -> Path:
    return DATA_DIR / f"{name}.dat"


# -- brute-force fuzzy-rough oracles -----------------------------------

def brute_attr_sim(ax: float, ay: float, gamma: float) -> float:
    return max(0.0, 1.0 - gamma * abs(ax - ay))


def brute_pair_sim(x: np.ndarray, y: np.ndarray, gamma: float,
                   tnorm: str) -> float:
    acc = None
    for a in range(len(x)):
        s = brute_attr_sim(float(x[a]), float(y[a]), gamma)
        if acc is None:
            acc = s
        elif tnorm == "minimum":
            acc = min(acc, s)
        elif tnorm == "product":
            acc = acc * s
        elif tnorm == "lukasiewicz":
            acc = max(0.0, acc + s - 1.0)
        else:
            raise ValueError(tnorm)
    return 1.0 if acc is None else acc


def brute_density_scores(x: np.ndarray, gamma: float,
                         tnorm: str = "minimum") -> list[float]:
    p = x.shape[0]
    if p == 1:
        return [1.0]
    out = []
    for i in range(p):
        total = 0.0
        for j in range(p):
            if j != i:
                total += brute_pair_sim(x[i], x[j], gamma, tnorm)
        out.append(total / (p - 1))
    return out


def brute_lower_approx_scores(x_all: np.ndarray, labels: np.ndarray,
                              target: int, gamma: float, tnorm: str,
                              implicator: str) -> list[float]:
    out = []
    for i in np.flatnonzero(labels == target):
        best = math.inf
        for j in range(x_all.shape[0]):
            r = brute_pair_sim(x_all[i], x_all[j], gamma, tnorm)
            a = 1.0 if labels[j] == target else 0.0
            if implicator == "lukasiewicz":
                v = min(1.0, 1.0 - r + a)
            elif implicator == "kleene_dienes":
                v = max(1.0 - r, a)
            else:
                raise ValueError(implicator)
            best = min(best, v)
        out.append(best)
    return out


# -- matrix-free descent oracle for the weighted quadratics ------------

def conjugate_gradient(matvec, rhs: np.ndarray,
                       tol: float = 1e-12) -> np.ndarray:
    x = np.zeros_like(rhs)
    r = rhs - matvec(x)
    p = r.copy()
    rs = float(r @ r)
    threshold = tol * max(1.0, float(np.linalg.norm(rhs)))
    for _ in range(200 * rhs.size):
        ap = matvec(p)
        denom = float(p @ ap)
        if denom <= 0:
            break
        alpha = rs / denom
        x = x + alpha * p
        r = r - alpha * ap
        rs_new = float(r @ r)
        if math.sqrt(rs_new) <= threshold:
            break
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


def _augment(x: np.ndarray) -> np.ndarray:
    return np.hstack([x, np.ones((x.shape[0], 1))])


def descent_u1(x1, x2hat, d2, c1: float, delta: float) -> np.ndarray:
    """Minimize 0.5||Hu||^2 + delta/2 ||u||^2
    + (c1/2)(Gu + e)' D2 (Gu + e) without any factorization."""
    h = _augment(np.asarray(x1, dtype=float))
    g = _augment(np.asarray(x2hat, dtype=float))
    d2 = np.asarray(d2, dtype=float)

    def matvec(u):
        return h.T @ (h @ u) + delta * u + c1 * (g.T @ (d2 * (g @ u)))

    rhs = -c1 * (g.T @ d2)
    return conjugate_gradient(matvec, rhs)


def descent_u2(x1, x2hat, d1, c2: float, delta: float) -> np.ndarray:
    """Minimize 0.5||Gu||^2 + delta/2 ||u||^2
    + (c2/2)(Hu - e)' D1 (Hu - e) without any factorization."""
    h = _augment(np.asarray(x1, dtype=float))
    g = _augment(np.asarray(x2hat, dtype=float))
    d1 = np.asarray(d1, dtype=float)

    def matvec(u):
        return g.T @ (g @ u) + delta * u + c2 * (h.T @ (d1 * (h @ u)))

    rhs = c2 * (h.T @ d1)
    return conjugate_gradient(matvec, rhs)


def grad_f1(u, x1, x2hat, d2, c1: float, delta: float) -> np.ndarray:
    h = _augment(np.asarray(x1, dtype=float))
    g = _augment(np.asarray(x2hat, dtype=float))
    d2 = np.asarray(d2, dtype=float)
    return h.T @ (h @ u) + delta * u + c1 * (g.T @ (d2 * (g @ u + 1.0)))


def grad_f2(u, x1, x2hat, d1, c2: float, delta: float) -> np.ndarray:
    h = _augment(np.asarray(x1, dtype=float))
    g = _augment(np.asarray(x2hat, dtype=float))
    d1 = np.asarray(d1, dtype=float)
    return g.T @ (g @ u) + delta * u + c2 * (h.T @ (d1 * (h @ u - 1.0)))


# -- rational-arithmetic metric oracle ---------------------------------

def fraction_metrics(tp: int, fn: int, fp: int, tn: int,
                     convention: str) -> tuple[float, float, float, float]:
    def ratio(num, den):
        return Fraction(num, den) if den else Fraction(0)

    if convention == "standard":
        sen = ratio(tp, tp + fn)
        spe = ratio(tn, tn + fp)
    elif convention == "paper_literal":
        sen = ratio(tp, tp + fp)
        spe = ratio(tn, tn + fn)
    else:
        raise ValueError(convention)
    acc = Fraction(tp + tn, tp + fn + fp + tn)
    gmean = math.sqrt(float(sen) * float(spe))
    return float(sen), float(spe), float(acc), gmean


# -- synthetic data generators -----------------------------------------

def make_blobs(seed: int, m1: int = 30, m2: int = 90,
               center1=(2.0, 2.0), center2=(-2.0, -2.0),
               spread: float = 0.6) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    x = np.vstack([
        rng.normal(center1, spread, size=(m1, 2)),
        rng.normal(center2, spread, size=(m2, 2)),
    ])
    y = np.asarray([1] * m1 + [-1] * m2)
    return x, y


def make_circles(seed: int, m1: int = 50, m2: int = 100,
                 r_inner: float = 1.0, r_outer: float = 3.0,
                 noise: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """Minority ring inside a majority ring; not linearly separable."""
    rng = np.random.default_rng(seed)
    rows = []
    for count, radius in ((m1, r_inner), (m2, r_outer)):
        theta = rng.uniform(0.0, 2.0 * math.pi, size=count)
        r = radius + rng.normal(0.0, noise, size=count)
        rows.append(np.column_stack([r * np.cos(theta),
                                     r * np.sin(theta)]))
    x = np.vstack(rows)
    y = np.asarray([1] * m1 + [-1] * m2)
    return x, y


def dyadic_matrix(rng: np.random.Generator, m: int, n: int,
                  denom: int = 1024) -> np.ndarray:
    """Values on the dyadic grid k/denom, exactly representable."""
    return rng.integers(0, denom + 1, size=(m, n)).astype(float) / denom
