"""Convergence-rate estimation: inverse-power and geometric least-squares
fits on AP traces, the slow-rate recursion x <- x(1 - C x^q +/- K x^(q+1)),
and the closed-form constant of the k^(-1/6) limit law."""

from dataclasses import dataclass

import numpy as np

from . import kernels

_NOISE_MODES = {"plus": 0, "minus": 1, "alternating": 2}


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of a trace window under one rate model.

    ``params`` is (intercept, slope) for the inverse_power model fitted to
    dist^-p against k, and (amplitude, ratio) for the geometric model fitted
    to log dist against k.
    """

    model: str
    window: tuple
    params: tuple
    rmse: float

    @property
    def intercept(self):
        return self.params[0]

    @property
    def slope(self):
        if self.model.startswith("inverse_power"):
            return self.params[1]
        raise AttributeError("slope applies to inverse_power fits")

    @property
    def amplitude(self):
        return self.params[0]

    @property
    def ratio(self):
        if self.model != "geometric":
            raise AttributeError("ratio applies to geometric fits")
        return self.params[1]


def _window_dists(trace, window):
    dists = np.asarray(getattr(trace, "dists", trace), dtype=float)
    k_min, k_max = int(window[0]), int(window[1])
    if not 0 <= k_min < k_max <= len(dists) - 1:
        raise ValueError(f"window {window} outside trace of length {len(dists)}")
    ks = np.arange(k_min, k_max + 1)
    d = dists[k_min:k_max + 1]
    if np.any(d <= 0.0):
        raise ValueError("distances must be positive on the fit window")
    return ks, d


def _line_fit(x, y):
    A = np.vstack([np.ones_like(x, dtype=float), x]).T
    coeffs, *_ = np.linalg.lstsq(A, y, rcond=None)
    rmse = float(np.sqrt(np.mean((A @ coeffs - y) ** 2)))
    return float(coeffs[0]), float(coeffs[1]), rmse


def fit_inverse_power(trace, p, window):
    """Fit dist_k^{-p} ~ intercept + slope * k on the window."""
    ks, d = _window_dists(trace, window)
    intercept, slope, rmse = _line_fit(ks, d ** (-float(p)))
    return RateFit(model=f"inverse_power({p})", window=(int(window[0]),
                   int(window[1])), params=(intercept, slope), rmse=rmse)


def fit_geometric(trace, window):
    """Fit log dist_k ~ log amplitude + k log ratio on the window."""
    ks, d = _window_dists(trace, window)
    logc, logr, rmse = _line_fit(ks, np.log(d))
    return RateFit(model="geometric", window=(int(window[0]), int(window[1])),
                   params=(float(np.exp(logc)), float(np.exp(logr))),
                   rmse=rmse)


def recursive_sequence(C, K, q, x0, n, noise="plus"):
    """Iterate x <- x (1 - C x^q +/- K x^(q+1)) for n steps.

    Requires the decrease hypothesis (q+1) C - (q+2) K x0 > 0 and x0 > 0.
    Returns ``(sequence, limit_product)`` with
    limit_product = (q C)^(1/q) n^(1/q) x_n, which tends to 1.
    """
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    if C <= 0 or K < 0:
        raise ValueError("C must be positive and K nonnegative")
    if not (q + 1) * C - (q + 2) * K * x0 > 0:
        raise ValueError("hypothesis (q+1) C - (q+2) K x0 > 0 violated")
    if noise not in _NOISE_MODES:
        raise ValueError(f"noise must be one of {sorted(_NOISE_MODES)}")
    xs = kernels.recurrence_sequence(float(C), float(K), int(q), float(x0),
                                     int(n), _NOISE_MODES[noise])
    product = float((q * C) ** (1.0 / q) * n ** (1.0 / q) * xs[-1])
    return xs, product


def slow_rate_constant(spec):
    """The constant (3 / (32 c4^4 (2 c1^2 + 1)^4))^(1/6) of the limit law
    lim constant * k^(1/6) * dist_k = 1 along slowest-curve starts."""
    if spec.kind != "type2":
        raise ValueError("the slow-rate constant applies to type2 planes")
    c1, c4 = spec.c[0], spec.c[3]
    if c4 == 0.0:
        raise ValueError("requires c4 != 0")
    return float((3.0 / (32.0 * c4 ** 4 * (2.0 * c1 ** 2 + 1.0) ** 4))
                 ** (1.0 / 6.0))


def parse_trace_csv(text):
    """Parse the CLI trace CSV (header k,dist,psd_rank,inv2,inv6; '#'
    comment lines ignored) into a dict of column arrays."""
    rows = []
    header = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(tok) for tok in line.split(",")])
    if header is None:
        raise ValueError("no header found")
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}
