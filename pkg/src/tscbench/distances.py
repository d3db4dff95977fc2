"""Whole-series elastic distance measures.

All measures use the squared pointwise difference as the local cost and
require equal-length inputs.  Windowed measures take the window as a
fraction of the series length; the band width in steps is
floor(fraction * m + 1e-12), so r=0 admits only the diagonal and r=1 the
full matrix.  The heavy dynamic programs live in ``_kernels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .data import cosine_transform, diff_transform
from .errors import LengthMismatchError, ParameterError

DISTANCE_KINDS = (
    "ed",
    "dtw",
    "ddtw",
    "wdtw",
    "wddtw",
    "lcss",
    "erp",
    "twe",
    "msm",
    "cid",
    "dddtw",
    "dtdc",
)

# complexity-correction guard for constant series
_CID_ZERO_FLOOR = 1e-8


def _as_series(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def _check_pair(a: np.ndarray, b: np.ndarray):
    if a.ndim != 1 or b.ndim != 1:
        raise LengthMismatchError("distance inputs must be 1-d series")
    if a.shape[0] != b.shape[0]:
        raise LengthMismatchError(f"series lengths differ: {a.shape[0]} vs {b.shape[0]}")


def band_steps(fraction: float, m: int) -> int:
    """Convert a window fraction into a band width in steps."""
    if fraction < 0.0 or fraction > 1.0:
        raise ParameterError(f"window fraction {fraction} outside [0, 1]")
    return int(math.floor(fraction * m + 1e-12))


def euclidean(a, b) -> float:
    """Sum of squared differences (no square root)."""
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    return float(_kernels.squared_euclidean(a, b))


def dtw(a, b, r: float = 1.0) -> float:
    """Dynamic time warping with warping window fraction ``r``."""
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    return float(_kernels.dtw(a, b, band_steps(r, a.shape[0])))


def wdtw_weights(g: float, m: int) -> np.ndarray:
    """Logistic warping-penalty weights w(d) = 1 / (1 + e^{-g (d - m/2)})."""
    if g < 0.0:
        raise ParameterError("wdtw g must be >= 0")
    d = np.arange(m, dtype=np.float64)
    return 1.0 / (1.0 + np.exp(-g * (d - m / 2.0)))


def wdtw(a, b, g: float) -> float:
    """Weighted DTW: full-window DP over logistic-weighted squared costs."""
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    return float(_kernels.wdtw(a, b, wdtw_weights(g, a.shape[0])))


def ddtw(a, b, r: float = 1.0) -> float:
    """DTW on first differences."""
    return dtw(diff_transform(a), diff_transform(b), r)


def wddtw(a, b, g: float) -> float:
    """Weighted DTW on first differences."""
    return wdtw(diff_transform(a), diff_transform(b), g)


def lcss(a, b, epsilon: float, delta: float = 1.0) -> float:
    """1 - (longest common subsequence length)/m.

    Values match when within ``epsilon`` and their index offset is within the
    band ``delta`` (a fraction of the length).
    """
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    m = a.shape[0]
    length = _kernels.lcss_length(a, b, epsilon, band_steps(delta, m))
    return 1.0 - float(length) / m


def erp(a, b, g: float = 0.0, band: float = 1.0) -> float:
    """Edit distance with real penalty under squared costs; gaps cost (value - g)^2."""
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    return float(_kernels.erp(a, b, g, band_steps(band, a.shape[0])))


def twe(a, b, nu: float, lam: float) -> float:
    """Time warp edit distance with stiffness ``nu`` and edit penalty ``lam``."""
    if nu <= 0.0:
        raise ParameterError("twe nu must be > 0")
    if lam < 0.0:
        raise ParameterError("twe lambda must be >= 0")
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    return float(_kernels.twe(a, b, nu, lam))


def msm(a, b, c: float) -> float:
    """Move-split-merge distance with operation cost ``c``."""
    if c <= 0.0:
        raise ParameterError("msm c must be > 0")
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    return float(_kernels.msm(a, b, c))


def complexity(a) -> float:
    """Sum of squared first differences."""
    a = _as_series(a)
    if a.shape[0] < 2:
        raise LengthMismatchError("complexity needs length >= 2")
    d = a[:-1] - a[1:]
    return float(d @ d)


def cid_factor(c_a: float, c_b: float) -> float:
    """max/min complexity ratio, guarded so constant series stay finite."""
    lo = min(c_a, c_b)
    hi = max(c_a, c_b)
    if lo <= 0.0:
        if hi <= 0.0:
            return 1.0
        return hi / _CID_ZERO_FLOOR
    return hi / lo


def cid(a, b, base=None) -> float:
    """Complexity-invariant distance: base(a, b) scaled by the complexity ratio."""
    a = _as_series(a)
    b = _as_series(b)
    _check_pair(a, b)
    if base is None:
        base = euclidean
    return base(a, b) * cid_factor(complexity(a), complexity(b))


def dd_dtw(a, b, alpha: float, base=None) -> float:
    """alpha-weighted mix of base distance on raw series and on first differences."""
    if alpha < 0.0 or alpha > 1.0:
        raise ParameterError("dd_dtw alpha must be in [0, 1]")
    if base is None:
        base = dtw
    return alpha * base(a, b) + (1.0 - alpha) * base(diff_transform(a), diff_transform(b))


def dtd_c(a, b, alpha: float, beta: float, base=None) -> float:
    """Three-way mix over raw, differenced, and cosine-transformed series."""
    if alpha < 0.0 or beta < 0.0 or alpha + beta > 1.0 + 1e-12:
        raise ParameterError("dtd_c needs alpha, beta >= 0 with alpha + beta <= 1")
    if base is None:
        base = dtw
    x = base(a, b)
    y = base(diff_transform(a), diff_transform(b))
    z = base(cosine_transform(a), cosine_transform(b))
    return alpha * x + beta * y + (1.0 - alpha - beta) * z


_FRACTION_PARAMS = {"r", "delta", "band", "alpha", "beta", "g"}

# which parameters each kind carries, in canonical print order
_KIND_PARAMS = {
    "ed": (),
    "dtw": ("r",),
    "ddtw": ("r",),
    "wdtw": ("g",),
    "wddtw": ("g",),
    "lcss": ("epsilon", "delta"),
    "erp": ("g", "band"),
    "twe": ("nu", "lam"),
    "msm": ("c",),
    "cid": ("r",),
    "dddtw": ("alpha",),
    "dtdc": ("alpha", "beta"),
}

_PRINT_NAMES = {"epsilon": "eps", "lam": "lam"}


def _fmt_param(name: str, value: float) -> str:
    if name == "epsilon":
        return f"{value:.4g}"
    if name in _FRACTION_PARAMS:
        return f"{value:.2f}"
    return f"{value:g}"


@dataclass(frozen=True)
class DistanceSpec:
    """A distance measure plus its fully bound parameters.

    Serializes to a canonical string such as "dtw(r=0.10)" or "msm(c=1)",
    used verbatim in results files.  ``erp`` carries both the gap value g and
    a band fraction; ``cid`` carries the window of its DTW base.
    """

    kind: str
    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in _KIND_PARAMS:
            raise ParameterError(f"unknown distance kind {self.kind!r}")
        expected = _KIND_PARAMS[self.kind]
        got = tuple(name for name, _ in self.params)
        if got != expected:
            raise ParameterError(
                f"{self.kind} expects parameters {expected}, got {got}"
            )
        object.__setattr__(
            self, "params", tuple((name, float(v)) for name, v in self.params)
        )

    @classmethod
    def make(cls, kind: str, **kwargs) -> "DistanceSpec":
        expected = _KIND_PARAMS.get(kind)
        if expected is None:
            raise ParameterError(f"unknown distance kind {kind!r}")
        missing = [name for name in expected if name not in kwargs]
        extra = [name for name in kwargs if name not in expected]
        if missing or extra:
            raise ParameterError(
                f"{kind} expects exactly parameters {expected}; "
                f"missing {missing}, unexpected {extra}"
            )
        return cls(kind, tuple((name, kwargs[name]) for name in expected))

    def get(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise ParameterError(f"{self.kind} has no parameter {name!r}")

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(
            f"{_PRINT_NAMES.get(name, name)}={_fmt_param(name, value)}"
            for name, value in self.params
        )
        return f"{self.kind}({inner})"

    def function(self):
        """Bind this distance choice to a plain (a, b) -> float callable."""
        kind = self.kind
        if kind == "ed":
            return euclidean
        if kind == "dtw":
            r = self.get("r")
            return lambda a, b: dtw(a, b, r)
        if kind == "ddtw":
            r = self.get("r")
            return lambda a, b: ddtw(a, b, r)
        if kind == "wdtw":
            g = self.get("g")
            return lambda a, b: wdtw(a, b, g)
        if kind == "wddtw":
            g = self.get("g")
            return lambda a, b: wddtw(a, b, g)
        if kind == "lcss":
            eps = self.get("epsilon")
            delta = self.get("delta")
            return lambda a, b: lcss(a, b, eps, delta)
        if kind == "erp":
            g = self.get("g")
            band = self.get("band")
            return lambda a, b: erp(a, b, g, band)
        if kind == "twe":
            nu = self.get("nu")
            lam = self.get("lam")
            return lambda a, b: twe(a, b, nu, lam)
        if kind == "msm":
            c = self.get("c")
            return lambda a, b: msm(a, b, c)
        if kind == "cid":
            r = self.get("r")
            return lambda a, b: cid(a, b, lambda x, y: dtw(x, y, r))
        if kind == "dddtw":
            alpha = self.get("alpha")
            return lambda a, b: dd_dtw(a, b, alpha)
        if kind == "dtdc":
            alpha = self.get("alpha")
            beta = self.get("beta")
            return lambda a, b: dtd_c(a, b, alpha, beta)
        raise ParameterError(f"unknown distance kind {kind!r}")
