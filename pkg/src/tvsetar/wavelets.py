"""Haar and Daubechies wavelets on the unit interval.

Father and mother functions of the compactly supported Daubechies families
are evaluated pointwise with the Daubechies-Lagarias product-of-matrices
scheme. Haar (and its alias D(1)) uses the closed forms.

Truncated wavelet series on [0, 1) are built from ``phi_00`` plus
``psi_jk`` for ``j < J`` and ``0 <= k < 2**j``. For bases whose support
spills outside the unit interval, each basis function is folded back onto
[0, 1). The default folding is periodic, ``sum_m b(u + m)``, which keeps the
family orthonormal and reproduces constants exactly. A single reflection
fold ``b(u) + b(-u) + b(2 - u)`` is available as ``boundary="reflect"``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from tvsetar import _filters
from tvsetar.errors import DomainError, InsufficientResolution, UnsupportedWavelet

__all__ = [
    "Family",
    "FilterBank",
    "WaveletBasis",
    "WaveletCoefficients",
    "build_filter_bank",
    "make_basis",
    "eval_father",
    "eval_mother",
    "eval_scaled",
    "basis_matrix",
    "eval_threshold_series",
    "project_function",
]

Kind = Literal["father", "mother"]


class Family(str, enum.Enum):
    HAAR = "haar"
    D = "D"
    LA = "LA"

    @classmethod
    def parse(cls, value: str | Family) -> Family:
        if isinstance(value, Family):
            return value
        key = str(value).strip().lower()
        aliases = {
            "haar": cls.HAAR,
            "d": cls.D,
            "db": cls.D,
            "daubechies": cls.D,
            "extremal": cls.D,
            "la": cls.LA,
            "sym": cls.LA,
            "least_asymmetric": cls.LA,
            "leastasymmetric": cls.LA,
        }
        try:
            return aliases[key]
        except KeyError:
            raise UnsupportedWavelet(f"unknown wavelet family {value!r}") from None


@dataclass(frozen=True)
class FilterBank:
    """Quadrature-mirror filter pair of an orthonormal wavelet.

    ``high_pass[k] == (-1)**k * low_pass[L-1-k]``.
    """

    family: Family
    vanishing_moments: int
    low_pass: tuple[float, ...]
    high_pass: tuple[float, ...]

    @property
    def length(self) -> int:
        return len(self.low_pass)

    @property
    def name(self) -> str:
        if self.family is Family.HAAR:
            return "haar"
        return f"{self.family.value}({self.vanishing_moments})"


def build_filter_bank(family: str | Family, N: int = 1) -> FilterBank:
    """Return the shipped filter bank for ``family`` with ``N`` vanishing moments.

    Supported pairs are (haar, 1), (D, 1..10) and (LA, 4..10).
    """
    fam = Family.parse(family)
    N = int(N)
    if fam is Family.HAAR:
        if N != 1:
            raise UnsupportedWavelet(f"Haar has exactly one vanishing moment, got N={N}")
        low = _filters.DAUBECHIES[1]
    elif fam is Family.D:
        if N not in _filters.DAUBECHIES:
            raise UnsupportedWavelet(f"D(N) is shipped for N=1..10, got N={N}")
        low = _filters.DAUBECHIES[N]
    else:
        if N not in _filters.LEAST_ASYMMETRIC:
            raise UnsupportedWavelet(f"LA(N) is shipped for N=4..10, got N={N}")
        low = _filters.LEAST_ASYMMETRIC[N]
    L = len(low)
    high = tuple((-1) ** k * low[L - 1 - k] for k in range(L))
    return FilterBank(fam, N, tuple(low), high)


@dataclass(frozen=True)
class WaveletBasis:
    """Father/mother pair generated by ``filter``.

    Parameters
    ----------
    filter : FilterBank
    eval_depth : int
        Number of binary digits of the fractional argument consumed by the
        Daubechies-Lagarias evaluator. Arguments that are dyadic rationals of
        at most this depth are evaluated exactly.
    boundary : {"periodic", "reflect"}
        How series functions are folded onto [0, 1). Ignored for Haar.
    """

    filter: FilterBank
    eval_depth: int = 30
    boundary: Literal["periodic", "reflect"] = "periodic"

    def __post_init__(self):
        if self.eval_depth < 1 or self.eval_depth > 52:
            raise DomainError(f"eval_depth must be in 1..52, got {self.eval_depth}")
        if self.boundary not in ("periodic", "reflect"):
            raise DomainError(f"unknown boundary rule {self.boundary!r}")

    @property
    def name(self) -> str:
        return self.filter.name

    @property
    def is_haar(self) -> bool:
        # D(1) has the Haar filter; both use the closed forms.
        return self.filter.length == 2

    @property
    def father_support(self) -> tuple[int, int]:
        return 0, self.filter.length - 1

    @property
    def mother_support(self) -> tuple[int, int]:
        N = self.filter.length // 2
        return 1 - N, N

    @cached_property
    def _refinement(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        c = math.sqrt(2.0) * np.asarray(self.filter.low_pass)
        L = c.size
        M = L - 1
        T0 = np.zeros((M, M))
        T1 = np.zeros((M, M))
        for i in range(M):
            for j in range(M):
                if 0 <= 2 * i - j < L:
                    T0[i, j] = c[2 * i - j]
                if 0 <= 2 * i - j + 1 < L:
                    T1[i, j] = c[2 * i - j + 1]
        return T0, T1, _integer_values(T0)

    @property
    def integer_values(self) -> np.ndarray:
        """phi(0), ..., phi(L-2) from the refinement eigenvector."""
        if self.is_haar:
            return np.array([1.0])
        return self._refinement[2].copy()

    def father(self, t):
        t = np.asarray(t, dtype=float)
        if self.is_haar:
            return np.where((t >= 0.0) & (t < 1.0), 1.0, 0.0)
        return self._father_dl(t)

    def mother(self, t):
        t = np.asarray(t, dtype=float)
        if self.is_haar:
            return np.where(
                (t >= 0.0) & (t < 0.5), 1.0, np.where((t >= 0.5) & (t < 1.0), -1.0, 0.0)
            )
        g = math.sqrt(2.0) * np.asarray(self.filter.high_pass)
        shift = self.filter.length - 2
        out = np.zeros_like(t)
        lo, hi = self.mother_support
        inside = (t > lo) & (t < hi)
        if not inside.any():
            return out
        ti = t[inside]
        args = 2.0 * ti[:, None] - np.arange(g.size)[None, :] + shift
        out[inside] = self._father_dl(args) @ g
        return out

    def _father_dl(self, t: np.ndarray) -> np.ndarray:
        T0, T1, v0 = self._refinement
        M = v0.size
        out = np.zeros(t.shape)
        inside = (t >= 0.0) & (t < M)
        if not inside.any():
            return out
        pts, inverse = np.unique(t[inside], return_inverse=True)
        n = np.floor(pts).astype(np.int64)
        frac = pts - n
        depth = self.eval_depth
        digits = np.floor(np.ldexp(frac, depth)).astype(np.int64)
        vec = np.broadcast_to(v0, (pts.size, M)).copy()
        T0t, T1t = T0.T, T1.T
        # Innermost factor belongs to the least significant digit.
        for bit in range(depth):
            one = ((digits >> bit) & 1).astype(bool)
            if one.any():
                nxt = vec @ T0t
                nxt[one] = vec[one] @ T1t
                vec = nxt
            else:
                vec = vec @ T0t
        vals = vec[np.arange(pts.size), n]
        out[inside] = vals[inverse.reshape(-1)]
        return out

    def scaled(self, j: int, k: int, t, kind: Kind = "father"):
        t = np.asarray(t, dtype=float)
        arg = np.ldexp(t, j) - k
        f = self.father if kind == "father" else self.mother
        return 2.0 ** (j / 2.0) * f(arg)


def _integer_values(T0: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eig(T0)
    i = int(np.argmin(np.abs(w - 1.0)))
    v = np.real(V[:, i])
    return v / v.sum()


def make_basis(
    family: str | Family = "haar", N: int = 1, eval_depth: int = 30, boundary: str = "periodic"
) -> WaveletBasis:
    return WaveletBasis(build_filter_bank(family, N), eval_depth, boundary)


def eval_father(basis: WaveletBasis, t):
    """phi(t); zero outside ``[0, 2N-1]``."""
    out = basis.father(t)
    return float(out) if np.ndim(out) == 0 else out


def eval_mother(basis: WaveletBasis, t):
    """psi(t) from the second two-scale equation; zero outside ``[1-N, N]``."""
    out = basis.mother(t)
    return float(out) if np.ndim(out) == 0 else out


def eval_scaled(basis: WaveletBasis, j: int, k: int, t, kind: Kind = "father"):
    """``2**(j/2) * f(2**j t - k)`` for ``f`` the father or mother wavelet."""
    if j < 0:
        raise DomainError(f"resolution j must be non-negative, got {j}")
    out = basis.scaled(j, k, t, kind)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class WaveletCoefficients:
    """Coefficients of a level-``J`` truncated series.

    ``d`` holds the detail coefficients ordered by level then shift:
    ``d_00, d_10, d_11, d_20, ...``. Together with ``c00`` there are ``2**J``
    numbers.
    """

    J: int
    c00: float
    d: tuple[float, ...] = ()

    def __post_init__(self):
        if self.J < 0:
            raise DomainError(f"J must be non-negative, got {self.J}")
        d = tuple(float(x) for x in self.d)
        if len(d) != 2**self.J - 1:
            raise DomainError(f"expected {2**self.J - 1} detail coefficients for J={self.J}, got {len(d)}")
        if not (np.isfinite(self.c00) and np.all(np.isfinite(d))):
            raise DomainError("wavelet coefficients must be finite")
        object.__setattr__(self, "c00", float(self.c00))
        object.__setattr__(self, "d", d)

    @classmethod
    def from_vector(cls, theta, J: int | None = None) -> WaveletCoefficients:
        theta = np.asarray(theta, dtype=float).ravel()
        if J is None:
            J = int(round(math.log2(theta.size)))
        return cls(J, theta[0], tuple(theta[1:]))

    @classmethod
    def zeros(cls, J: int) -> WaveletCoefficients:
        return cls(J, 0.0, (0.0,) * (2**J - 1))

    def as_vector(self) -> np.ndarray:
        return np.array((self.c00,) + self.d)

    def detail(self, j: int, k: int) -> float:
        return self.d[2**j - 1 + k]

    def __len__(self) -> int:
        return 2**self.J


def _index(J: int) -> list[tuple[str, int, int]]:
    idx = [("father", 0, 0)]
    for j in range(J):
        idx.extend(("mother", j, k) for k in range(2**j))
    return idx


def basis_matrix(basis: WaveletBasis, J: int, u) -> np.ndarray:
    """Matrix whose columns are the ``2**J`` series functions evaluated at ``u``.

    Non-Haar columns are folded onto [0, 1) according to ``basis.boundary``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any((u < 0.0) | (u >= 1.0)) or not np.all(np.isfinite(u)):
        raise DomainError("series argument must lie in [0, 1)")
    cols = []
    for kind, j, k in _index(J):
        if basis.is_haar:
            col = basis.scaled(j, k, u, kind)
        elif basis.boundary == "periodic":
            a, b = basis.father_support if kind == "father" else basis.mother_support
            lo, hi = (k + a) / 2**j, (k + b) / 2**j
            col = np.zeros_like(u)
            for m in range(math.ceil(lo - 1.0), math.floor(hi) + 1):
                col = col + basis.scaled(j, k, u + m, kind)
        else:
            col = (
                basis.scaled(j, k, u, kind)
                + basis.scaled(j, k, -u, kind)
                + basis.scaled(j, k, 2.0 - u, kind)
            )
        cols.append(col)
    return np.column_stack(cols)


@functools.lru_cache(maxsize=64)
def grid_matrix(basis: WaveletBasis, J: int, T: int) -> np.ndarray:
    """``basis_matrix`` on the grid ``u = t/T``, ``t = 0..T-1`` (cached, read-only)."""
    B = basis_matrix(basis, J, np.arange(T) / T)
    B.setflags(write=False)
    return B


def eval_threshold_series(basis: WaveletBasis, coeffs: WaveletCoefficients, u):
    """Value of ``c00 phi_00(u) + sum_jk d_jk psi_jk(u)`` for ``u`` in [0, 1)."""
    vals = basis_matrix(basis, coeffs.J, u) @ coeffs.as_vector()
    return float(vals[0]) if np.ndim(u) == 0 else vals.reshape(np.shape(u))


def project_function(basis: WaveletBasis, J: int, values) -> WaveletCoefficients:
    """Level-``J`` coefficients of a function sampled on the grid ``i/n``.

    Haar coefficients are the quadrature inner products. For folded bases the
    coefficients solve the discrete least-squares problem on the grid, which
    is the L2 projection onto the span on [0, 1) up to quadrature error.
    """
    f = np.asarray(values, dtype=float).ravel()
    n = f.size
    if n < 2 ** (J + 4):
        raise InsufficientResolution(f"need at least {2 ** (J + 4)} grid points for J={J}, got {n}")
    B = basis_matrix(basis, J, np.arange(n) / n)
    if basis.is_haar:
        theta = B.T @ f / n
    else:
        theta = np.linalg.lstsq(B, f, rcond=None)[0]
    return WaveletCoefficients.from_vector(theta, J)
