"""Elementary symmetric polynomials, curvature cones, and speed functions.

Everything here is a pure function of principal-curvature tuples.  Scalar
paths are plain Python arithmetic so they stay exact on Fractions (sigma
polynomials) and jet-generic for derivative oracles; batch paths are numpy
over (N, n) sample blocks.

The admissibility test for a speed function f collects three inequalities:
sum_i df/dk_i >= 1, sum_i df/dk_i k_i^2 >= f^2, and the per-index margins
f - (df/dk_i) k_i >= 0.  Speeds are normalized (f(1,...,1)=1), symmetric,
1-homogeneous and strictly monotone on their declared cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jets import Jet


class ConeViolation(ValueError):
    """Evaluation requested outside a function's declared cone."""


class ConeMismatch(ValueError):
    """Combination of speed functions with different declared cones."""


# ---------------------------------------------------------------------------
# elementary symmetric polynomials


def sigma(kappa, k):
    """k-th elementary symmetric polynomial, with sigma_0=1 and 0 out of range.

    Exact on int/Fraction inputs; evaluated by the incremental recurrence
    e_k(x_1..x_m) = e_k(x_1..x_{m-1}) + x_m e_{k-1}(x_1..x_{m-1}), which is
    the numerically stable choice for mixed-sign entries.
    """
    n = len(kappa)
    if k < 0 or k > n:
        return 0
    if k == 0:
        return 1
    e = [1] + [0] * k
    for m, x in enumerate(kappa):
        for j in range(min(k, m + 1), 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[k]


def sigma_omit(kappa, k, i):
    """sigma_k of kappa with entry i zeroed (0-based index)."""
    n = len(kappa)
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for n={n}")
    reduced = list(kappa[:i]) + list(kappa[i + 1:])
    return sigma(reduced, k)


def sigma_all_omit(kappa, k):
    """[sigma_k(kappa|i) for each i], sharing prefix/suffix recurrences."""
    return [sigma_omit(kappa, k, i) for i in range(len(kappa))]


def hk(kappa, k):
    """Normalized k-th mean curvature sigma_k / C(n,k), for 0 <= k <= n."""
    n = len(kappa)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    return sigma(kappa, k) / math.comb(n, k)


def sigma_batch(K, k):
    """sigma_k row-wise over an (N, n) block."""
    K = np.asarray(K, dtype=float)
    N, n = K.shape
    if k < 0 or k > n:
        return np.zeros(N)
    if k == 0:
        return np.ones(N)
    e = np.zeros((N, k + 1))
    e[:, 0] = 1.0
    for m in range(n):
        x = K[:, m]
        for j in range(min(k, m + 1), 0, -1):
            e[:, j] += x * e[:, j - 1]
    return e[:, k]


def sigma_omit_batch(K, k):
    """(N, n) array with sigma_k(row|i) in column i."""
    K = np.asarray(K, dtype=float)
    N, n = K.shape
    out = np.empty((N, n))
    cols = np.arange(n)
    for i in range(n):
        out[:, i] = sigma_batch(K[:, cols != i], k)
    return out


def hk_batch(K, k):
    K = np.asarray(K, dtype=float)
    n = K.shape[1]
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    return sigma_batch(K, k) / math.comb(n, k)


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ConeCheck:
    ok: bool
    witness: str | None = None
    index: int | None = None


@dataclass(frozen=True)
class ConeSpec:
    """Open symmetric cone of admissible principal-curvature tuples.

    kind 'gamma' with parameter k: sigma_1..sigma_k > 0.
    kind 'gamma_tilde' with parameter k: sigma_1..sigma_{k-1} > 0 and
        sigma_k(kappa|i) > -(k-1) sigma_k(kappa) for every i.
    kind 'positive': every entry > 0 (same set as gamma with k=n).
    Membership is strict: boundary points report False (margin shifts the
    thresholds for tests that need interior points).
    """

    kind: str
    n: int
    k: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be >= 2")
        if self.kind == "gamma":
            if not (self.k and 1 <= self.k <= self.n):
                raise ValueError(f"gamma cone needs 1 <= k <= n, got k={self.k}")
        elif self.kind == "gamma_tilde":
            if not (self.k and 1 <= self.k <= self.n - 1):
                raise ValueError(f"tilde cone needs 1 <= k <= n-1, got k={self.k}")
        elif self.kind == "positive":
            if self.k is not None:
                raise ValueError("positive cone takes no k")
        else:
            raise ValueError(f"unknown cone kind {self.kind!r}")

    def contains(self, kappa, margin=0.0):
        """Strict membership with a named witness for the first failure."""
        kappa = list(kappa)
        if len(kappa) != self.n:
            raise ValueError(f"kappa has length {len(kappa)}, cone expects n={self.n}")
        if self.kind == "positive":
            for i, x in enumerate(kappa):
                if not x > margin:
                    return ConeCheck(False, f"kappa[{i}] <= 0", i)
            return ConeCheck(True)
        if self.kind == "gamma":
            for m in range(1, self.k + 1):
                if not sigma(kappa, m) > margin:
                    return ConeCheck(False, f"sigma_{m} <= 0", m)
            return ConeCheck(True)
        # gamma_tilde
        for m in range(1, self.k):
            if not sigma(kappa, m) > margin:
                return ConeCheck(False, f"sigma_{m} <= 0", m)
        sk = sigma(kappa, self.k)
        for i in range(self.n):
            if not sigma_omit(kappa, self.k, i) + (self.k - 1) * sk > margin:
                return ConeCheck(
                    False, f"sigma_{self.k}(kappa|{i}) <= -({self.k}-1) sigma_{self.k}", i
                )
        return ConeCheck(True)

    def contains_batch(self, K, margin=0.0):
        K = np.asarray(K, dtype=float)
        if K.shape[1] != self.n:
            raise ValueError("dimension mismatch")
        if self.kind == "positive":
            return np.all(K > margin, axis=1)
        ok = np.ones(K.shape[0], dtype=bool)
        if self.kind == "gamma":
            for m in range(1, self.k + 1):
                ok &= sigma_batch(K, m) > margin
            return ok
        for m in range(1, self.k):
            ok &= sigma_batch(K, m) > margin
        sk = sigma_batch(K, self.k)
        omit = sigma_omit_batch(K, self.k)
        ok &= np.all(omit + (self.k - 1) * sk[:, None] > margin, axis=1)
        return ok

    def _rank(self):
        # inclusion chain: gamma_{k+1} < tilde_k < gamma_k; positive == gamma_n
        if self.kind == "positive":
            return 2 * self.n
        if self.kind == "gamma":
            return 2 * self.k
        return 2 * self.k + 1

    def includes(self, other):
        """True when ``other`` is contained in self (known-chain comparison)."""
        if self.n != other.n:
            return False
        return other._rank() >= self._rank()

    def describe(self):
        if self.kind == "positive":
            return "positive"
        if self.kind == "gamma":
            return f"gamma_{self.k}"
        return f"gamma_tilde_{self.k}"


def gamma(k, n):
    return ConeSpec("gamma", n, k)


def gamma_tilde(k, n):
    return ConeSpec("gamma_tilde", n, k)


def gamma_plus(n):
    return ConeSpec("positive", n)


def cone_member(spec, kappa):
    """Membership plus witness, as a plain function."""
    return spec.contains(kappa)


def sample_cone(spec, count, rng, box=5.0, positive_fraction=0.5):
    """Random interior samples of a cone.

    Mixes rejection sampling from [-box, box]^n (general-position points)
    with positive draws (which lie in every cone here) so deep interior is
    always reached.  Deterministic for a seeded Generator.
    """
    n = spec.n
    out = []
    want_pos = int(count * positive_fraction)
    while len(out) < count:
        need = count - len(out)
        if len(out) < want_pos:
            block = rng.uniform(0.05 * box, box, size=(max(need, 64), n))
        else:
            block = rng.uniform(-box, box, size=(max(4 * need, 256), n))
        keep = spec.contains_batch(block)
        out.extend(block[keep][:need])
    return np.array(out[:count])


# ---------------------------------------------------------------------------
# speed functions


class CurvatureFunction:
    """Symmetric, normalized, 1-homogeneous speed on a declared cone.

    Subclasses provide ``_value``/``_gradient`` (scalar, jet-generic) and
    batch equivalents; this base handles cone checks and shared utilities.
    """

    n: int
    cone: ConeSpec
    name: str

    def _value(self, kappa):
        raise NotImplementedError

    def _gradient(self, kappa):
        raise NotImplementedError

    def _value_batch(self, K):
        raise NotImplementedError

    def _gradient_batch(self, K):
        raise NotImplementedError

    def require_in_cone(self, kappa):
        chk = self.cone.contains([float(x) for x in kappa])
        if not chk.ok:
            raise ConeViolation(
                f"{self.name}: kappa={list(map(float, kappa))} outside "
                f"{self.cone.describe()} ({chk.witness})"
            )

    def value(self, kappa, check=True):
        if check:
            self.require_in_cone(kappa)
        return self._value(list(kappa))

    def gradient(self, kappa, check=True):
        if check:
            self.require_in_cone(kappa)
        return self._gradient(list(kappa))

    def value_batch(self, K, check=True):
        K = np.asarray(K, dtype=float)
        if check:
            ok = self.cone.contains_batch(K)
            if not np.all(ok):
                bad = int(np.argmin(ok))
                raise ConeViolation(f"{self.name}: row {bad} outside {self.cone.describe()}")
        return self._value_batch(K)

    def gradient_batch(self, K, check=True):
        K = np.asarray(K, dtype=float)
        if check:
            ok = self.cone.contains_batch(K)
            if not np.all(ok):
                bad = int(np.argmin(ok))
                raise ConeViolation(f"{self.name}: row {bad} outside {self.cone.describe()}")
        return self._gradient_batch(K)

    def axisym(self, kp, ko):
        """(f, df/dkp) at kappa = (kp, ko, ..., ko); hot path for shooting."""
        kappa = [kp] + [ko] * (self.n - 1)
        return self._value(kappa), self._gradient(kappa)[0]

    def describe(self):
        return self.name


def _as_float_rows(K):
    K = np.asarray(K, dtype=float)
    return K


class KthMeanCurvatureRoot(CurvatureFunction):
    """f = (k-th normalized mean curvature)^(1/k).

    Default cone: the tilde cone for k <= n-1, the positive cone for k = n
    (where f is the geometric mean of the entries).  ``widened=True`` swaps
    the declared cone for the full gamma_k cone, on which f is still well
    defined but the per-index margin inequality can fail; counterexample
    probing needs this.
    """

    def __init__(self, n, k, widened=False, cone=None):
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
        self.n = n
        self.k = k
        self._binom = math.comb(n, k)
        if cone is None:
            if widened:
                cone = gamma(k, n)
            elif k == n:
                cone = gamma_plus(n)
            else:
                cone = gamma_tilde(k, n)
        else:
            default = gamma(k, n) if widened else (gamma_plus(n) if k == n else gamma_tilde(k, n))
            if not default.includes(cone):
                raise ConeViolation(
                    f"cannot declare {cone.describe()}: not inside {default.describe()}"
                )
        self.cone = cone
        self.name = f"H{k}" if k == 1 else f"H{k}^(1/{k})"

    def _hk(self, kappa):
        return sigma(kappa, self.k) / self._binom

    def _value(self, kappa):
        h = self._hk(kappa)
        if self.k == 1:
            return h
        return h ** (1.0 / self.k)

    def _gradient(self, kappa):
        if self.k == 1:
            return [1.0 / self.n] * self.n
        h = self._hk(kappa)
        pref = (1.0 / self.k) * h ** (1.0 / self.k - 1.0) / self._binom
        return [pref * sigma_omit(kappa, self.k - 1, i) for i in range(self.n)]

    def _value_batch(self, K):
        h = sigma_batch(K, self.k) / self._binom
        if self.k == 1:
            return h
        return h ** (1.0 / self.k)

    def _gradient_batch(self, K):
        K = _as_float_rows(K)
        if self.k == 1:
            return np.full(K.shape, 1.0 / self.n)
        h = sigma_batch(K, self.k) / self._binom
        pref = (1.0 / self.k) * h ** (1.0 / self.k - 1.0) / self._binom
        return pref[:, None] * sigma_omit_batch(K, self.k - 1)

    def axisym(self, kp, ko):
        n, k = self.n, self.k
        if k == 1:
            return (kp + (n - 1) * ko) / n, 1.0 / n
        # sigma_k(kp, ko x (n-1)) = C(n-1,k) ko^k + kp C(n-1,k-1) ko^{k-1}
        a = math.comb(n - 1, k) * ko ** k
        b = math.comb(n - 1, k - 1) * ko ** (k - 1)
        h = (a + kp * b) / self._binom
        f = h ** (1.0 / k)
        return f, (1.0 / k) * h ** (1.0 / k - 1.0) * b / self._binom


def sigma_n_root(n):
    """Geometric mean of the entries (k = n normalized root)."""
    return KthMeanCurvatureRoot(n, n)


class PowerMean(CurvatureFunction):
    """Power mean ((1/n) sum kappa_i^p)^(1/p) on the positive cone.

    Concave for p <= 1 and inverse concave for p >= -1; p = 0 would be the
    geometric mean (use sigma_n_root for that).
    """

    def __init__(self, n, p):
        if p == 0:
            raise ValueError("p=0 is the geometric mean; use sigma_n_root")
        if not -1.0 <= p <= 1.0:
            raise ValueError("power mean admissible range is -1 <= p <= 1")
        self.n = n
        self.p = float(p)
        self.cone = gamma_plus(n)
        self.name = f"M[{p:g}]"

    def _value(self, kappa):
        p = self.p
        s = kappa[0] ** p
        for x in kappa[1:]:
            s = s + x ** p
        return (s / self.n) ** (1.0 / p)

    def _gradient(self, kappa):
        p = self.p
        v = self._value(kappa)
        return [(v ** (1.0 - p)) * (x ** (p - 1.0)) / self.n for x in kappa]

    def _value_batch(self, K):
        return (np.mean(K ** self.p, axis=1)) ** (1.0 / self.p)

    def _gradient_batch(self, K):
        v = self._value_batch(K)
        return (v ** (1.0 - self.p))[:, None] * K ** (self.p - 1.0) / self.n

    def axisym(self, kp, ko):
        p, n = self.p, self.n
        v = ((kp ** p + (n - 1) * ko ** p) / n) ** (1.0 / p)
        return v, v ** (1.0 - p) * kp ** (p - 1.0) / n


class ConvexCombo(CurvatureFunction):
    """lam*f1 + (1-lam)*f2 on the shared declared cone."""

    def __init__(self, f1, f2, lam):
        if f1.cone != f2.cone:
            raise ConeMismatch(f"{f1.name} on {f1.cone.describe()} vs {f2.name} on {f2.cone.describe()}")
        if not 0.0 <= lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        self.f1, self.f2, self.lam = f1, f2, float(lam)
        self.n = f1.n
        self.cone = f1.cone
        self.name = f"({lam:g}*{f1.name} + {1-lam:g}*{f2.name})"

    def _value(self, kappa):
        return self.lam * self.f1._value(kappa) + (1.0 - self.lam) * self.f2._value(kappa)

    def _gradient(self, kappa):
        g1 = self.f1._gradient(kappa)
        g2 = self.f2._gradient(kappa)
        return [self.lam * a + (1.0 - self.lam) * b for a, b in zip(g1, g2)]

    def _value_batch(self, K):
        return self.lam * self.f1._value_batch(K) + (1.0 - self.lam) * self.f2._value_batch(K)

    def _gradient_batch(self, K):
        return self.lam * self.f1._gradient_batch(K) + (1.0 - self.lam) * self.f2._gradient_batch(K)

    def axisym(self, kp, ko):
        v1, d1 = self.f1.axisym(kp, ko)
        v2, d2 = self.f2.axisym(kp, ko)
        lam = self.lam
        return lam * v1 + (1 - lam) * v2, lam * d1 + (1 - lam) * d2


class GeomCombo(CurvatureFunction):
    """f1^lam * f2^(1-lam) on the shared declared cone."""

    def __init__(self, f1, f2, lam):
        if f1.cone != f2.cone:
            raise ConeMismatch(f"{f1.name} on {f1.cone.describe()} vs {f2.name} on {f2.cone.describe()}")
        if not 0.0 <= lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        self.f1, self.f2, self.lam = f1, f2, float(lam)
        self.n = f1.n
        self.cone = f1.cone
        self.name = f"({f1.name}^{lam:g} * {f2.name}^{1-lam:g})"

    def _value(self, kappa):
        return self.f1._value(kappa) ** self.lam * self.f2._value(kappa) ** (1.0 - self.lam)

    def _gradient(self, kappa):
        v1, v2 = self.f1._value(kappa), self.f2._value(kappa)
        v = v1 ** self.lam * v2 ** (1.0 - self.lam)
        g1 = self.f1._gradient(kappa)
        g2 = self.f2._gradient(kappa)
        lam = self.lam
        return [v * (lam * a / v1 + (1.0 - lam) * b / v2) for a, b in zip(g1, g2)]

    def _value_batch(self, K):
        return self.f1._value_batch(K) ** self.lam * self.f2._value_batch(K) ** (1.0 - self.lam)

    def _gradient_batch(self, K):
        v1 = self.f1._value_batch(K)
        v2 = self.f2._value_batch(K)
        v = v1 ** self.lam * v2 ** (1.0 - self.lam)
        g1 = self.f1._gradient_batch(K)
        g2 = self.f2._gradient_batch(K)
        return v[:, None] * (self.lam * g1 / v1[:, None] + (1.0 - self.lam) * g2 / v2[:, None])

    def axisym(self, kp, ko):
        v1, d1 = self.f1.axisym(kp, ko)
        v2, d2 = self.f2.axisym(kp, ko)
        lam = self.lam
        v = v1 ** lam * v2 ** (1.0 - lam)
        return v, v * (lam * d1 / v1 + (1.0 - lam) * d2 / v2)


class InverseStar(CurvatureFunction):
    """f*(kappa) = 1 / f(1/kappa_1, ..., 1/kappa_n), on the positive cone."""

    def __init__(self, f):
        if not f.cone.includes(gamma_plus(f.n)):
            raise ConeMismatch(f"{f.name} is not defined on the positive cone")
        self.f = f
        self.n = f.n
        self.cone = gamma_plus(f.n)
        self.name = f"{f.name}*"

    def _value(self, kappa):
        inv = [1.0 / x for x in kappa]
        return 1.0 / self.f._value(inv)

    def _gradient(self, kappa):
        inv = [1.0 / x for x in kappa]
        v = 1.0 / self.f._value(inv)
        g = self.f._gradient(inv)
        return [v * v * gi / (x * x) for gi, x in zip(g, kappa)]

    def _value_batch(self, K):
        return 1.0 / self.f._value_batch(1.0 / K)

    def _gradient_batch(self, K):
        inv = 1.0 / K
        v = 1.0 / self.f._value_batch(inv)
        g = self.f._gradient_batch(inv)
        return (v * v)[:, None] * g / (K * K)

    def axisym(self, kp, ko):
        v0, d0 = self.f.axisym(1.0 / kp, 1.0 / ko)
        v = 1.0 / v0
        return v, v * v * d0 / (kp * kp)


def convex_combine(f1, f2, lam):
    return ConvexCombo(f1, f2, lam)


def geometric_combine(f1, f2, lam):
    return GeomCombo(f1, f2, lam)


def inverse_star(f):
    return InverseStar(f)


# ---------------------------------------------------------------------------
# admissibility / condition checking


@dataclass
class ConditionReport:
    """The three inequality families for a speed at one kappa.

    s1 = sum_i f^i - 1, s2 = sum_i f^i k_i^2 - f^2, margins_i = f - f^i k_i.
    Passing means every quantity >= -tol.
    """

    s1: float
    s2: float
    margins: np.ndarray
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = (
            self.s1 >= -self.tol
            and self.s2 >= -self.tol
            and bool(np.all(self.margins >= -self.tol))
        )

    @property
    def worst_margin(self):
        return float(np.min(self.margins))

    @property
    def failing_indices(self):
        return [int(i) for i in np.nonzero(self.margins < -self.tol)[0]]


def check_condition_v(F, kappa, tol=1e-12):
    """Monotonicity-margin report for F at kappa (raises outside the cone)."""
    F.require_in_cone(kappa)
    kappa = [float(x) for x in kappa]
    f = F._value(kappa)
    g = F._gradient(kappa)
    s1 = sum(g) - 1.0
    s2 = sum(gi * x * x for gi, x in zip(g, kappa)) - f * f
    margins = np.array([f - gi * x for gi, x in zip(g, kappa)])
    return ConditionReport(s1, s2, margins, tol)


def condition_batch(F, K, tol=1e-12, check=True):
    """(s1, s2, margins) arrays for an (N, n) block of samples."""
    K = np.asarray(K, dtype=float)
    f = F.value_batch(K, check=check)
    g = F.gradient_batch(K, check=False)
    s1 = g.sum(axis=1) - 1.0
    s2 = (g * K * K).sum(axis=1) - f * f
    margins = f[:, None] - g * K
    return s1, s2, margins


def directional_derivatives(F, kappa, d):
    """(f, df, d2f) of t -> F(kappa + t d) at t=0, via second-order jets."""
    t = Jet.seed(0.0)
    arg = [x + t * dx for x, dx in zip(kappa, d)]
    j = F._value(arg)
    return j.val, j.d1, j.d2


def concavity_probe(F, kappa, trials, rng=None, step=1e-3, max_shrink=40):
    """Minimum second central difference quotient over random directions.

    For a concave speed the result is <= 0 up to rounding; this probes, it
    does not prove.  The step auto-shrinks until the stencil stays in the
    cone; if even the smallest step escapes, the point is too close to the
    boundary and ConeViolation is raised.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    kappa = [float(x) for x in kappa]
    F.require_in_cone(kappa)
    f0 = F._value(kappa)
    worst = math.inf
    for _ in range(trials):
        d = rng.normal(size=F.n)
        d /= np.linalg.norm(d)
        h = step
        for _ in range(max_shrink):
            plus = [x + h * dx for x, dx in zip(kappa, d)]
            minus = [x - h * dx for x, dx in zip(kappa, d)]
            if F.cone.contains(plus).ok and F.cone.contains(minus).ok:
                break
            h *= 0.5
        else:
            raise ConeViolation("stencil cannot be kept inside the cone")
        quot = (F._value(plus) - 2.0 * f0 + F._value(minus)) / (h * h)
        worst = min(worst, quot)
    return worst
