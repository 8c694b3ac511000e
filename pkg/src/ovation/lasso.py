"""L1-penalized logistic regression with cross-validated penalty selection.

The solver minimizes

    (1/n) * sum_i log(1 + exp(-margin_i)) + lambda * sum_j |beta_j|

over standardized predictors with an unpenalized intercept, using cyclic
coordinate descent on an iteratively reweighted least-squares quadratic
approximation: at each stage the logistic loss is expanded at the current
linear predictor, and each coordinate is updated in closed form by
soft-thresholding. Warm starts make descending penalty paths cheap, which
is what the cross-validation grid uses.

Also provides post-selection Wald significance with Benjamini-Hochberg
adjustment, relative importance weights, fit diagnostics, and exact JSON
round-tripping of fitted models.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MODEL_FORMAT_VERSION = 1


class NumericalFailure(RuntimeError):
    """The solver produced a non-finite loss or linear predictor."""


class CVFailure(RuntimeError):
    """No cross-validation fold produced a usable deviance."""


class ImportanceUndefined(ValueError):
    """Relative importance requires at least one non-zero coefficient."""


@dataclass(frozen=True)
class DesignMatrix:
    """Feature rows with binary labels; both classes must be present."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=int)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        n, p = X.shape
        if n < 2:
            raise ValueError(f"need at least 2 rows, got {n}")
        if p != len(self.feature_names):
            raise ValueError("feature_names length does not match columns")
        if not np.isfinite(X).all():
            raise ValueError("design matrix contains non-finite values")
        if not set(np.unique(y)) == {0, 1}:
            raise ValueError("labels must contain both classes (0 and 1)")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def subset_rows(self, idx: np.ndarray) -> "DesignMatrix":
        return DesignMatrix(self.X[idx], self.y[idx], self.feature_names)

    def subset_columns(self, cols: list[int]) -> "DesignMatrix":
        names = tuple(self.feature_names[c] for c in cols)
        return DesignMatrix(self.X[:, cols], self.y, names)


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Center and scale columns to mean 0, population sd 1.

    Constant columns get sd recorded as 0 and become all-zero, so their
    coefficients stay 0 by construction.
    """
    X = np.asarray(X, dtype=float)
    means = X.mean(axis=0)
    sds = X.std(axis=0)  # population (divide by n)
    safe = np.where(sds > 0, sds, 1.0)
    Z = (X - means) / safe
    Z[:, sds == 0] = 0.0
    return Z, means, sds


def apply_standardization(
    X: np.ndarray, means: np.ndarray, sds: np.ndarray
) -> np.ndarray:
    safe = np.where(sds > 0, sds, 1.0)
    Z = (np.asarray(X, dtype=float) - means) / safe
    Z[..., sds == 0] = 0.0
    return Z


def lambda_max(Z: np.ndarray, y: np.ndarray) -> float:
    """Smallest penalty at which every slope is zero: the sup-norm of the
    null-model gradient (1/n) * Z'(y - mean(y)).

    Computed with the same per-column dot products the solver uses, so a
    fit at exactly this penalty soft-thresholds every coordinate to 0.
    """
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = Z.shape
    if p == 0:
        return 0.0
    g = y - y.mean()
    return max(abs(float(g @ Z[:, j]) / n) for j in range(p))


def lambda_grid(lmax: float, n_points: int = 100, min_ratio: float = 1e-3) -> np.ndarray:
    """Descending log-spaced grid from lmax down to lmax * min_ratio."""
    if lmax <= 0:
        raise ValueError("lambda_max must be positive to build a grid")
    return lmax * min_ratio ** (np.arange(n_points) / (n_points - 1))


def _soft(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


@dataclass
class FitResult:
    intercept: float
    coefficients: np.ndarray
    converged: bool
    sweeps: int


def fit_lasso_logistic(
    Z: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = 1e-7,
    max_sweeps: int = 10_000,
    warm: tuple[float, np.ndarray] | None = None,
) -> FitResult:
    """Fit the penalized model on already-standardized predictors.

    Convergence is declared when a full reweighting stage moves no
    parameter by tol or more; a few extra stages with a tightened inner
    threshold then polish the solution until the exact subgradient
    optimality residual is far below 10 * tol. With lam = 0 on separable
    data the coefficients diverge until the sweep cap or exact weight
    saturation ends the fit with converged=False.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = Z.shape
    ybar = float(y.mean())
    if not 0.0 < ybar < 1.0:
        raise ValueError("labels must contain both classes")
    if warm is None:
        b0 = math.log(ybar / (1.0 - ybar))
        beta = np.zeros(p)
    else:
        b0 = float(warm[0])
        beta = np.array(warm[1], dtype=float, copy=True)
    col_sq = Z * Z
    eta = b0 + Z @ beta
    sweeps = 0
    inner_tol = tol
    polish_left = 8
    converged = False
    # the null model's fitted probability is exactly ybar; going through
    # sigmoid(log-odds) would be off by an ulp and could defeat the exact
    # soft-threshold zeroing at lambda >= lambda_max
    at_null_start = warm is None
    while sweeps < max_sweeps:
        if at_null_start:
            p_hat = np.full(len(y), ybar)
            at_null_start = False
        else:
            p_hat = sigmoid(eta)
        g = y - p_hat
        w = p_hat * (1.0 - p_hat)
        wsum = float(w.sum())
        if wsum == 0.0:
            # every probability saturated to 0/1: separated data with no
            # penalty has diverged as far as float range allows
            break
        denom = (w @ col_sq) / n
        r = g.copy()  # r tracks w * (working residual) through the stage
        b0_prev, beta_prev = b0, beta.copy()
        while sweeps < max_sweeps:
            sweeps += 1
            max_delta = 0.0
            if wsum > 0:
                delta0 = float(r.sum()) / wsum
                # skip machine-noise updates so a null fit leaves the
                # residual bit-identical to the null-model gradient
                if abs(delta0) > 1e-15 * (1.0 + abs(b0)):
                    b0 += delta0
                    r -= w * delta0
                    max_delta = abs(delta0)
            for j in range(p):
                dj = denom[j]
                if dj == 0.0:
                    continue  # all-zero (constant) column: coefficient stays 0
                zj = Z[:, j]
                num = float(r @ zj) / n + dj * beta[j]
                new = _soft(num, lam) / dj
                diff = new - beta[j]
                if diff != 0.0:
                    beta[j] = new
                    r -= (w * diff) * zj
                    if abs(diff) > max_delta:
                        max_delta = abs(diff)
            if max_delta < inner_tol:
                break
        eta = b0 + Z @ beta
        if not (np.isfinite(eta).all() and np.isfinite(beta).all()):
            raise NumericalFailure("non-finite linear predictor during fit")
        stage_move = abs(b0 - b0_prev)
        if p:
            stage_move = max(stage_move, float(np.max(np.abs(beta - beta_prev))))
        if stage_move < tol:
            if kkt_violation(Z, y, b0, beta, lam) <= 3.0 * tol or polish_left == 0:
                converged = True
                break
            polish_left -= 1
            inner_tol = tol / 50.0
    return FitResult(b0, beta, converged, sweeps)


def logistic_loss_and_gradient(
    Z: np.ndarray, y: np.ndarray, intercept: float, beta: np.ndarray
) -> tuple[float, float, np.ndarray]:
    """Unpenalized mean logistic loss and its analytic gradient.

    Returns (loss, d/d_intercept, d/d_beta) with the gradient in the form
    (1/n) * Z'(p_hat - y) that the optimality checks rely on.
    """
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    eta = intercept + Z @ beta
    margins = np.where(y == 1, eta, -eta)
    loss = float(np.logaddexp(0.0, -margins).mean())
    p_hat = sigmoid(eta)
    return loss, float(np.mean(p_hat - y)), Z.T @ (p_hat - y) / n


def kkt_violation(
    Z: np.ndarray, y: np.ndarray, intercept: float, beta: np.ndarray, lam: float
) -> float:
    """Largest subgradient optimality residual of the penalized objective:
    |grad_j + lam * sign(beta_j)| on active coordinates, the excess of
    |grad_j| over lam on inactive ones, and the raw intercept gradient."""
    _, grad0, grad = logistic_loss_and_gradient(Z, y, intercept, beta)
    viol = abs(grad0)
    for j in range(len(beta)):
        if beta[j] != 0.0:
            viol = max(viol, abs(grad[j] + lam * math.copysign(1.0, beta[j])))
        else:
            viol = max(viol, max(0.0, abs(grad[j]) - lam))
    return viol


def fit_path(
    Z: np.ndarray,
    y: np.ndarray,
    lambdas: np.ndarray,
    tol: float = 1e-7,
    max_sweeps: int = 10_000,
) -> list[FitResult]:
    """Fit a descending penalty path with warm starts."""
    results = []
    warm = None
    for lam in lambdas:
        res = fit_lasso_logistic(Z, y, float(lam), tol=tol, max_sweeps=max_sweeps, warm=warm)
        warm = (res.intercept, res.coefficients)
        results.append(res)
    return results


def fold_indices(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Seeded shuffled k-fold split of range(n)."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return [np.sort(part) for part in np.array_split(perm, k)]


def binomial_deviance(probs: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(probs, 1e-12, 1.0 - 1e-12)
    y = np.asarray(y, dtype=float)
    return float(-2.0 * np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def cv_select_lambda(
    matrix: DesignMatrix,
    k: int = 10,
    seed: int = 0,
    n_lambdas: int = 100,
    min_ratio: float = 1e-3,
    tol: float = 1e-7,
    max_sweeps: int = 10_000,
) -> float:
    """Pick the penalty minimizing mean held-out binomial deviance over a
    seeded shuffled k-fold split; ties go to the larger (more regularized)
    penalty. Folds whose training or held-out part misses a class are
    skipped with a warning."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if matrix.n < k:
        raise ValueError(f"need at least k={k} rows, got {matrix.n}")
    Z_full, _, _ = standardize(matrix.X)
    lmax = lambda_max(Z_full, matrix.y)
    if lmax <= 0:
        warnings.warn("all features are uncorrelated with the labels; lambda set to 0")
        return 0.0
    grid = lambda_grid(lmax, n_lambdas, min_ratio)
    fold_devs: list[np.ndarray] = []
    for fold_num, test_idx in enumerate(fold_indices(matrix.n, k, seed)):
        mask = np.ones(matrix.n, dtype=bool)
        mask[test_idx] = False
        y_tr, y_te = matrix.y[mask], matrix.y[test_idx]
        if len(np.unique(y_tr)) < 2 or len(np.unique(y_te)) < 2:
            warnings.warn(f"fold {fold_num}: missing a class, deviance skipped")
            continue
        Z_tr, means, sds = standardize(matrix.X[mask])
        Z_te = apply_standardization(matrix.X[test_idx], means, sds)
        devs = np.empty(len(grid))
        for i, res in enumerate(fit_path(Z_tr, y_tr, grid, tol=tol, max_sweeps=max_sweeps)):
            probs = sigmoid(res.intercept + Z_te @ res.coefficients)
            devs[i] = binomial_deviance(probs, y_te)
        fold_devs.append(devs)
    if not fold_devs:
        raise CVFailure("every fold was skipped; cannot select lambda")
    mean_dev = np.mean(fold_devs, axis=0)
    best = 0
    for i in range(1, len(grid)):
        if mean_dev[i] < mean_dev[best]:  # strict: ties keep the larger lambda
            best = i
    return float(grid[best])


@dataclass
class LassoModel:
    """A fitted penalized model in standardized-feature space."""

    intercept: float
    std_coefficients: np.ndarray
    feature_means: np.ndarray
    feature_sds: np.ndarray
    lam: float
    seed: int
    feature_names: tuple[str, ...]
    registry_fingerprint: str = ""
    converged: bool = True

    def linear_score(self, x: np.ndarray) -> np.ndarray:
        z = apply_standardization(x, self.feature_means, self.feature_sds)
        return self.intercept + z @ self.std_coefficients

    def predict_proba(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (len(self.feature_names),):
            raise ValueError(
                f"expected {len(self.feature_names)} features, got shape {x.shape}"
            )
        return float(np.clip(sigmoid(np.atleast_1d(self.linear_score(x)))[0], 1e-12, 1 - 1e-12))

    def predict_proba_matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != len(self.feature_names):
            raise ValueError(
                f"expected {len(self.feature_names)} features, got {X.shape[1]}"
            )
        return np.clip(sigmoid(self.linear_score(X)), 1e-12, 1 - 1e-12)

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FORMAT_VERSION,
            "feature_names": list(self.feature_names),
            "feature_means": [float(v) for v in self.feature_means],
            "feature_sds": [float(v) for v in self.feature_sds],
            "std_coefficients": [float(v) for v in self.std_coefficients],
            "intercept": float(self.intercept),
            "lambda": float(self.lam),
            "seed": int(self.seed),
            "registry_fingerprint": self.registry_fingerprint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LassoModel":
        if data.get("version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model version {data.get('version')!r}")
        return cls(
            intercept=float(data["intercept"]),
            std_coefficients=np.array(data["std_coefficients"], dtype=float),
            feature_means=np.array(data["feature_means"], dtype=float),
            feature_sds=np.array(data["feature_sds"], dtype=float),
            lam=float(data["lambda"]),
            seed=int(data["seed"]),
            feature_names=tuple(data["feature_names"]),
            registry_fingerprint=data.get("registry_fingerprint", ""),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LassoModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def fit(
    matrix: DesignMatrix,
    lam: float,
    seed: int = 0,
    registry_fingerprint: str = "",
    tol: float = 1e-7,
    max_sweeps: int = 10_000,
) -> LassoModel:
    """Standardize the matrix and fit at the given penalty."""
    Z, means, sds = standardize(matrix.X)
    res = fit_lasso_logistic(Z, matrix.y, lam, tol=tol, max_sweeps=max_sweeps)
    return LassoModel(
        intercept=res.intercept,
        std_coefficients=res.coefficients,
        feature_means=means,
        feature_sds=sds,
        lam=lam,
        seed=seed,
        feature_names=matrix.feature_names,
        registry_fingerprint=registry_fingerprint,
        converged=res.converged,
    )


def _wald_p(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))


_SEPARATION_BOUND = 30.0  # |coef| beyond this on standardized data means separation


def significance(
    matrix: DesignMatrix, model: LassoModel
) -> tuple[dict[str, float], list[str]]:
    """Wald p-values from an unpenalized refit on the selected features.

    The refit runs Newton-Raphson on the standardized selected columns. A
    diverging or singular refit signals (quasi-)separation: affected
    features get p-value 0 and appear in the returned separation list.
    """
    sel = [j for j in range(len(model.std_coefficients)) if model.std_coefficients[j] != 0.0]
    if not sel:
        raise ValueError("significance requires at least one non-zero coefficient")
    names = [model.feature_names[j] for j in sel]
    Z = apply_standardization(matrix.X, model.feature_means, model.feature_sds)[:, sel]
    A = np.hstack([np.ones((matrix.n, 1)), Z])
    y = matrix.y.astype(float)
    b = np.zeros(A.shape[1])
    singular = False
    converged = False
    for _ in range(50):
        p_hat = sigmoid(A @ b)
        W = np.maximum(p_hat * (1.0 - p_hat), 1e-10)
        H = A.T @ (W[:, None] * A)
        score = A.T @ (y - p_hat)
        try:
            step = np.linalg.solve(H, score)
        except np.linalg.LinAlgError:
            singular = True
            break
        b += step
        if np.max(np.abs(step)) < 1e-10:
            converged = True
            break
    separated: list[str] = []
    p_values: dict[str, float] = {}
    whole_fit_bad = singular or not converged
    if whole_fit_bad:
        return {name: 0.0 for name in names}, list(names)
    H = A.T @ (np.maximum(sigmoid(A @ b) * (1 - sigmoid(A @ b)), 1e-10)[:, None] * A)
    cov = np.linalg.inv(H)
    se = np.sqrt(np.diag(cov))
    for i, name in enumerate(names, start=1):
        if abs(b[i]) > _SEPARATION_BOUND:
            p_values[name] = 0.0
            separated.append(name)
        else:
            p_values[name] = _wald_p(b[i] / se[i]) if se[i] > 0 else 0.0
    return p_values, separated


def fdr_adjust(p_values: dict[str, float]) -> dict[str, float]:
    """Benjamini-Hochberg: q for the i-th smallest p is min over j >= i of
    m * p_(j) / j, capped at 1, so q is monotone in p-rank."""
    items = sorted(p_values.items(), key=lambda kv: kv[1])
    m = len(items)
    q_values: dict[str, float] = {}
    running = math.inf
    for rank in range(m, 0, -1):
        name, p = items[rank - 1]
        running = min(running, m * p / rank)
        q_values[name] = min(1.0, running)
    return q_values


def relative_importance(model: LassoModel) -> dict[str, float]:
    """|beta| over the sum of all |beta|, across non-zero coefficients."""
    abs_beta = np.abs(model.std_coefficients)
    total = float(abs_beta.sum())
    if total == 0.0:
        raise ImportanceUndefined("all coefficients are zero")
    return {
        model.feature_names[j]: float(abs_beta[j] / total)
        for j in range(len(abs_beta))
        if abs_beta[j] > 0
    }


@dataclass
class FitDiagnostics:
    r_squared: float
    pred_true_correlation: float
    p_values: dict[str, float]
    q_values: dict[str, float]
    importance: dict[str, float]
    separated_features: list[str]


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    # exact constancy check: std() of a constant array can be a roundoff hair
    if len(a) == 0 or np.all(a == a[0]) or np.all(b == b[0]):
        return 0.0
    return float(((a - a.mean()) * (b - b.mean())).mean() / (a.std() * b.std()))


def diagnostics(matrix: DesignMatrix, model: LassoModel) -> FitDiagnostics:
    """Correlation-based fit strength plus significance and importance.

    The reported r_squared is exactly the squared correlation between the
    predicted probabilities and the 0/1 labels. A model with no selected
    features gets empty significance and importance maps.
    """
    probs = model.predict_proba_matrix(matrix.X)
    corr = pearson(probs, matrix.y)
    if np.any(model.std_coefficients != 0.0):
        p_values, separated = significance(matrix, model)
        q_values = fdr_adjust(p_values)
        importance = relative_importance(model)
    else:
        p_values, q_values, importance, separated = {}, {}, {}, []
    return FitDiagnostics(
        r_squared=corr * corr,
        pred_true_correlation=corr,
        p_values=p_values,
        q_values=q_values,
        importance=importance,
        separated_features=separated,
    )
