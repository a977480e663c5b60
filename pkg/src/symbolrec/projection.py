"""Distance-preserving projection of the knowledge space to 2 or 3 dimensions.

Symbols live on per-question probability simplices and users sit at the
simplex vertices (one-hot answers), so the user cloud bounds the symbol
cloud. The projection minimizes the classic distance-weighted stress with
an iterative second-order update and step-halving.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import (
    DimensionUnsupported,
    EmptyHistory,
    FormatError,
    LengthMismatch,
    NonSymmetricInput,
)
from .history import DEFAULT_SMOOTHING, HistoryStore, probabilities
from .lexicon import Lexicon, invert, pseudo_probabilities
from .schema import FORMAT_VERSION, SurveySchema

DEFAULT_MAX_ITER = 500
DEFAULT_MAGIC = 0.35
DEFAULT_MIN_DIST = 1e-9
DEFAULT_TOL = 1e-9
DEFAULT_RESTARTS = 5


@dataclass(frozen=True)
class Point:
    id: str
    kind: str  # base | meta | inverse | user
    vector: np.ndarray  # (D,)
    weight: float


@dataclass(frozen=True)
class PointCloud:
    points: tuple[Point, ...]
    dimension: int

    @property
    def matrix(self) -> np.ndarray:
        return np.stack([p.vector for p in self.points])


@dataclass(frozen=True)
class Embedding:
    ids: tuple[str, ...]
    kinds: tuple[str, ...]
    weights: tuple[float, ...]
    coords: np.ndarray  # (N, dim)
    dim: int
    stress: float
    iterations_used: int

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "dim": self.dim,
            "stress": self.stress,
            "iterations_used": self.iterations_used,
            "points": [
                {
                    "id": i,
                    "kind": k,
                    "weight": w,
                    "coords": [float(c) for c in xy],
                }
                for i, k, w, xy in zip(self.ids, self.kinds, self.weights, self.coords)
            ],
        }

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> "Embedding":
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(
                f"unsupported embedding format_version {doc.get('format_version')!r}"
            )
        pts = doc["points"]
        return cls(
            ids=tuple(p["id"] for p in pts),
            kinds=tuple(p["kind"] for p in pts),
            weights=tuple(float(p["weight"]) for p in pts),
            coords=np.array([p["coords"] for p in pts], dtype=np.float64),
            dim=int(doc["dim"]),
            stress=float(doc["stress"]),
            iterations_used=int(doc["iterations_used"]),
        )

    @classmethod
    def load(cls, path) -> "Embedding":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def _flatten(matrix: np.ndarray, schema: SurveySchema) -> np.ndarray:
    return matrix[schema.option_mask()]


def one_hot_vector(answer_idx: np.ndarray, schema: SurveySchema) -> np.ndarray:
    grid = np.zeros((schema.question_count, schema.max_options))
    grid[np.arange(schema.question_count), answer_idx] = 1.0
    return _flatten(grid, schema)


def vectorize(
    store: HistoryStore,
    lexicon: Lexicon | None = None,
    users: list[dict[str, str]] | None = None,
    smoothing: float = DEFAULT_SMOOTHING,
    include_inverse: bool = False,
) -> PointCloud:
    """Flatten everything to D-dimensional vectors: smoothed probabilities for
    symbols, one-hot encodings for users, pseudo-probabilities for inverses."""
    if store.event_user_count == 0:
        raise EmptyHistory("cannot vectorize an empty store")
    schema = store.schema
    pts: list[Point] = []
    for sid in store.symbol_ids:
        pv = store.probabilities(sid, smoothing)
        pts.append(Point(sid, "base", _flatten(pv.p, schema), float(store.history(sid).n)))
    if lexicon is not None:
        for mid in sorted(lexicon.defs):
            h = lexicon.materialize(mid, store)
            pv = probabilities(h, schema, store.event_user_count, smoothing)
            pts.append(Point(mid, "meta", _flatten(pv.p, schema), float(h.n)))
            if include_inverse:
                inv = invert(h, store.baseline())
                pts.append(
                    Point(
                        inv.symbol_id,
                        "inverse",
                        _flatten(pseudo_probabilities(inv), schema),
                        float(h.n),
                    )
                )
    if include_inverse:
        b = store.baseline()
        for sid in store.symbol_ids:
            inv = invert(store.history(sid), b)
            pts.append(
                Point(
                    inv.symbol_id,
                    "inverse",
                    _flatten(pseudo_probabilities(inv), schema),
                    float(inv.n),
                )
            )
    for i, answers in enumerate(users or []):
        idx = schema.answer_indices(answers)
        pts.append(Point(f"user:{i}", "user", one_hot_vector(idx, schema), 1.0))
    return PointCloud(points=tuple(pts), dimension=schema.dimension)


def distances(cloud: PointCloud) -> np.ndarray:
    """Pairwise Euclidean distances between the flattened vectors."""
    x = cloud.matrix
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def stress_of(d_star: np.ndarray, coords: np.ndarray, min_dist: float = DEFAULT_MIN_DIST) -> float:
    """Distance-weighted normalized stress of an embedding."""
    dstar = np.maximum(d_star, min_dist)
    iu = np.triu_indices(len(dstar), k=1)
    diff = coords[:, None, :] - coords[None, :, :]
    d = np.sqrt((diff**2).sum(axis=-1))
    c = dstar[iu].sum()
    return float((((dstar - d) ** 2 / dstar)[iu]).sum() / c)


def _sammon_once(
    dstar: np.ndarray,
    dim: int,
    y0: np.ndarray,
    max_iter: int,
    magic: float,
    min_dist: float,
    tol: float,
) -> tuple[np.ndarray, float, int]:
    n = len(dstar)
    iu = np.triu_indices(n, k=1)
    c = dstar[iu].sum()
    eye = np.eye(n, dtype=bool)

    def pairwise(y):
        diff = y[:, None, :] - y[None, :, :]
        d = np.sqrt((diff**2).sum(axis=-1))
        d[eye] = 1.0
        return np.maximum(d, min_dist), diff

    def stress(d):
        return float((((dstar - d) ** 2 / dstar)[iu]).sum() / c)

    y = y0.copy()
    d, diff = pairwise(y)
    e = stress(d)
    iters = 0
    for it in range(max_iter):
        iters = it + 1
        delta = dstar - d
        w = delta / (dstar * d)
        w[eye] = 0.0
        g = -2.0 / c * (w[:, :, None] * diff).sum(axis=1)
        inv_dd = 1.0 / (dstar * d)
        inv_dd[eye] = 0.0
        term = delta[:, :, None] - (diff**2 / d[:, :, None]) * (
            1.0 + delta[:, :, None] / d[:, :, None]
        )
        hess = -2.0 / c * (inv_dd[:, :, None] * term).sum(axis=1)
        step = g / np.maximum(np.abs(hess), 1e-12)

        scale = magic
        accepted = False
        for _ in range(20):
            y_new = y - scale * step
            d_new, diff_new = pairwise(y_new)
            e_new = stress(d_new)
            if e_new <= e:
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            break
        improvement = e - e_new
        y, d, diff, e = y_new, d_new, diff_new, e_new
        if improvement < tol:
            break
    return y, e, iters


def sammon(
    d_star: np.ndarray,
    dim: int = 2,
    max_iter: int = DEFAULT_MAX_ITER,
    magic_factor: float = DEFAULT_MAGIC,
    seed: int = 0,
    init: np.ndarray | None = None,
    min_dist_floor: float = DEFAULT_MIN_DIST,
    tol: float = DEFAULT_TOL,
    restarts: int = DEFAULT_RESTARTS,
    ids: tuple[str, ...] | None = None,
    kinds: tuple[str, ...] | None = None,
    weights: tuple[float, ...] | None = None,
) -> Embedding:
    """Project a distance matrix to ``dim`` dimensions by iterative stress
    minimization with step-halving; accepted stress never increases.

    Deterministic for a given seed. With no explicit ``init``, the best of
    ``restarts`` seeded random starts is kept.
    """
    d_star = np.asarray(d_star, dtype=np.float64)
    if d_star.ndim != 2 or d_star.shape[0] != d_star.shape[1] or not np.allclose(
        d_star, d_star.T, atol=1e-12
    ):
        raise NonSymmetricInput("distance matrix must be square and symmetric")
    if dim not in (2, 3):
        raise DimensionUnsupported(f"target dimension must be 2 or 3, got {dim}")
    n = len(d_star)
    dstar = np.maximum(d_star, min_dist_floor)
    np.fill_diagonal(dstar, 1.0)  # never touched; guards divisions

    rng = np.random.default_rng(seed)
    if init is not None:
        starts = [np.asarray(init, dtype=np.float64).copy()]
    else:
        starts = [rng.uniform(-1.0, 1.0, size=(n, dim)) for _ in range(restarts)]

    best = None
    total_iters = 0
    for y0 in starts:
        y, e, iters = _sammon_once(
            dstar, dim, y0, max_iter, magic_factor, min_dist_floor, tol
        )
        total_iters += iters
        if best is None or e < best[1]:
            best = (y, e)
    coords, stress = best

    n_ids = ids if ids is not None else tuple(str(i) for i in range(n))
    n_kinds = kinds if kinds is not None else tuple("base" for _ in range(n))
    n_weights = weights if weights is not None else tuple(1.0 for _ in range(n))
    return Embedding(
        ids=n_ids,
        kinds=n_kinds,
        weights=n_weights,
        coords=coords,
        dim=dim,
        stress=stress,
        iterations_used=total_iters,
    )


def embed(
    cloud: PointCloud,
    dim: int = 2,
    **kwargs,
) -> Embedding:
    """Convenience: distances + sammon with point metadata attached."""
    return sammon(
        distances(cloud),
        dim=dim,
        ids=tuple(p.id for p in cloud.points),
        kinds=tuple(p.kind for p in cloud.points),
        weights=tuple(p.weight for p in cloud.points),
        **kwargs,
    )


def place_point(
    e: Embedding,
    d_star_new: np.ndarray,
    seed: int = 0,
    min_dist_floor: float = DEFAULT_MIN_DIST,
    random_starts: int = 8,
) -> np.ndarray:
    """Position one new point in a finished embedding, all other coordinates
    frozen, by minimizing its share of the stress.

    Starts from the nearest embedded points plus seeded random positions and
    keeps the best optimum; deterministic for a given seed.
    """
    d_star_new = np.asarray(d_star_new, dtype=np.float64)
    if d_star_new.shape != (len(e.coords),):
        raise LengthMismatch(
            f"need {len(e.coords)} distances, got {d_star_new.shape}"
        )
    dstar = np.maximum(d_star_new, min_dist_floor)
    coords = e.coords

    def partial_stress(x):
        d = np.sqrt(((coords - x) ** 2).sum(axis=1))
        d = np.maximum(d, min_dist_floor)
        return ((dstar - d) ** 2 / dstar).sum()

    def grad(x):
        diff = x - coords
        d = np.sqrt((diff**2).sum(axis=1))
        d = np.maximum(d, min_dist_floor)
        w = 2.0 * (d - dstar) / (dstar * d)
        return (w[:, None] * diff).sum(axis=0)

    rng = np.random.default_rng(seed)
    nearest = np.argsort(dstar)[:3]
    starts = [coords[i] + 1e-3 for i in nearest]
    span = coords.max(axis=0) - coords.min(axis=0) + 1.0
    center = coords.mean(axis=0)
    starts += [
        center + rng.uniform(-1.0, 1.0, size=e.dim) * span for _ in range(random_starts)
    ]

    best = None
    for x0 in starts:
        res = minimize(
            partial_stress,
            x0,
            jac=grad,
            method="L-BFGS-B",
            options={"ftol": 1e-15, "gtol": 1e-12},
        )
        if best is None or res.fun < best.fun:
            best = res
    return np.asarray(best.x, dtype=np.float64)


def scatter_svg(e: Embedding, path, category_of=None) -> None:
    """Write a 2-D bubble scatter (size by weight, color by category/kind)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if e.dim != 2:
        raise DimensionUnsupported("scatter export is 2-D only")
    cats = [
        category_of(i) if category_of else k for i, k in zip(e.ids, e.kinds)
    ]
    unique = sorted(set(cats))
    cmap = plt.get_cmap("tab20")
    color_of = {c: cmap(i % 20) for i, c in enumerate(unique)}
    w = np.array(e.weights)
    sizes = 20.0 + 180.0 * w / max(w.max(), 1.0)
    fig, ax = plt.subplots(figsize=(8, 8))
    for c in unique:
        idx = [i for i, cc in enumerate(cats) if cc == c]
        ax.scatter(
            e.coords[idx, 0],
            e.coords[idx, 1],
            s=sizes[idx],
            color=color_of[c],
            alpha=0.6,
            label=c,
            edgecolors="none",
        )
    ax.set_title(f"knowledge space (stress={e.stress:.4g})")
    ax.legend(loc="best", fontsize=7)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.savefig(path, format="svg")
    plt.close(fig)
