import random
from pathlib import Path

from fundgpd.finspace import FinSpace, from_relations
from fundgpd.formats import load
from fundgpd.simplicial import face_poset

DATA = Path(__file__).resolve().parent.parent / "data"

RP2_FACETS = ["123", "134", "145", "156", "162", "235", "346", "452", "563", "624"]


def corpus(name: str) -> FinSpace:
    obj = load(DATA / name)
    return obj if isinstance(obj, FinSpace) else face_poset(obj)


def random_poset(rng: random.Random, max_points: int = 10, density: float | None = None) -> FinSpace:
    """Random strict order: edges only go from lower to higher label."""
    n = rng.randint(1, max_points)
    p = rng.uniform(0.15, 0.6) if density is None else density
    names = [f"p{i}" for i in range(n)]
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return from_relations(pairs, points=names, t0=True)


def random_monotone_map(rng: random.Random, X: FinSpace, Y: FinSpace) -> tuple[int, ...]:
    """Monotone X -> Y by sending a linear extension through a random chain walk."""
    out = [None] * X.n
    # process in an order where every point comes after everything below it
    order = sorted(range(X.n), key=lambda i: X.down[i].bit_count())
    for i in order:
        lower = [out[j] for j in range(X.n) if (X.down[i] >> j) & 1 and j != i]
        cands = [y for y in range(Y.n) if all((Y.up[b] >> y) & 1 for b in lower)]
        out[i] = rng.choice(cands) if cands else None
        if out[i] is None:
            return None
    return tuple(out)
