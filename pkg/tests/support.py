"""Shared random-instance generators for the test suites (all seeded)."""

from fractions import Fraction

from roversweep.exact import INFINITY
from roversweep.instance import LineInstance, RingInstance, StarInstance


def random_line(rng, min_n=1, max_n=8, deadline_prob=0.5, integral=False):
    n = rng.randint(min_n, max_n)
    coords = [Fraction(0)] if not integral else [0]
    for _ in range(n - 1):
        step = rng.randint(1, 6) if integral else Fraction(rng.randint(1, 8), rng.choice((1, 2)))
        coords.append(coords[-1] + step)
    span = coords[-1] if n > 1 else 1
    deadlines = []
    for _ in range(n):
        if rng.random() >= deadline_prob:
            deadlines.append(INFINITY)
        elif integral:
            deadlines.append(rng.randint(0, 3 * span))
        else:
            deadlines.append(Fraction(rng.randint(0, int(4 * span)), rng.choice((1, 2))))
    return LineInstance(tuple(coords), tuple(deadlines))


def random_ring(rng, min_n=2, max_n=6, deadline_prob=0.5):
    n = rng.randint(min_n, max_n)
    weights = tuple(rng.randint(1, 4) for _ in range(n))
    total = sum(weights)
    deadlines = tuple(
        INFINITY
        if rng.random() >= deadline_prob
        else Fraction(rng.randint(0, 2 * total), rng.choice((1, 2)))
        for _ in range(n)
    )
    return RingInstance(weights, deadlines)


def random_star(rng, min_q=1, max_q=7, deadline_prob=0.8):
    q = rng.randint(min_q, max_q)
    weights = tuple(rng.randint(1, 5) for _ in range(q))
    bound = 3 * sum(weights)
    deadlines = tuple(
        rng.randint(1, bound) if rng.random() < deadline_prob else INFINITY for _ in range(q)
    )
    center = INFINITY if rng.random() < 0.5 else rng.randint(0, bound)
    return StarInstance(weights, deadlines, center)


def fixed_positions(rng, n, k, allow_duplicates):
    if allow_duplicates:
        return tuple(sorted(rng.choices(range(n), k=k)))
    k = min(k, n)
    return tuple(sorted(rng.sample(range(n), k)))
