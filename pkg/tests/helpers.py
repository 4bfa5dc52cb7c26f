"""Random instance generators shared by the test modules."""

import numpy as np

from vpricer import Discrete, ProductInstance, regularity_report


def random_item(rng, max_support=5, lo=1, hi=10):
    k = int(rng.integers(1, max_support + 1))
    values = np.sort(rng.choice(np.arange(lo, hi + 1), size=k, replace=False)).astype(float)
    w = rng.dirichlet(np.ones(k)) * 0.9 + 0.1 / k
    w = w / w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return Discrete(tuple(values), tuple(w))


def random_regular_item(rng, **kw):
    while True:
        d = random_item(rng, **kw)
        if regularity_report(d).regular:
            return d


def random_nonregular_item(rng, **kw):
    while True:
        d = random_item(rng, **kw)
        if not regularity_report(d).regular:
            return d


def regular_instances(seed, count, max_n=4):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        out.append(ProductInstance(tuple(random_regular_item(rng) for _ in range(n))))
    return out


def iid_instances(seed, count, max_n=4):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        out.append(ProductInstance((random_regular_item(rng),) * n))
    return out


def nonregular_instances(seed, count, max_n=4):
    """Every instance has at least one item failing the regularity audit."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        items = [random_item(rng) for _ in range(n)]
        bad = int(rng.integers(0, n))
        items[bad] = random_nonregular_item(rng)
        out.append(ProductInstance(tuple(items)))
    return out


def mixed_instances(seed, count, max_n=4):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        out.append(ProductInstance(tuple(random_item(rng) for _ in range(n))))
    return out


INTRO = Discrete((1.0, 2.0), (2 / 3, 1 / 3))
NONREG = Discrete((1.0, 2.0, 10.0), (0.5, 0.05, 0.45))


def intro_instance():
    return ProductInstance((INTRO, INTRO))


def long_shot_instance(n):
    d = Discrete((1.0, float(n)), (1 - 1 / n**2, 1 / n**2))
    return ProductInstance((d,) * n)


def harmonic_instance(n):
    items = []
    for i in range(1, n + 1):
        top = n / i
        if top == 1.0:
            items.append(Discrete((1.0,), (1.0,)))
        else:
            items.append(Discrete((1.0, top), (1 - 1 / n, 1 / n)))
    return ProductInstance(tuple(items))
