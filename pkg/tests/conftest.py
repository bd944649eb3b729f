import numpy as np
import pytest

from repgeom import air, cka, shape
from repgeom.kernels import squared_exponential_kernel
from repgeom.types import (
    ANGULAR_SHAPE,
    EUCLIDEAN_SHAPE,
    GRAM_EMBEDDING,
    AirParams,
    ShapeParams,
)


def rand(seed, rows, cols, scale=1.0):
    return scale * np.random.default_rng(seed).normal(size=(rows, cols))


def random_orthonormal(seed, n):
    q, r = np.linalg.qr(np.random.default_rng(seed).normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def embed_cka(x):
    return cka.embed(x)


def embed_angular_shape(x, p=20, alpha=0.0):
    return shape.embed(x, ShapeParams(p=p, alpha=alpha), ANGULAR_SHAPE)


def embed_euclidean_shape(x, p=20, alpha=0.0):
    return shape.embed(x, ShapeParams(p=p, alpha=alpha), EUCLIDEAN_SHAPE)


def embed_air(x, epsilon=0.05):
    return air.embed(x, AirParams(GRAM_EMBEDDING, squared_exponential_kernel(), epsilon))


EMBEDDERS = {
    "angular_cka": embed_cka,
    "angular_shape": embed_angular_shape,
    "euclidean_shape": embed_euclidean_shape,
    "air": embed_air,
}

# Metrics whose distance is the norm induced by their tangent inner
# product; the Euclidean shape distance (mean row norm) is not.
INNER_PRODUCT_METRICS = ("angular_cka", "angular_shape", "air")


@pytest.fixture(scope="session")
def triple_factory():
    def make(metric, seed, m=20, n=6):
        emb = EMBEDDERS[metric]
        return tuple(emb(rand(seed + i, m, n)) for i in range(3))

    return make
