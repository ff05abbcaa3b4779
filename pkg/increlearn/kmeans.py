##  increlearn -- semi-supervised incremental learning on feature vectors
##   Copyright 2019 - 2026 increlearn developers
##
##   Licensed under the Apache License, Version 2.0 (the "License");
##   you may not use this file except in compliance with the License.
##   You may obtain a copy of the License at
##
##       http://www.apache.org/licenses/LICENSE-2.0
##
##   Unless required by applicable law or agreed to in writing, software
##   distributed under the License is distributed on an "AS IS" BASIS,
##   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
##   See the License for the specific language governing permissions and
##   limitations under the License.
"""
Seeded k-means clustering (Lloyd's algorithm with k-means++ seeding and
restarts).
"""
import numpy as N

class KMeansError(Exception):
    pass


class KMeansResult(object):
    """
    Outcome of a clustering run.

    *Fields:*

        * `centroids` - k x D array
        * `labels` - cluster index of every input point
        * `sse` - within-cluster sum of squared distances
        * `n_iter` - number of Lloyd iterations
        * `history` - SSE after every iteration (non-increasing)
    """

    def __init__(self, centroids, labels, history, n_iter):
        self.centroids = centroids
        self.labels = labels
        self.history = history
        self.n_iter = n_iter

    @property
    def sse(self):
        return self.history[-1] if self.history else 0.

    def __repr__(self):
        return '<KMeansResult k=%i sse=%.6g after %i iterations>' % \
               (len(self.centroids), self.sse, self.n_iter)


def sq_distances(X, C):
    """
    Returns:
        numpy.ndarray: n x k matrix of squared Euclidean distances
    """
    d = (X * X).sum(axis=1)[:, None] + (C * C).sum(axis=1)[None, :] \
        - 2. * X @ C.T
    return N.maximum(d, 0.)


def sse(X, labels, C):
    """within-cluster sum of squared distances"""
    return float(((X - C[labels])**2).sum())


def kmeans_plusplus(X, k, rng):
    """
    k-means++ seeding: the first centroid is a uniformly drawn point, every
    further centroid is drawn with probability proportional to its squared
    distance from the closest centroid chosen so far.

    Args:
        X (numpy.ndarray): n x D points, n >= k
        k (int): number of centroids
        rng (numpy.random.Generator): random source
    Returns:
        numpy.ndarray: k x D initial centroids
    """
    n = len(X)
    C = N.empty((k, X.shape[1]))
    C[0] = X[rng.integers(n)]
    closest = sq_distances(X, C[:1])[:, 0]

    for i in range(1, k):
        total = closest.sum()
        if total > 0:
            j = rng.choice(n, p=closest / total)
        else:
            j = rng.integers(n)    ## all points coincide with centroids
        C[i] = X[j]
        closest = N.minimum(closest, sq_distances(X, C[i:i+1])[:, 0])

    return C


def lloyd(X, init, max_iter=100, tol=1e-6):
    """
    Lloyd iterations from given initial centroids. An empty cluster takes
    over the point farthest from its current centroid. Iteration stops when
    no centroid moves by tol or more.

    Args:
        X (numpy.ndarray): n x D points
        init (numpy.ndarray): k x D initial centroids, k <= n
        max_iter (int): maximum number of iterations
        tol (float): convergence threshold on the centroid shift
    Returns:
        KMeansResult
    """
    C = N.array(init, dtype=float)
    k = len(C)
    history = []
    labels = N.zeros(len(X), dtype=int)
    it = 0

    for it in range(1, max_iter + 1):
        D = sq_distances(X, C)
        labels = N.argmin(D, axis=1)
        own = D[N.arange(len(X)), labels]

        counts = N.bincount(labels, minlength=k)
        for j in N.flatnonzero(counts == 0):
            ## only take points from clusters that keep at least one member
            donors = counts[labels] > 1
            i = N.flatnonzero(donors)[N.argmax(own[donors])]
            counts[labels[i]] -= 1
            labels[i] = j
            counts[j] = 1
            own[i] = 0.

        newC = N.array([ X[labels == j].mean(axis=0) for j in range(k) ])
        history += [ sse(X, labels, newC) ]

        shift = N.sqrt(((newC - C)**2).sum(axis=1)).max()
        C = newC
        if shift < tol:
            break

    return KMeansResult(C, labels, history, it)


def kmeans(X, k, seed=0, restarts=5, max_iter=100, tol=1e-6):
    """
    Cluster points into k groups. The best of several k-means++ seeded
    Lloyd runs (lowest SSE, earliest run on ties) is returned. With n <= k
    points, every point becomes its own centroid.

    Args:
        X (numpy.ndarray): n x D points
        k (int): number of clusters
        seed (int): random seed
        restarts (int): number of independent k-means++ initializations
        max_iter (int): maximum Lloyd iterations per run
        tol (float): convergence threshold on the centroid shift
    Returns:
        KMeansResult
    Raises:
        KMeansError: for empty input or invalid k / restarts
    """
    X = N.asarray(X, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise KMeansError('kmeans needs a non-empty n x D matrix')
    if k < 1 or restarts < 1:
        raise KMeansError('k and restarts must be positive')

    if len(X) <= k:
        return KMeansResult(X.copy(), N.arange(len(X)), [0.], 0)

    rng = N.random.default_rng(seed)
    best = None
    for r in range(restarts):
        result = lloyd(X, kmeans_plusplus(X, k, rng), max_iter, tol)
        if best is None or result.sse < best.sse:
            best = result

    return best


######################
### Module testing ###
from increlearn import testing
from hypothesis import given, strategies as st

def best_two_partition(X):
    """exhaustive minimum-SSE split of X into 2 non-empty clusters"""
    n = len(X)
    best, bestC = None, None
    ## point 0 is always in cluster 0; enumerate the rest
    for code in range(1, 2**(n - 1)):
        labels = N.array([0] + [ (code >> i) & 1 for i in range(n - 1) ])
        if labels.sum() in (0, n):
            continue
        C = N.array([ X[labels == j].mean(axis=0) for j in (0, 1) ])
        s = sse(X, labels, C)
        if best is None or s < best:
            best, bestC = s, C
    return bestC


def centroid_mismatch(A, B):
    """largest centroid distance under the best matching of 2 centroids"""
    d1 = max(N.linalg.norm(A[0] - B[0]), N.linalg.norm(A[1] - B[1]))
    d2 = max(N.linalg.norm(A[0] - B[1]), N.linalg.norm(A[1] - B[0]))
    return min(d1, d2)


class Test(testing.AutoTest):
    """Test kmeans"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        self.rng = N.random.default_rng(21)

    def test_single_cluster(self):
        """kmeans k=1 gives the mean"""
        X = self.rng.normal(size=(30, 4))
        r = kmeans(X, 1, seed=3)
        self.assertTrue(N.allclose(r.centroids[0], X.mean(axis=0),
                                   rtol=0, atol=1e-12))

    def test_fewer_points(self):
        X = self.rng.normal(size=(3, 4))
        r = kmeans(X, 3)
        self.assertTrue(N.array_equal(r.centroids, X))
        self.assertEqual(r.sse, 0.)
        self.assertEqual(len(kmeans(X, 10).centroids), 3)

    def test_empty_cluster(self):
        """kmeans.lloyd empty cluster takes farthest point"""
        X = N.array([[0., 0.], [0.1, 0.], [5., 5.]])
        r = lloyd(X, N.array([[0., 0.], [0., 0.]]))
        self.assertEqual(sorted(N.bincount(r.labels).tolist()), [1, 2])
        self.assertTrue(N.allclose(sorted(r.centroids[:, 0]), [0.05, 5.]))

    def test_determinism(self):
        X = self.rng.normal(size=(50, 3))
        a, b = kmeans(X, 4, seed=5), kmeans(X, 4, seed=5)
        self.assertTrue(N.array_equal(a.centroids, b.centroids))

    @given(st.integers(0, 2**32 - 1), st.integers(2, 6))
    def test_monotone_objective(self, seed, k):
        """kmeans.lloyd objective is non-increasing"""
        rng = N.random.default_rng(seed)
        X = rng.normal(size=(40, 3))
        r = lloyd(X, kmeans_plusplus(X, k, rng))
        steps = N.diff(r.history)
        self.assertTrue(N.all(steps <= 1e-9 * max(r.history)))

    def test_separated_subclusters(self):
        """kmeans recovers 2 well separated sub-clusters"""
        a = self.rng.normal((1., 0., 0.), 0.05, size=(6, 3))
        b = self.rng.normal((0., 1., 0.), 0.05, size=(6, 3))
        X = N.vstack([a, b])
        r = kmeans(X, 2, seed=1)
        truth = N.array([ a.mean(axis=0), b.mean(axis=0) ])
        self.assertTrue(centroid_mismatch(r.centroids, truth) < 1e-3)
        self.assertTrue(centroid_mismatch(r.centroids,
                                          best_two_partition(X)) < 1e-3)


class LongTest(testing.AutoTest):
    """Test kmeans against exhaustive search"""

    TAGS = [ testing.LONG ]

    def test_oracle_equivalence(self):
        """kmeans matches exhaustive 2-partition search on 100 draws"""
        rng = N.random.default_rng(2026)
        self.matches = 0
        for trial in range(100):
            n = int(rng.integers(4, 13))
            centers = rng.normal(scale=1.5, size=(2, 3))
            X = centers[rng.integers(2, size=n)] + rng.normal(size=(n, 3))
            r = kmeans(X, 2, seed=trial, restarts=5)
            if centroid_mismatch(r.centroids, best_two_partition(X)) < 1e-3:
                self.matches += 1

        self.assertTrue(self.matches >= 95, self.matches)


if __name__ == '__main__':

    testing.localTest()
