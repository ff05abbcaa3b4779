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
Feature space labeler.

The feature space F_q holds the L2-normalized feature vectors of the
training set with their labels. For every class, k-means clustering on
that class's vectors gives M anchor points. A new vector f' (normalized)
is labeled by soft voting over all anchors::

    p'(n) = sum_m exp(-gamma |f' - a(n,m)|^2) / sum_z sum_m exp(-gamma |f' - a(z,m)|^2)

and receives the class with the largest vote (pseudo label).

    >>> space = FeatureSpace.fromDataset(training_set)
    >>> anchors = build_anchors(space, LabelerConfig(M=10, gamma=1.5))
    >>> label, confidence = pseudo_label(x, anchors, cfg)
"""
import hashlib
import logging

import numpy as N

from increlearn import util as U
from increlearn import kmeans as K
from increlearn.samples import ClassSet
from increlearn.featurefile import SnapshotWriter, SnapshotReader, \
     FeatureFileError

#: tolerance on the unit norm of feature space vectors
NORM_TOLERANCE = 1e-9

class LabelerError(Exception):
    pass


class LabelerConfig(object):
    """
    Anchors per class `M` (default 10), softness `gamma` (default 1.5),
    clustering `seed`, k-means `restarts`, `max_iter` and `tol`.
    """

    def __init__(self, M=10, gamma=1.5, seed=0, restarts=5, max_iter=100,
                 tol=1e-6):
        self.M = int(M)
        self.gamma = float(gamma)
        self.seed = int(seed)
        self.restarts = int(restarts)
        self.max_iter = int(max_iter)
        self.tol = float(tol)

        if self.M < 1:
            raise LabelerError('M must be at least 1')
        if not self.gamma > 0:
            raise LabelerError('gamma must be positive')
        if self.restarts < 1 or self.max_iter < 1:
            raise LabelerError('restarts and max_iter must be positive')

    def clusterKey(self):
        """parameters that determine the anchors of a class"""
        return (self.M, self.seed, self.restarts, self.max_iter, self.tol)

    def asdict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return 'LabelerConfig(%s)' % ', '.join('%s=%r' % kv for kv in
                                               sorted(self.__dict__.items()))


def normalize(x):
    """
    L2-normalize a feature vector.

    Args:
        x (numpy.ndarray): feature vector
    Returns:
        numpy.ndarray: unit length vector of the same direction
    Raises:
        LabelerError: for a zero vector
    """
    return normalize_batch(N.atleast_2d(x))[0]


def normalize_batch(X):
    """
    L2-normalize every row of a matrix.

    Raises:
        LabelerError: if any row is a zero vector
    """
    X = N.asarray(X, dtype=float)
    norms = N.sqrt((X * X).sum(axis=1))
    if N.any(norms == 0):
        raise LabelerError('Cannot normalize zero feature vector (row %i)'
                           % N.flatnonzero(norms == 0)[0])
    return X / norms[:, None]


def _check_unit(X):
    norms = N.sqrt((X * X).sum(axis=1))
    bad = N.flatnonzero(N.abs(norms - 1.) > NORM_TOLERANCE)
    if len(bad):
        raise LabelerError('Feature space vectors must have unit norm; '
                           'entry %i has norm %r' % (bad[0], norms[bad[0]]))


class FeatureSpace(object):
    """
    Immutable set F_q of unit-norm feature vectors with class labels.

    *Properties:*

        * `vectors` - read-only n x D matrix
        * `labels` - read-only int array of length n
        * `version` - int q, the training set generation this space reflects
        * `class_set`, `dim`
    """

    def __init__(self, vectors, labels, class_set, version=0, dim=None):
        V = N.array(vectors, dtype=float)
        if V.size == 0:
            if dim is None:
                raise LabelerError('Empty feature space needs a dimension')
            V = N.zeros((0, int(dim)))
        if V.ndim != 2:
            raise LabelerError('Feature space needs an n x D matrix')
        l = N.array(labels, dtype=int).reshape(-1)
        if len(l) != len(V):
            raise LabelerError('%i labels for %i vectors' % (len(l), len(V)))
        if len(l) and (l.min() < 0 or l.max() >= class_set.N):
            raise LabelerError('Labels outside [0, %i)' % class_set.N)
        _check_unit(V)

        V.flags.writeable = False
        l.flags.writeable = False
        self._v, self._l = V, l
        self._classes = class_set
        self._version = int(version)

    @classmethod
    def fromDataset(cls, data, version=0):
        """
        Normalize the training set into a feature space. Each example
        contributes its training label (pseudo label if present).
        """
        V = normalize_batch(data.matrix()) if len(data) else []
        return cls(V, data.labels() if len(data) else [], data.class_set,
                   version, dim=data.dim)

    @property
    def vectors(self):
        return self._v

    @property
    def labels(self):
        return self._l

    @property
    def version(self):
        return self._version

    @property
    def class_set(self):
        return self._classes

    @property
    def dim(self):
        return self._v.shape[1]

    def __len__(self):
        return len(self._l)

    def classVectors(self, n):
        """-> numpy.ndarray, all vectors labeled with class n"""
        return self._v[self._l == n]

    def withVersion(self, version):
        return FeatureSpace(self._v, self._l, self._classes, version)

    def __eq__(self, o):
        return isinstance(o, FeatureSpace) and self._version == o._version \
               and self._classes == o._classes \
               and N.array_equal(self._v, o._v) and N.array_equal(self._l, o._l)

    def __repr__(self):
        return '<FeatureSpace q=%i, %i entries, D=%i>' % (self._version,
                                                         len(self), self.dim)

    def save(self, fname):
        """
        Write feature space snapshot; one row 'class name,v0,..' per entry.
        """
        names = self._classes.names
        with SnapshotWriter(fname, 'featurespace', self._classes, self.dim,
                            q=self._version, entries=len(self)) as w:
            for v, l in zip(self._v, self._l):
                w.floats(v, prefix=(names[l],))

    @classmethod
    def load(cls, fname):
        """
        Returns:
            FeatureSpace: snapshot written by `save`
        Raises:
            FeatureFileError: if the file is malformed
        """
        r = SnapshotReader(fname, 'featurespace', required=['q', 'entries'])
        V, labels = [], []
        for lineno, tokens in r.rows():
            labels += [ r.label(tokens[0], lineno) ]
            if labels[-1] is None:
                raise FeatureFileError('Entry without class', r.fname, lineno)
            V += [ r.floats(tokens[1:], lineno) ]

        if len(labels) != r.fields['entries']:
            raise FeatureFileError('Header declares %i entries, found %i' %
                                   (r.fields['entries'], len(labels)), r.fname,
                                   1)
        return cls(V, labels, r.class_set, r.fields['q'], dim=r.D)


def extend(space, items):
    """
    Append normalized feature vectors with labels. The version is not
    changed; the caller sets it when committing an update.

    Args:
        space (FeatureSpace): current feature space
        items (list of (numpy.ndarray, int)): unit-norm vectors with labels
    Returns:
        FeatureSpace
    Raises:
        LabelerError: if a vector is not normalized
    """
    items = list(items)
    if not items:
        return space
    V = N.array([ v for v, l in items ], dtype=float)
    _check_unit(V)
    return FeatureSpace(N.vstack([space.vectors, V]),
                        N.concatenate([space.labels, [ l for v, l in items ]]),
                        space.class_set, space.version)


class AnchorSet(object):
    """
    Per-class anchor points.

    *Fields:*

        * `anchors` - tuple with one k x D array per class (k <= M; empty
          classes have a 0 x D array)
        * `M` - anchors per class requested
        * `seed` - clustering seed
        * `warnings` - list of str, e.g. classes without any vector
        * `fingerprints` - per class digest of the clustered vectors; used
          by `build_anchors` to reuse anchors of unchanged classes
    """

    def __init__(self, anchors, M, seed, warnings=(), fingerprints=None,
                 clusterkey=None):
        self.anchors = tuple( N.asarray(a, dtype=float) for a in anchors )
        for a in self.anchors:
            a.flags.writeable = False
        self.M = M
        self.seed = seed
        self.warnings = list(warnings)
        self.fingerprints = fingerprints or [None] * len(self.anchors)
        self.clusterkey = clusterkey

        self._flat = None

    @property
    def N(self):
        return len(self.anchors)

    def counts(self):
        """-> list of int, number of anchors per class"""
        return [ len(a) for a in self.anchors ]

    def flat(self):
        """
        Returns:
            tuple: (K x D matrix of all anchors, class index of each anchor)
        """
        if self._flat is None:
            dim = max( a.shape[-1] if a.ndim == 2 else 0 for a in self.anchors )
            A = [ a.reshape(-1, dim) for a in self.anchors ]
            owner = N.concatenate([ [n] * len(a) for n, a in enumerate(A) ])
            self._flat = (N.vstack(A), owner.astype(int))
        return self._flat

    def __repr__(self):
        return '<AnchorSet M=%i, anchors per class %r>' % (self.M,
                                                           self.counts())


def _fingerprint(X):
    return hashlib.sha1(N.ascontiguousarray(X).tobytes()).hexdigest()


def _no_vectors(space, n):
    msg = 'Class %s has no feature vectors and gets no anchors' % \
          space.class_set[n]
    logging.warning(msg)
    return msg


def build_anchors(space, cfg, previous=None):
    """
    Cluster every class of the feature space into M anchor points
    (k-means++ seeded Lloyd's, best of cfg.restarts). Class n is clustered
    with a seed derived from (cfg.seed, n), so its anchors depend only on
    its own vectors. Classes with fewer than M vectors use all vectors as
    anchors; classes without vectors get no anchors and a warning.

    Args:
        space (FeatureSpace): normalized vectors with labels
        cfg (LabelerConfig): clustering parameters
        previous (AnchorSet): earlier result; anchors of classes whose
            vectors did not change are reused
    Returns:
        AnchorSet
    Raises:
        LabelerError: if the feature space is empty
    """
    if len(space) == 0:
        raise LabelerError('Cannot build anchors from an empty feature space')

    key = cfg.clusterKey()
    reuse = previous is not None and previous.clusterkey == key \
            and previous.N == space.class_set.N

    anchors, prints, warnings = [], [], []

    for n in range(space.class_set.N):
        X = space.classVectors(n)
        fp = _fingerprint(X)
        prints += [ fp ]

        if len(X) == 0:
            warnings += [ _no_vectors(space, n) ]
            anchors += [ N.zeros((0, space.dim)) ]
            continue

        if reuse and previous.fingerprints[n] == fp:
            anchors += [ previous.anchors[n] ]
            continue

        r = K.kmeans(X, cfg.M, seed=U.derive_seed(cfg.seed, n),
                     restarts=cfg.restarts, max_iter=cfg.max_iter, tol=cfg.tol)
        anchors += [ r.centroids ]

    return AnchorSet(anchors, cfg.M, cfg.seed, warnings, prints, key)


def soft_vote_batch(F, anchors, gamma):
    """
    Soft voting for every row of F (see module doc). Distances are shifted
    by their row minimum before exponentiation; this cancels in the ratio.

    Args:
        F (numpy.ndarray): n x D unit-norm vectors
        anchors (AnchorSet): per-class anchors
        gamma (float): softness, > 0
    Returns:
        numpy.ndarray: n x N class probabilities
    Raises:
        LabelerError: if no class has any anchor
    """
    A, owner = anchors.flat()
    if len(A) == 0:
        raise LabelerError('No anchors in any class')

    F = N.atleast_2d(N.asarray(F, dtype=float))
    if F.shape[1] != A.shape[1]:
        raise LabelerError('Vector dimension %i does not match anchor '
                           'dimension %i' % (F.shape[1], A.shape[1]))

    d = K.sq_distances(F, A)
    w = N.exp(-gamma * (d - d.min(axis=1, keepdims=True)))

    P = N.zeros((len(F), anchors.N))
    for n in range(anchors.N):
        P[:, n] = w[:, owner == n].sum(axis=1)
    return P / P.sum(axis=1, keepdims=True)


def soft_vote(f_norm, anchors, gamma):
    """
    Args:
        f_norm (numpy.ndarray): unit-norm feature vector
        anchors (AnchorSet): per-class anchors
        gamma (float): softness
    Returns:
        numpy.ndarray: N class probabilities
    """
    return soft_vote_batch(N.atleast_2d(f_norm), anchors, gamma)[0]


def pseudo_label_batch(X, anchors, cfg):
    """
    Normalize every row of X and assign the class with the largest soft
    vote (ties go to the lowest class index).

    Returns:
        tuple: (int array of labels, float array of confidences)
    """
    P = soft_vote_batch(normalize_batch(N.atleast_2d(X)), anchors, cfg.gamma)
    labels = N.argmax(P, axis=1)
    return labels, P[N.arange(len(P)), labels]


def pseudo_label(x, anchors, cfg):
    """
    Args:
        x (numpy.ndarray): raw feature vector
        anchors (AnchorSet): per-class anchors
        cfg (LabelerConfig): gamma
    Returns:
        tuple: (int label, float confidence)
    Raises:
        LabelerError: for a zero vector or if no anchors exist
    """
    labels, conf = pseudo_label_batch(N.atleast_2d(x), anchors, cfg)
    return int(labels[0]), float(conf[0])


######################
### Module testing ###
from increlearn import testing
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

class Test(testing.AutoTest):
    """Test labeler"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        self.classes = ClassSet(['a', 'b', 'c'])
        self.rng = N.random.default_rng(33)
        self.f_space = tempfile.mktemp(prefix='test_space_', suffix='.txt')

    def cleanUp(self):
        from increlearn import fileutil as F
        F.tryRemove(self.f_space)

    def _space(self, counts, dim=4):
        V, l = [], []
        for n, c in enumerate(counts):
            V += [ normalize_batch(self.rng.normal(size=(c, dim))) ]
            l += [n] * c
        return FeatureSpace(N.vstack(V), l, self.classes)

    def test_normalize(self):
        self.assertTrue(N.allclose(normalize(N.array([3., 4.])), [0.6, 0.8],
                                   rtol=0, atol=1e-15))
        u = normalize(N.array([1., 2., 3.]))
        self.assertTrue(N.allclose(normalize(u), u, rtol=0, atol=1e-9))
        self.assertRaises(LabelerError, normalize, N.zeros(2))

    def test_featurespace(self):
        self.assertRaises(LabelerError, FeatureSpace, [[1., 1.]], [0],
                          self.classes)
        s = self._space([3, 4, 5])
        self.assertEqual(len(s), 12)
        self.assertEqual(len(s.classVectors(1)), 4)

    def test_extend(self):
        s = self._space([3, 4, 5])
        items = [ (normalize(self.rng.normal(size=4)), 2) for i in range(3) ]
        r = extend(s, items)
        self.assertEqual(len(r), len(s) + 3)
        self.assertEqual(r.version, s.version)
        self.assertTrue(extend(s, []) is s)
        self.assertRaises(LabelerError, extend, s, [(N.ones(4), 0)])

    def test_anchors_small_classes(self):
        """labeler.build_anchors with few or no vectors"""
        s = self._space([10, 3, 0])
        a = build_anchors(s, LabelerConfig(M=3, seed=1))
        self.assertEqual(a.counts(), [3, 3, 0])
        self.assertTrue(N.array_equal(a.anchors[1], s.classVectors(1)))
        self.assertEqual(len(a.warnings), 1)

        a1 = build_anchors(s, LabelerConfig(M=1))
        self.assertTrue(N.allclose(a1.anchors[0][0],
                                   s.classVectors(0).mean(axis=0)))

        P = soft_vote_batch(s.vectors, a, 1.5)
        self.assertTrue(N.all(P[:, 2] == 0))

    def test_anchors_subclusters(self):
        """labeler.build_anchors recovers two sub-clusters per class"""
        from increlearn.kmeans import best_two_partition, centroid_mismatch
        V, l = [], []
        for n in range(3):
            centers = normalize_batch(self.rng.normal(size=(2, 6)))
            for c in centers:
                V += list(normalize_batch(c + self.rng.normal(scale=0.01,
                                                              size=(5, 6))))
                l += [n] * 5
        s = FeatureSpace(V, l, self.classes)
        a = build_anchors(s, LabelerConfig(M=2, seed=4))
        for n in range(3):
            X = s.classVectors(n)
            self.assertTrue(centroid_mismatch(a.anchors[n],
                                              best_two_partition(X)) < 1e-3)

    def test_anchor_cache(self):
        """labeler.build_anchors reuses anchors of unchanged classes"""
        cfg = LabelerConfig(M=3, seed=7)
        s = self._space([20, 20, 20])
        a = build_anchors(s, cfg)

        items = [ (normalize(self.rng.normal(size=4)), 1) for i in range(5) ]
        s2 = extend(s, items)
        cached = build_anchors(s2, cfg, previous=a)
        fresh = build_anchors(s2, cfg)

        for n in range(3):
            self.assertTrue(N.array_equal(cached.anchors[n], fresh.anchors[n]))
        self.assertTrue(cached.anchors[0] is a.anchors[0])
        self.assertTrue(N.array_equal(fresh.anchors[2], a.anchors[2]))
        self.assertFalse(N.array_equal(fresh.anchors[1], a.anchors[1]))

    def test_anchor_cache_empty_class(self):
        """labeler.build_anchors warns again for a cached empty class"""
        cfg = LabelerConfig(M=3, seed=7)
        s = self._space([20, 20, 0])
        a = build_anchors(s, cfg)
        s2 = extend(s, [ (normalize(self.rng.normal(size=4)), 0) ])
        cached = build_anchors(s2, cfg, previous=a)
        self.assertEqual(cached.warnings, a.warnings)
        self.assertEqual(len(cached.warnings), 1)
        self.assertEqual(cached.counts()[2], 0)

    def _anchorset(self, *anchors):
        return AnchorSet([ N.atleast_2d(a) for a in anchors ], 1, 0)

    def test_soft_vote_cases(self):
        """labeler.soft_vote analytic cases"""
        f = N.array([1., 0.])
        one = self._anchorset([0., 1.], N.zeros((0, 2)))
        self.assertTrue(N.allclose(soft_vote(f, one, 1.5), [1., 0.]))

        sym = self._anchorset([0., 1.], [0., -1.])
        self.assertTrue(N.allclose(soft_vote(f, sym, 1.5), [0.5, 0.5]))
        self.assertEqual(pseudo_label(f, sym, LabelerConfig(gamma=1.5))[0], 0)

        ## anchors at distance 0.5 and 1.0 from f
        two = self._anchorset([1.5, 0.], [1., 1.])
        e1, e2 = N.exp(-1.5 * 0.25), N.exp(-1.5 * 1.0)
        p = soft_vote(f, two, 1.5)
        self.assertAlmostEqual(p[0], e1 / (e1 + e2), places=14)
        self.assertAlmostEqual(p[1], e2 / (e1 + e2), places=14)

        empty = self._anchorset(N.zeros((0, 2)), N.zeros((0, 2)))
        self.assertRaises(LabelerError, soft_vote, f, empty, 1.5)

    def test_pseudo_label_collinear(self):
        """labeler.pseudo_label on a vector collinear with one anchor"""
        anchors = self._anchorset([0., -1., 0.], [-1., 0., 0.], [0., 1., 0.])
        label, conf = pseudo_label(N.array([0., 7., 0.]), anchors,
                                   LabelerConfig(gamma=1.5))
        ## squared distances 0 vs 2 and 4
        e = [ N.exp(-1.5 * 4), N.exp(-1.5 * 2), 1. ]
        self.assertEqual(label, 2)
        self.assertAlmostEqual(conf, 1. / sum(e), places=14)

        anchors = self._anchorset([0., -1., 0.], [0., -1., 0.], [0., 1., 0.])
        label, conf = pseudo_label(N.array([0., 7., 0.]), anchors,
                                   LabelerConfig(gamma=1.5))
        self.assertTrue(conf > 0.99)

    @given(arrays(float, (3,), elements=st.floats(-10, 10)),
           st.floats(0.01, 50.))
    def test_soft_vote_distribution(self, x, gamma):
        """labeler.soft_vote is a probability distribution"""
        if not (x * x).sum() > 1e-12:
            x = N.ones(3)
        s = self._space([4, 5, 6], dim=3)
        a = build_anchors(s, LabelerConfig(M=2, restarts=1))
        p = soft_vote(normalize(x), a, gamma)
        self.assertTrue(N.all(p >= 0))
        self.assertAlmostEqual(p.sum(), 1., delta=1e-9)
        self.assertTrue(p.max() >= 1. / 3)

    def test_soft_vote_draws(self):
        """labeler.soft_vote 10000 random calls"""
        for i in range(10000):
            n = int(self.rng.integers(2, 6))
            d = int(self.rng.integers(2, 9))
            anchors = AnchorSet([ self.rng.normal(size=(int(self.rng.integers(
                1, 4)), d)) for k in range(n) ], 3, 0)
            p = soft_vote(normalize(self.rng.normal(size=d)), anchors,
                          float(self.rng.uniform(0.01, 20)))
            self.assertTrue(N.all(p >= 0) and abs(p.sum() - 1.) <= 1e-9)

    def test_gamma_concentration(self):
        """labeler.soft_vote concentrates on the nearest anchor's class"""
        for trial in range(20):
            anchors = AnchorSet([ normalize_batch(self.rng.normal(size=(3, 5)))
                                  for k in range(4) ], 3, 0)
            f = normalize(self.rng.normal(size=5))
            A, owner = anchors.flat()
            d = ((A - f)**2).sum(axis=1)
            nearest = owner[N.argmin(d)]
            if d[owner != nearest].min() - d.min() < 0.01:
                continue    ## near tie between classes

            P = N.array([ soft_vote(f, anchors, g) for g in
                          [ 2.**k for k in range(-2, 16) ] ])
            self.assertTrue(P[-1, nearest] > 0.99)
            self.assertTrue(N.all(N.argmax(P[-3:], axis=1) == nearest))

    def test_soft_vote_distances(self):
        """labeler.soft_vote_batch matches an explicit distance sum"""
        anchors = AnchorSet([ self.rng.normal(size=(3, 6)) for k in range(4) ],
                            3, 0)
        F = normalize_batch(self.rng.normal(size=(50, 6)))
        A, owner = anchors.flat()
        d = ((F[:, None, :] - A[None, :, :])**2).sum(axis=2)
        w = N.exp(-1.5 * d)
        P = N.array([ w[:, owner == n].sum(axis=1) for n in range(4) ]).T
        P /= P.sum(axis=1, keepdims=True)
        self.assertTrue(N.allclose(soft_vote_batch(F, anchors, 1.5), P,
                                   rtol=0, atol=1e-12))

    def test_pseudo_label_batch(self):
        s = self._space([10, 10, 10])
        a = build_anchors(s, LabelerConfig(M=2))
        X = self.rng.normal(size=(6, 4)) * 5
        labels, conf = pseudo_label_batch(X, a, LabelerConfig())
        for i in range(6):
            l, c = pseudo_label(X[i], a, LabelerConfig())
            self.assertEqual(l, labels[i])
            self.assertAlmostEqual(c, conf[i], places=12)

    def test_snapshot(self):
        """FeatureSpace.save / load bit-exact test"""
        s = self._space([3, 0, 2]).withVersion(4)
        s.save(self.f_space)
        self.assertEqual(FeatureSpace.load(self.f_space), s)


if __name__ == '__main__':

    testing.localTest()
