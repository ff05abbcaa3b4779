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
Dataset ingestion, seeded splitting, synthetic data and label noise.

The synthetic generator emulates a feature extractor that has seen some
instances of every class (main clusters) while other instances (novel
sub-clusters) only show up later:

* every class n has a core direction c(n) and a few lateral axes h(n, a),
  all mutually orthogonal
* main cluster k of class n is centered at R c(n) +/- L h(n, k // 2)
* novel sub-cluster j of class n is centered at
  R ((1 - alpha) c(n) + alpha c(z)) + L' h(n, j) for a confuser class z;
  it appears in the validation set only
* a share of every novel sub-cluster are look-alikes: instances of class
  n that fall into novel sub-cluster j of the confuser z, as when a
  picture of one class looks like another class
* all coordinates are finally multiplied by `scale`

With alpha > 0.5 the linear head prefers the confuser class for novel
points, while the L2-normalized feature space still places them next to
the main cluster of their own class that shares the lateral axis. Main
clusters come in mirrored pairs, so the head carries no weight on the
lateral axes and L' does not change its prediction. No classifier can
tell look-alikes from the sub-cluster they fall into; they are the
label noise of the anchor labeler.
"""
import math
import logging

import numpy as N

from increlearn import util as U
from increlearn.samples import ClassSet, Example, Dataset, DatasetError
from increlearn.featurefile import load_features, save_features, \
     SnapshotWriter, SnapshotReader, FeatureFileError

__all__ = ['SynthSpec', 'SplitSpec', 'GroundTruth', 'split', 'generate',
           'inject_label_noise', 'load_features', 'save_features',
           'DatasetError']


class SplitSpec(object):
    """
    Fractions per role (e.g. (0.6, 0.4) for learn / test) and a seed.
    """

    def __init__(self, fractions, seed=0):
        self.fractions = [ float(f) for f in U.tolist(fractions) ]
        self.seed = int(seed)

        if not self.fractions or min(self.fractions) <= 0:
            raise DatasetError('Split fractions must be positive: %r'
                               % self.fractions)
        if abs(sum(self.fractions) - 1.) > 1e-9:
            raise DatasetError('Split fractions must sum to 1: %r'
                               % self.fractions)

    def sizes(self, n):
        """
        Largest-remainder rounding of the fractions of n items; ties go to
        the lower role index.

        Returns:
            list of int: part sizes summing to n
        """
        raw = [ f * n for f in self.fractions ]
        r = [ int(math.floor(x)) for x in raw ]
        order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - r[i]), i))
        for i in order[: n - sum(r)]:
            r[i] += 1
        return r

    def __repr__(self):
        return 'SplitSpec(%r, seed=%i)' % (self.fractions, self.seed)


def split(data, spec):
    """
    Seeded random partition of a dataset. Each part keeps the original
    example order.

    Args:
        data (Dataset): input
        spec (SplitSpec): fractions and seed
    Returns:
        list of Dataset: one part per fraction; disjoint, union = data
    """
    perm = N.random.default_rng(spec.seed).permutation(len(data))
    r, start = [], 0
    for size in spec.sizes(len(data)):
        r += [ data.subset(N.sort(perm[start : start + size])) ]
        start += size
    return r


class SynthSpec(object):
    """
    Parameters of the synthetic generator. Defaults give 4 classes in 32
    dimensions with 4 main clusters of 313 points (250 for training) and
    one novel sub-cluster of 120 points per class, 15% of which are
    look-alikes. `scale` brings the features to the magnitude of CNN
    features; the normalized feature space does not depend on it.

    If `tune` is set, `generate` raises the novel offset alpha in steps of
    `offset_step` (up to `offset_max`) until a model trained on the
    training set reaches `min_main_accuracy` on main validation points and
    at most `max_novel_accuracy` on novel points.
    """

    def __init__(self, N=4, D=32, main_clusters=4, main_size=313,
                 main_std=0.5, novel_clusters=1, novel_size=120,
                 novel_std=0.15, novel_offset=0.52, core_radius=4.0,
                 lateral=6.0, train_fraction=0.8, seed=0, tune=True,
                 offset_step=0.02, offset_max=0.95, min_main_accuracy=0.95,
                 max_novel_accuracy=0.75, names=None, novel_lateral=16.0,
                 novel_lookalike=0.15, scale=8.0):
        self.N = int(N)
        self.D = int(D)
        self.main_clusters = int(main_clusters)
        self.main_size = int(main_size)
        self.main_std = float(main_std)
        self.novel_clusters = int(novel_clusters)
        self.novel_size = int(novel_size)
        self.novel_std = float(novel_std)
        self.novel_offset = float(novel_offset)
        self.novel_lateral = float(novel_lateral)
        self.novel_lookalike = float(novel_lookalike)
        self.core_radius = float(core_radius)
        self.lateral = float(lateral)
        self.scale = float(scale)
        self.train_fraction = float(train_fraction)
        self.seed = int(seed)
        self.tune = bool(tune)
        self.offset_step = float(offset_step)
        self.offset_max = float(offset_max)
        self.min_main_accuracy = float(min_main_accuracy)
        self.max_novel_accuracy = float(max_novel_accuracy)
        self.names = list(names) if names else [ 'class%i' % i 
                                                for i in range(self.N) ]
        self.validate()

    @property
    def lookalikes(self):
        """number of look-alikes per novel sub-cluster"""
        return int(round(self.novel_lookalike * self.novel_size))

    @property
    def lateral_axes(self):
        """number of lateral axes per class"""
        return max(int(math.ceil(self.main_clusters / 2.)),
                   self.novel_clusters)

    def validate(self):
        """
        Raises:
            DatasetError: if the parameters are inconsistent
        """
        if self.N < 2:
            raise DatasetError('Need at least 2 classes')
        if len(self.names) != self.N:
            raise DatasetError('%i names for %i classes' % (len(self.names),
                                                            self.N))
        if self.main_clusters < 1 or self.main_size < 2:
            raise DatasetError('Need at least one main cluster of 2 points')
        if self.novel_clusters < 0 or self.novel_size < 0:
            raise DatasetError('Negative novel cluster count or size')
        if min(self.main_std, self.novel_std) < 0:
            raise DatasetError('Negative standard deviation')
        if not 0 <= self.novel_offset <= 1 or self.offset_max > 1:
            raise DatasetError('Novel offset must be in [0, 1]')
        if not 0 < self.train_fraction < 1:
            raise DatasetError('train_fraction must be in (0, 1)')
        if not 0 <= self.novel_lookalike <= 1:
            raise DatasetError('novel_lookalike must be in [0, 1]')
        if self.core_radius <= 0 or min(self.lateral, self.novel_lateral) < 0 \
           or self.scale <= 0:
            raise DatasetError('Invalid cluster geometry')
        if self.N * (1 + self.lateral_axes) > self.D:
            raise DatasetError('D=%i too small for %i classes with %i lateral '
                               'axes each' % (self.D, self.N,
                                              self.lateral_axes))

    def asdict(self):
        return dict(self.__dict__)

    def replace(self, **kwargs):
        d = self.asdict()
        d.update(kwargs)
        return SynthSpec(**d)

    def __repr__(self):
        return 'SynthSpec(%s)' % ', '.join('%s=%r' % kv for kv in
                                           sorted(self.__dict__.items()))


class GroundTruth(object):
    """
    Oracle for synthetic (or externally labeled) data: true label per
    example ID, the set of IDs belonging to novel sub-clusters and the
    subset of novel IDs that are look-alikes of another class.
    """

    def __init__(self, labels, novel=(), offset=None, lookalike=()):
        self.labels = dict(labels)
        self.novel = set(novel)
        self.lookalike = set(lookalike)
        self.offset = offset

    @classmethod
    def fromDatasets(cls, *datasets, novel=(), lookalike=()):
        labels = {}
        for d in datasets:
            labels.update({ e.id : e.true_label for e in d })
        return cls(labels, novel, lookalike=lookalike)

    def label(self, id):
        """-> int, true label of example ID"""
        return self.labels[id]

    def isNovel(self, id):
        return id in self.novel

    def novelMask(self, data):
        """-> numpy.ndarray of bool, True for novel examples of data"""
        return N.array([ e.id in self.novel for e in data ], dtype=bool)

    def lookalikeMask(self, data):
        """-> numpy.ndarray of bool, True for look-alike examples of data"""
        return N.array([ e.id in self.lookalike for e in data ], dtype=bool)

    def save(self, fname, class_set):
        """write 'id,class name,0|1|2' rows (1 = novel, 2 = look-alike)"""
        with SnapshotWriter(fname, 'truth', class_set, 0) as w:
            for _id in sorted(self.labels):
                kind = 2 if _id in self.lookalike else int(_id in self.novel)
                w.row([ _id, class_set[self.labels[_id]], str(kind) ])

    @classmethod
    def load(cls, fname):
        r = SnapshotReader(fname, 'truth')
        labels, novel, lookalike = {}, set(), set()
        for lineno, tokens in r.rows():
            if len(tokens) != 3:
                raise FeatureFileError('Expected id,class,novel', r.fname,
                                       lineno)
            labels[tokens[0]] = r.label(tokens[1], lineno)
            kind = tokens[2].strip()
            if kind in ('1', '2'):
                novel.add(tokens[0])
            if kind == '2':
                lookalike.add(tokens[0])
        return cls(labels, novel, lookalike=lookalike)

    def __len__(self):
        return len(self.labels)


def _directions(spec, rng):
    """core directions (N x D) and lateral axes (N x A x D), orthonormal"""
    Q, _ = N.linalg.qr(rng.normal(size=(spec.D, spec.D)))
    dirs = Q.T
    A = spec.lateral_axes
    core = dirs[:spec.N]
    lateral = dirs[spec.N : spec.N * (1 + A)].reshape(spec.N, A, spec.D)
    return core, lateral


def _confuser(spec, n, j):
    return (n + 1 + j % (spec.N - 1)) % spec.N


def _novel_center(spec, core, lateral, n, j, alpha):
    z = _confuser(spec, n, j)
    return spec.core_radius * ((1 - alpha) * core[n] + alpha * core[z]) \
           + spec.novel_lateral * lateral[n, j]


def _novel_points(spec, core, lateral, noise, alpha):
    """one (novel_size x D) array per sub-cluster, look-alikes first"""
    k = spec.lookalikes
    r = []
    for n in range(spec.N):
        for j in range(spec.novel_clusters):
            z = _confuser(spec, n, j)
            X = _novel_center(spec, core, lateral, n, j, alpha) + noise[n][j]
            X[:k] = _novel_center(spec, core, lateral, z, j, alpha) \
                    + noise[n][j][:k]
            r += [ spec.scale * X ]
    return r


def _accuracy(model, X, y):
    from increlearn import softmax as S
    if len(y) == 0:
        return 1.
    return float(N.mean(N.argmax(S.predict_batch(model, X), axis=1) == y))


def generate(spec):
    """
    Generate synthetic training and validation sets (see module doc).

    Args:
        spec (SynthSpec): generator parameters
    Returns:
        tuple: (train Dataset, validation Dataset, GroundTruth); the
        GroundTruth records the novel offset used
    Raises:
        DatasetError: if the parameters are invalid or no offset satisfies
            the accuracy bounds
    """
    from increlearn import softmax as S

    spec.validate()
    rng = N.random.default_rng(spec.seed)
    classes = ClassSet(spec.names)
    core, lateral = _directions(spec, rng)
    R, L = spec.core_radius, spec.lateral

    train, valid = [], []
    for n in range(spec.N):
        for k in range(spec.main_clusters):
            sign = 1. if k % 2 == 0 else -1.
            center = R * core[n] + sign * L * lateral[n, k // 2]
            X = spec.scale * (center + rng.normal(
                scale=spec.main_std, size=(spec.main_size, spec.D)))
            ntrain = int(round(spec.main_size * spec.train_fraction))
            ntrain = min(max(ntrain, 1), spec.main_size - 1)
            for i in rng.permutation(spec.main_size):
                e = Example('%s-m%i-%04i' % (classes[n], k, i), X[i], n)
                (train if i < ntrain else valid).append(e)

    ## noise of novel points is drawn once; tuning only moves the centers
    noise = [ [ rng.normal(scale=spec.novel_std, size=(spec.novel_size,
                                                       spec.D))
                for j in range(spec.novel_clusters) ] for n in range(spec.N) ]

    train = Dataset(train, classes, spec.D)
    main_valid = Dataset(valid, classes, spec.D)

    alpha = spec.novel_offset
    if spec.novel_clusters and spec.novel_size and spec.tune:
        model, trace = S.train(S.SoftmaxModel.zeros(classes, spec.D), train,
                               S.TrainConfig(seed=U.derive_seed(spec.seed, 1)))
        main_acc = _accuracy(model, main_valid.matrix(),
                             main_valid.true_labels())
        if main_acc < spec.min_main_accuracy:
            raise DatasetError('Main clusters not learnable: accuracy %.3f < '
                               '%.3f' % (main_acc, spec.min_main_accuracy))

        Xt, yt = train.matrix(), train.true_labels()
        centroids = N.array([ Xt[yt == n].mean(axis=0)
                              for n in range(spec.N) ])
        y_novel = N.repeat(N.arange(spec.N), spec.novel_clusters *
                           spec.novel_size)

        while True:
            Xn = N.vstack(_novel_points(spec, core, lateral, noise, alpha))
            novel_acc = _accuracy(model, Xn, y_novel)
            d = ((Xn[:, None, :] - centroids[None, :, :])**2).sum(axis=2)
            centroid_err = N.mean(N.argmin(d, axis=1) != y_novel)

            logging.info('novel offset %.2f: main accuracy %.3f, novel '
                         'accuracy %.3f, centroid error %.3f' %
                         (alpha, main_acc, novel_acc, centroid_err))

            if novel_acc <= spec.max_novel_accuracy and centroid_err > 0:
                break
            alpha = round(alpha + spec.offset_step, 10)
            if alpha > spec.offset_max + 1e-12:
                raise DatasetError('No novel offset <= %.2f satisfies the '
                                   'accuracy bounds' % spec.offset_max)

    novel_ids, lookalike_ids = [], []
    points = _novel_points(spec, core, lateral, noise, alpha) \
             if spec.novel_clusters else []
    i_cluster = 0
    for n in range(spec.N):
        for j in range(spec.novel_clusters):
            for i, x in enumerate(points[i_cluster]):
                _id = '%s-n%i-%04i' % (classes[n], j, i)
                valid.append(Example(_id, x, n))
                novel_ids += [ _id ]
                if i < spec.lookalikes:
                    lookalike_ids += [ _id ]
            i_cluster += 1

    validation = Dataset(valid, classes, spec.D)
    truth = GroundTruth.fromDatasets(train, validation, novel=novel_ids,
                                     lookalike=lookalike_ids)
    truth.offset = alpha

    logging.info('generated %i training and %i validation examples (%i novel, '
                 '%i look-alikes)' % (len(train), len(validation),
                                      len(novel_ids), len(lookalike_ids)))
    return train, validation, truth


def inject_label_noise(data, rate, seed=0):
    """
    Give exactly round(rate * len(data)) randomly chosen examples a
    uniformly drawn wrong label. The wrong label is set as pseudo label so
    that the ground truth stays available.

    Args:
        data (Dataset): labeled examples
        rate (float): fraction in [0, 1]
        seed (int): random seed
    Returns:
        tuple: (noisy Dataset, {id : original label} of corrupted examples)
    Raises:
        DatasetError: for a rate outside [0, 1]
    """
    if not 0 <= rate <= 1:
        raise DatasetError('Noise rate must be in [0, 1], not %r' % rate)

    n = len(data)
    k = int(round(rate * n))
    if k == 0:
        return data, {}

    rng = N.random.default_rng(seed)
    labels = data.labels()
    chosen = set(rng.choice(n, size=k, replace=False).tolist())
    nclasses = data.class_set.N

    examples, original = [], {}
    for i, e in enumerate(data):
        if i in chosen:
            wrong = (labels[i] + int(rng.integers(1, nclasses))) % nclasses
            original[e.id] = int(labels[i])
            e = e.withPseudoLabel(wrong)
        examples += [ e ]

    return Dataset(examples, data.class_set, data.dim), original


######################
### Module testing ###
from increlearn import testing
from hypothesis import given, strategies as st

class Test(testing.AutoTest):
    """Test datasets"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        self.classes = ClassSet(['a', 'b'])
        self.data = Dataset.fromArrays([ 'x%03i' % i for i in range(100) ],
                                       N.arange(200.).reshape(100, 2),
                                       self.classes,
                                       true_labels=[ i % 2 for i in range(100) ])
        self.f_truth = tempfile.mktemp(prefix='test_truth_', suffix='.txt')

    def cleanUp(self):
        from increlearn import fileutil as F
        F.tryRemove(self.f_truth)

    def test_split_sizes(self):
        """datasets.SplitSpec largest remainder sizes"""
        self.assertEqual(SplitSpec([472/787., 315/787.]).sizes(787), [472, 315])
        self.assertEqual(SplitSpec([0.6, 0.4]).sizes(787), [472, 315])
        self.assertEqual(SplitSpec([1/3., 1/3., 1/3.]).sizes(10), [4, 3, 3])
        self.assertRaises(DatasetError, SplitSpec, [0.5, 0.6])
        self.assertRaises(DatasetError, SplitSpec, [1.0, 0.])

    def test_split_identity(self):
        self.assertEqual(split(self.data, SplitSpec([1.0], seed=3)),
                         [self.data])

    @given(st.integers(0, 2**32), st.floats(0.05, 0.95))
    def test_split_partition(self, seed, f):
        """datasets.split partition property"""
        parts = split(self.data, SplitSpec([f, 1 - f], seed=seed))
        ids = parts[0].ids() + parts[1].ids()
        self.assertEqual(sorted(ids), self.data.ids())
        self.assertEqual(len(set(ids)), len(self.data))

    def test_split_seed(self):
        a = split(self.data, SplitSpec([0.5, 0.5], seed=1))
        b = split(self.data, SplitSpec([0.5, 0.5], seed=1))
        c = split(self.data, SplitSpec([0.5, 0.5], seed=2))
        self.assertEqual(a, b)
        self.assertNotEqual(a[0].ids(), c[0].ids())

    def test_noise(self):
        """datasets.inject_label_noise counts"""
        r, orig = inject_label_noise(self.data, 0.)
        self.assertTrue(r is self.data and orig == {})

        r, orig = inject_label_noise(self.data, 0.15, seed=4)
        changed = [ e for e in r if e.label != e.true_label ]
        self.assertEqual(len(changed), 15)
        self.assertEqual(sorted(orig), sorted(e.id for e in changed))

        r, orig = inject_label_noise(self.data, 1.0, seed=4)
        self.assertTrue(N.all(r.labels() == 1 - self.data.labels()))
        self.assertRaises(DatasetError, inject_label_noise, self.data, 1.5)

    def test_spec_errors(self):
        self.assertRaises(DatasetError, SynthSpec, N=1)
        self.assertRaises(DatasetError, SynthSpec, D=8)
        self.assertRaises(DatasetError, SynthSpec, main_std=-1.)

    def test_generate_degenerate(self):
        """datasets.generate zero spread and no novel clusters"""
        spec = SynthSpec(N=2, D=8, main_clusters=1, main_size=10,
                         main_std=0., novel_clusters=0, tune=False, seed=2)
        train, valid, truth = generate(spec)
        self.assertEqual(len(train), 16)
        self.assertEqual(len(valid), 4)
        X = train.matrix()[train.true_labels() == 0]
        self.assertTrue(N.all(X == X[0]))
        self.assertEqual(truth.novel, set())

    def test_generate_small(self):
        """datasets.generate layout and determinism"""
        spec = SynthSpec(N=3, D=12, main_clusters=2, main_size=20,
                         novel_clusters=1, novel_size=5, tune=False, seed=5)
        train, valid, truth = generate(spec)
        self.assertEqual(len(train), 3 * 2 * 16)
        self.assertEqual(len(valid), 3 * 2 * 4 + 3 * 5)
        self.assertEqual(len(truth.novel), 15)
        self.assertEqual(len(truth.lookalike), 3)
        self.assertTrue(truth.lookalike <= truth.novel)
        self.assertFalse(set(train.ids()) & truth.novel)
        self.assertEqual(list(train.classCounts()), [32, 32, 32])

        again = generate(spec)
        self.assertEqual(again[0], train)
        self.assertEqual(again[1], valid)

        truth.save(self.f_truth, train.class_set)
        r = GroundTruth.load(self.f_truth)
        self.assertEqual(r.labels, truth.labels)
        self.assertEqual(r.novel, truth.novel)
        self.assertEqual(r.lookalike, truth.lookalike)

    def test_generate_lookalikes(self):
        """datasets.generate places look-alikes into the confuser cluster"""
        spec = SynthSpec(N=3, D=12, main_clusters=2, main_size=10,
                         novel_clusters=1, novel_size=4, novel_std=0.,
                         novel_lookalike=0.5, tune=False, seed=3)
        train, valid, truth = generate(spec)
        x = { e.id : e.features for e in valid }

        self.assertEqual(truth.lookalike, { 'class%i-n0-%04i' % (n, i)
                                            for n in range(3)
                                            for i in range(2) })
        ## class 0 confuses with class 1, class 1 with class 2
        self.assertTrue(N.allclose(x['class0-n0-0000'], x['class1-n0-0003']))
        self.assertTrue(N.allclose(x['class1-n0-0001'], x['class2-n0-0002']))
        self.assertFalse(N.allclose(x['class0-n0-0000'], x['class0-n0-0003']))
        self.assertEqual(truth.label('class0-n0-0000'), 0)

        mask = truth.lookalikeMask(valid)
        self.assertEqual(mask.sum(), 6)

    def test_generate_scale(self):
        """datasets.generate scale multiplies every coordinate"""
        spec = SynthSpec(N=2, D=8, main_clusters=2, main_size=10,
                         novel_clusters=1, novel_size=4, tune=False, seed=2,
                         scale=1.)
        a = generate(spec)[1].matrix()
        b = generate(spec.replace(scale=8.))[1].matrix()
        self.assertTrue(N.allclose(8 * a, b))
        self.assertRaises(DatasetError, spec.replace, scale=0.)
        self.assertRaises(DatasetError, spec.replace, novel_lookalike=1.5)


class LongTest(testing.AutoTest):
    """Test the default synthetic fixture"""

    TAGS = [ testing.LONG ]

    def prepare(self):
        from increlearn import softmax as S
        self.train, self.valid, self.truth = generate(SynthSpec(seed=1))
        self.model, trace = S.train(S.SoftmaxModel.zeros(self.train.class_set,
                                                         32), self.train,
                                    S.TrainConfig(seed=U.derive_seed(1, 1)))

    def test_generate_default(self):
        """datasets.generate default spec accuracy bounds"""
        from increlearn import softmax as S
        self.assertEqual(list(self.train.classCounts()), [1000] * 4)
        self.assertEqual(len(self.truth.novel), 4 * 120)
        self.assertEqual(len(self.truth.lookalike), 4 * 18)

        novel = self.truth.novelMask(self.valid)
        P = S.predict_batch(self.model, self.valid.matrix())
        correct = N.argmax(P, axis=1) == self.valid.true_labels()
        self.assertTrue(correct[~novel].mean() >= 0.95)
        self.assertTrue(correct[novel].mean() <= 0.75)

    def test_novel_uncertain(self):
        """novel points of the default fixture are uncertain, main ones not"""
        from increlearn import acquisition as A
        known, uncertain = A.split_by_confidence(self.valid, self.model,
                                                 A.AcquisitionConfig(0.9))
        novel = self.truth.novel
        self.assertTrue(len(set(uncertain.ids()) & novel) >= 0.9 * len(novel))
        self.assertTrue(len(set(uncertain.ids()) - novel) <= 0.02 * len(known))

    def test_labeler_lookalikes(self):
        """the anchor labeler names the confuser class for look-alikes"""
        from increlearn import labeler as L
        cfg = L.LabelerConfig()
        anchors = L.build_anchors(L.FeatureSpace.fromDataset(self.train), cfg)

        novel = self.truth.novelMask(self.valid)
        alike = self.truth.lookalikeMask(self.valid)
        labels, conf = L.pseudo_label_batch(self.valid.matrix(), anchors, cfg)
        y = self.valid.true_labels()
        confuser = (y + 1) % 4

        self.assertTrue(N.mean(labels[novel & ~alike] == y[novel & ~alike])
                        >= 0.95)
        self.assertTrue(N.mean(labels[alike] == confuser[alike]) >= 0.95)

    def test_no_novel_clusters(self):
        """without novel clusters almost nothing is uncertain"""
        from increlearn import softmax as S
        from increlearn import acquisition as A
        spec = SynthSpec(seed=1, novel_clusters=0)
        train, valid, truth = generate(spec)
        model, trace = S.train(S.SoftmaxModel.zeros(train.class_set, 32),
                               train, S.TrainConfig(seed=U.derive_seed(1, 1)))
        known, uncertain = A.split_by_confidence(valid, model,
                                                 A.AcquisitionConfig(0.9))
        self.assertEqual(truth.novel, set())
        self.assertTrue(len(uncertain) <= 0.02 * len(valid))


if __name__ == '__main__':

    testing.localTest()
