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
Softmax linear classifier (the classification head M_q).

The model maps a feature vector x to class probabilities
softmax(W x + b). It is trained by mini-batch SGD with momentum on the
mean cross-entropy loss and early stopping on a held-out split.

    >>> m = SoftmaxModel.zeros(ClassSet(['a','b','c','d']), dim=32)
    >>> forward(m, x).confidence
        0.25
    >>> m2, trace = train(m, dataset, TrainConfig(seed=1))
"""
import logging

import numpy as N

from increlearn.samples import ClassSet, Dataset
from increlearn.featurefile import SnapshotWriter, SnapshotReader, \
     FeatureFileError

#: lower bound for probabilities inside the log of the loss
PROB_CLAMP = 1e-12

class ModelError(Exception):
    pass

class DimensionError(ModelError, ValueError):
    pass


class TrainConfig(object):
    """
    Hyper-parameters of `train`. Defaults follow the research protocol
    (batch 128, learning rate 0.0005, momentum 0.9, at most 100 epochs);
    patience, warm-up and validation fraction are our own choice.

    Epochs before `warmup_epochs` are never early stopping candidates, so a
    fine-tune runs at least min(warmup_epochs, max_epochs) epochs even when
    the validation loss rises from the start. With no warm-up the initial
    weights compete as epoch 0.
    """

    def __init__(self, batch_size=128, learning_rate=0.0005, momentum=0.9,
                 max_epochs=100, early_stop_patience=5, val_fraction=0.1,
                 seed=0, warmup_epochs=40):
        self.batch_size = int(batch_size)
        self.learning_rate = float(learning_rate)
        self.momentum = float(momentum)
        self.max_epochs = int(max_epochs)
        self.early_stop_patience = int(early_stop_patience)
        self.warmup_epochs = int(warmup_epochs)
        self.val_fraction = float(val_fraction)
        self.seed = int(seed)

        if self.batch_size < 1:
            raise ModelError('batch_size must be positive')
        if not self.learning_rate > 0:
            raise ModelError('learning_rate must be positive')
        if not 0 <= self.momentum < 1:
            raise ModelError('momentum must be in [0, 1)')
        if self.max_epochs < 0:
            raise ModelError('max_epochs must not be negative')
        if self.early_stop_patience < 1:
            raise ModelError('early_stop_patience must be positive')
        if self.warmup_epochs < 0:
            raise ModelError('warmup_epochs must not be negative')
        if not 0 < self.val_fraction < 1:
            raise ModelError('val_fraction must be in (0, 1)')
        if not 0 <= self.seed < 2**64:
            raise ModelError('seed must be a 64 bit unsigned integer')

    def replace(self, **kwargs):
        """-> TrainConfig, copy with some fields replaced"""
        d = self.asdict()
        d.update(kwargs)
        return TrainConfig(**d)

    def asdict(self):
        return dict(self.__dict__)

    def __eq__(self, o):
        return isinstance(o, TrainConfig) and self.__dict__ == o.__dict__

    def __repr__(self):
        return 'TrainConfig(%s)' % ', '.join('%s=%r' % kv for kv in
                                             sorted(self.__dict__.items()))


class SoftmaxModel(object):
    """
    Immutable weight matrix (N x D), bias (N) and update counter q.

    *Properties:*

        * `weights` - read-only N x D array
        * `bias` - read-only array of length N
        * `version` - int, number of committed incremental updates (q)
        * `class_set` - the `ClassSet` indexing the rows
        * `N`, `D` - number of classes and feature dimension
    """

    def __init__(self, weights, bias, class_set, version=0):
        w = N.array(weights, dtype=float)
        b = N.array(bias, dtype=float)

        if w.ndim != 2 or b.shape != (w.shape[0],):
            raise ModelError('Incompatible shapes: weights %r, bias %r'
                             % (w.shape, b.shape))
        if w.shape[0] != class_set.N:
            raise ModelError('%i weight rows for %i classes' %
                             (w.shape[0], class_set.N))
        if not (N.all(N.isfinite(w)) and N.all(N.isfinite(b))):
            raise ModelError('Non-finite model parameters')
        if int(version) < 0:
            raise ModelError('Negative model version')

        w.flags.writeable = False
        b.flags.writeable = False
        self._w, self._b = w, b
        self._classes = class_set
        self._version = int(version)

    @classmethod
    def zeros(cls, class_set, dim):
        """-> SoftmaxModel, fresh model with zero weights and bias"""
        return cls(N.zeros((class_set.N, dim)), N.zeros(class_set.N),
                   class_set, 0)

    @property
    def weights(self):
        return self._w

    @property
    def bias(self):
        return self._b

    @property
    def version(self):
        return self._version

    @property
    def class_set(self):
        return self._classes

    @property
    def N(self):
        return self._w.shape[0]

    @property
    def D(self):
        return self._w.shape[1]

    def withVersion(self, version):
        """-> SoftmaxModel, same parameters with another version"""
        return SoftmaxModel(self._w, self._b, self._classes, version)

    def __eq__(self, o):
        return isinstance(o, SoftmaxModel) and self._version == o._version \
               and self._classes == o._classes \
               and N.array_equal(self._w, o._w) and N.array_equal(self._b, o._b)

    def __repr__(self):
        return '<SoftmaxModel q=%i N=%i D=%i>' % (self._version, self.N, self.D)

    def save(self, fname):
        """
        Write model snapshot: header with N, D, q and class names, then one
        row of weights per class, then the bias row.
        """
        with SnapshotWriter(fname, 'model', self._classes, self.D,
                            q=self._version) as w:
            for row in self._w:
                w.floats(row)
            w.floats(self._b)

    @classmethod
    def load(cls, fname):
        """
        Read model snapshot written by `save`.

        Returns:
            SoftmaxModel
        Raises:
            FeatureFileError: if the file is malformed
        """
        r = SnapshotReader(fname, 'model', required=['q'])
        rows = list(r.rows())
        if len(rows) != r.N + 1:
            raise FeatureFileError('Expected %i rows, found %i' %
                                   (r.N + 1, len(rows)), r.fname,
                                   rows[-1][0] if rows else 2)
        w = [ r.floats(tokens, lineno) for lineno, tokens in rows[:-1] ]
        b = r.floats(rows[-1][1], rows[-1][0], dim=r.N)
        return cls(N.array(w).reshape(r.N, r.D), b, r.class_set,
                   r.fields['q'])


class Prediction(object):
    """
    Class probabilities for a single feature vector.

    *Properties:*

        * `probs` - array of N probabilities summing to 1
        * `best_class` - int, index of the largest probability (ties go to
          the lowest index)
        * `confidence` - float, the largest probability
    """

    def __init__(self, probs):
        self._p = N.array(probs, dtype=float)
        self._p.flags.writeable = False
        self._best = int(N.argmax(self._p))

    @property
    def probs(self):
        return self._p

    @property
    def best_class(self):
        return self._best

    @property
    def confidence(self):
        return float(self._p[self._best])

    def __repr__(self):
        return '<Prediction class %i, confidence %.3f>' % (self._best,
                                                          self.confidence)


class TrainTrace(object):
    """
    Record of a `train` call. Index 0 of the loss lists refers to the
    initial weights, index i to the weights after epoch i.
    """

    def __init__(self, n_train=0, n_val=0):
        self.n_train = n_train
        self.n_val = n_val
        self.train_loss = []
        self.val_loss = []
        self.best_epoch = 0
        self.stopped_early = False
        self.warnings = []

    @property
    def epochs(self):
        """number of completed training epochs"""
        return max(0, len(self.train_loss) - 1)

    @property
    def best_val_loss(self):
        return self.val_loss[self.best_epoch] if self.val_loss else None

    def warn(self, msg):
        logging.warning(msg)
        self.warnings += [ msg ]

    def __repr__(self):
        return '<TrainTrace %i epochs, best epoch %i, val loss %r>' % \
               (self.epochs, self.best_epoch, self.best_val_loss)


def _check_dim(model, X):
    if X.shape[-1] != model.D:
        raise DimensionError('Feature dimension %i does not match model '
                             'dimension %i' % (X.shape[-1], model.D))


def _softmax(Z):
    """row-wise softmax with max-subtraction"""
    Z = Z - Z.max(axis=1, keepdims=True)
    E = N.exp(Z)
    return E / E.sum(axis=1, keepdims=True)


def _probs(W, b, X):
    return _softmax(X @ W.T + b)


def _loss(W, b, X, y):
    P = _probs(W, b, X)
    p = P[N.arange(len(y)), y]
    return float(-N.mean(N.log(N.maximum(p, PROB_CLAMP))))


def _grad(W, b, X, y):
    G = _probs(W, b, X)
    G[N.arange(len(y)), y] -= 1.
    G /= len(y)
    return G.T @ X, G.sum(axis=0)


def _asbatch(model, batch):
    """
    Convert batch input into feature matrix and label vector. Accepts a
    `Dataset`, a tuple of (matrix, labels) arrays or a list of
    (vector, label) pairs.
    """
    if isinstance(batch, Dataset):
        X, y = batch.matrix(), batch.labels()
    elif isinstance(batch, tuple) and len(batch) == 2 and \
         isinstance(batch[0], N.ndarray) and batch[0].ndim == 2:
        X, y = batch
    else:
        batch = list(batch)
        if not batch:
            raise ModelError('Empty batch')
        X = N.array([ x for x, l in batch ], dtype=float)
        y = [ l for x, l in batch ]

    X = N.asarray(X, dtype=float)
    y = N.asarray(y, dtype=int)

    if len(y) == 0:
        raise ModelError('Empty batch')
    if X.ndim != 2 or len(X) != len(y):
        raise ModelError('Batch needs one label per feature vector')
    _check_dim(model, X)
    if y.min() < 0 or y.max() >= model.N:
        raise ModelError('Labels outside [0, %i)' % model.N)
    return X, y


def predict_batch(model, X):
    """
    Args:
        model (SoftmaxModel): classifier
        X (numpy.ndarray): n x D feature matrix (or a single vector)
    Returns:
        numpy.ndarray: n x N matrix of class probabilities
    Raises:
        DimensionError: if the feature dimension does not match the model
    """
    X = N.atleast_2d(N.asarray(X, dtype=float))
    _check_dim(model, X)
    return _probs(model.weights, model.bias, X)


def forward(model, x):
    """
    Classify a single feature vector.

    Args:
        model (SoftmaxModel): classifier
        x (numpy.ndarray): feature vector of length D
    Returns:
        Prediction
    Raises:
        DimensionError: if len(x) != D
    """
    x = N.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError('Expected a single feature vector, got shape %r'
                             % (x.shape,))
    return Prediction(predict_batch(model, x)[0])


def cross_entropy_loss(model, batch):
    """
    Mean negative log-probability of the true labels; probabilities are
    clamped at `PROB_CLAMP`.

    Args:
        model (SoftmaxModel): classifier
        batch: list of (vector, label) pairs, (X, y) arrays or a `Dataset`
    Returns:
        float: loss >= 0
    Raises:
        ModelError: for an empty batch or invalid labels
    """
    X, y = _asbatch(model, batch)
    return _loss(model.weights, model.bias, X, y)


def gradient(model, batch):
    """
    Analytic gradient of `cross_entropy_loss` w.r.t. weights and bias.

    Returns:
        tuple: (dW, db), N x D matrix and N vector
    """
    X, y = _asbatch(model, batch)
    return _grad(model.weights, model.bias, X, y)


def split_validation(n, val_fraction, rng):
    """
    Seeded split of n positions into training and validation positions.
    Fewer than 2 positions are not split; both parts are then identical.

    Returns:
        tuple: (train positions, validation positions)
    """
    if n < 2:
        return N.arange(n), N.arange(n)
    perm = rng.permutation(n)
    nval = min(max(1, int(round(n * val_fraction))), n - 1)
    return N.sort(perm[nval:]), N.sort(perm[:nval])


def train(initial, data, cfg):
    """
    Train a model by mini-batch SGD with momentum, starting from the weights
    of `initial`. A seeded fraction of the data is held out for early
    stopping; the weights of the epoch with the lowest validation loss among
    the epochs from `cfg.warmup_epochs` on are returned. Without warm-up the
    initial weights count as epoch 0.

    Args:
        initial (SoftmaxModel): starting point (not modified)
        data (Dataset): labeled examples; pseudo labels take precedence
        cfg (TrainConfig): hyper-parameters
    Returns:
        tuple: (SoftmaxModel, TrainTrace); the model keeps the version of
        `initial`
    Raises:
        ModelError: if data is empty or lacks labels
        DimensionError: if data.dim does not match the model
    """
    if len(data) == 0:
        raise ModelError('Cannot train on an empty dataset')

    X, y = _asbatch(initial, (data.matrix(), data.labels()))
    rng = N.random.default_rng(cfg.seed)

    i_train, i_val = split_validation(len(y), cfg.val_fraction, rng)
    Xt, yt, Xv, yv = X[i_train], y[i_train], X[i_val], y[i_val]

    trace = TrainTrace(len(i_train), len(i_val))
    for n in sorted(set(range(initial.N)) - set(yt.tolist())):
        trace.warn('Class %s (%i) absent from training portion' %
                   (initial.class_set[n], n))

    W, b = initial.weights.copy(), initial.bias.copy()
    vW, vb = N.zeros_like(W), N.zeros_like(b)

    trace.train_loss += [ _loss(W, b, Xt, yt) ]
    trace.val_loss += [ _loss(W, b, Xv, yv) ]
    best = (W.copy(), b.copy())
    wait = 0
    warmup = min(cfg.warmup_epochs, cfg.max_epochs)

    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(len(yt))

        for start in range(0, len(order), cfg.batch_size):
            i = order[start : start + cfg.batch_size]
            gW, gb = _grad(W, b, Xt[i], yt[i])
            vW = cfg.momentum * vW + gW
            vb = cfg.momentum * vb + gb
            W -= cfg.learning_rate * vW
            b -= cfg.learning_rate * vb

        trace.train_loss += [ _loss(W, b, Xt, yt) ]
        trace.val_loss += [ _loss(W, b, Xv, yv) ]

        if epoch < warmup:
            continue

        if epoch == warmup or \
           trace.val_loss[-1] < trace.val_loss[trace.best_epoch]:
            trace.best_epoch = epoch
            best = (W.copy(), b.copy())
            wait = 0
        else:
            wait += 1
            if wait >= cfg.early_stop_patience:
                trace.stopped_early = True
                break

    logging.debug('trained %i epochs, best epoch %i, val loss %.5f' %
                  (trace.epochs, trace.best_epoch, trace.best_val_loss))

    return SoftmaxModel(best[0], best[1], initial.class_set,
                        initial.version), trace


######################
### Module testing ###
from increlearn import testing
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

@st.composite
def model_and_vector(draw):
    n = draw(st.integers(2, 6))
    d = draw(st.integers(1, 16))
    values = st.floats(-50, 50, allow_nan=False)
    W = draw(arrays(float, (n, d), elements=values))
    b = draw(arrays(float, (n,), elements=values))
    x = draw(arrays(float, (d,), elements=values))
    classes = ClassSet([ 'c%i' % i for i in range(n) ])
    return SoftmaxModel(W, b, classes), x


class Test(testing.AutoTest):
    """Test softmax"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        from increlearn.samples import Example
        self.classes = ClassSet(['a', 'b', 'c', 'd'])
        self.f_model = tempfile.mktemp(prefix='test_model_', suffix='.txt')

        ## two blobs 8 sigma apart
        rng = N.random.default_rng(11)
        X = N.vstack([ rng.normal((-2., 0.), 0.5, size=(100, 2)),
                       rng.normal((2., 0.), 0.5, size=(100, 2)) ])
        y = [0]*100 + [1]*100
        self.blobs = Dataset([ Example('p%03i' % i, x, l)
                               for i, (x, l) in enumerate(zip(X, y)) ],
                             ClassSet(['left', 'right']))

    def cleanUp(self):
        from increlearn import fileutil as F
        F.tryRemove(self.f_model)

    def _random_model(self, rng, n, d, scale=1.):
        classes = ClassSet([ "c%i" % i for i in range(n) ])
        return SoftmaxModel(scale * rng.normal(size=(n, d)),
                            scale * rng.normal(size=n),
                            classes)

    def test_forward_uniform(self):
        """softmax.forward zero model test"""
        m = SoftmaxModel.zeros(self.classes, 5)
        p = forward(m, N.arange(5.))
        self.assertTrue(N.allclose(p.probs, 0.25))
        self.assertEqual(p.confidence, 0.25)
        self.assertEqual(p.best_class, 0)

    def test_forward_onehot(self):
        """softmax.forward dominant class test"""
        x = N.array([0.3, -1.2, 0.8])
        W = N.zeros((4, 3))
        W[1] = 50 * x
        m = SoftmaxModel(W, N.zeros(4), self.classes)
        p = forward(m, x)

        z = [0., 50 * float(x @ x), 0., 0.]
        e = [ N.exp(v - z[1]) for v in z ]
        expected = [ v / sum(e) for v in e ]
        self.assertEqual(p.best_class, 1)
        self.assertTrue(N.allclose(p.probs, expected, rtol=1e-9, atol=1e-300))
        self.assertTrue(p.confidence > 0.999)

    def test_forward_dimension(self):
        m = SoftmaxModel.zeros(self.classes, 5)
        with self.assertRaises(DimensionError) as cm:
            forward(m, N.zeros(4))
        self.assertTrue('4' in str(cm.exception) and '5' in str(cm.exception))

    @given(model_and_vector())
    def test_forward_distribution(self, mx):
        """softmax.forward probability distribution property"""
        m, x = mx
        p = forward(m, x)
        self.assertTrue(N.all(p.probs >= 0))
        self.assertAlmostEqual(p.probs.sum(), 1., delta=1e-9)
        self.assertEqual(p.confidence, p.probs.max())
        self.assertEqual(p.best_class, int(N.flatnonzero(
            p.probs == p.probs.max())[0]))

    def test_forward_distribution_draws(self):
        """softmax.forward 10000 random calls"""
        rng = N.random.default_rng(5)
        for i in range(10000):
            n, d = rng.integers(2, 6), rng.integers(1, 17)
            m = self._random_model(rng, n, d)
            p = forward(m, rng.normal(scale=10, size=d)).probs
            self.assertTrue(N.all(p >= 0) and abs(p.sum() - 1.) <= 1e-9)

    def test_loss(self):
        """softmax.cross_entropy_loss test"""
        m = SoftmaxModel.zeros(self.classes, 3)
        batch = [ (N.array([1., 2., 3.]), 2), (N.array([0., 0., 1.]), 0) ]
        self.assertAlmostEqual(cross_entropy_loss(m, batch), N.log(4))

        W = N.zeros((4, 3)); W[2, 0] = 1000.
        confident = SoftmaxModel(W, N.zeros(4), self.classes)
        self.assertTrue(cross_entropy_loss(confident, batch[:1]) <= 1e-6)

        ## wrong and confident: clamped, finite
        wrong = cross_entropy_loss(confident, [(N.array([1., 0, 0]), 0)])
        self.assertAlmostEqual(wrong, -N.log(PROB_CLAMP))

        rng = N.random.default_rng(2)
        m = self._random_model(rng, 3, 4)
        batch = [ (rng.normal(size=4), int(rng.integers(3))) for i in range(6) ]
        expected = 0.
        for x, l in batch:
            z = [ float(m.weights[k] @ x + m.bias[k]) for k in range(3) ]
            expected -= z[l] - N.log(sum(N.exp(v) for v in z))
        self.assertAlmostEqual(cross_entropy_loss(m, batch), expected / 6,
                               places=12)

        self.assertRaises(ModelError, cross_entropy_loss, m, [])
        self.assertRaises(ModelError, cross_entropy_loss, m,
                          [(N.zeros(4), 3)])

    def test_gradient_uniform(self):
        """softmax.gradient single example test"""
        m = SoftmaxModel.zeros(self.classes, 2)
        dW, db = gradient(m, [(N.array([1., 2.]), 2)])
        self.assertTrue(N.allclose(db, [0.25, 0.25, -0.75, 0.25]))
        self.assertTrue(N.allclose(dW[:, 1], 2 * db))

    def test_gradient_mean_invariance(self):
        rng = N.random.default_rng(4)
        m = self._random_model(rng, 3, 5)
        batch = [ (rng.normal(size=5), int(rng.integers(3))) for i in range(7) ]
        dW1, db1 = gradient(m, batch)
        dW2, db2 = gradient(m, batch + batch)
        self.assertTrue(N.allclose(dW1, dW2, rtol=1e-13, atol=1e-15))
        self.assertTrue(N.allclose(db1, db2, rtol=1e-13, atol=1e-15))

    def test_gradient_finite_differences(self):
        """softmax.gradient vs central finite differences, 100 draws"""
        rng = N.random.default_rng(17)
        h = 1e-5
        self.errors = []

        for trial in range(100):
            n, d = int(rng.integers(2, 6)), int(rng.integers(1, 17))
            m = self._random_model(rng, n, d, scale=0.5)
            X = rng.normal(size=(int(rng.integers(2, 9)), d))
            y = rng.integers(n, size=len(X))
            dW, db = gradient(m, (X, y))

            W, b = m.weights.copy(), m.bias.copy()
            nW, nb = N.zeros_like(W), N.zeros_like(b)
            for idx in N.ndindex(*W.shape):
                Wp, Wm = W.copy(), W.copy()
                Wp[idx] += h; Wm[idx] -= h
                nW[idx] = (_loss(Wp, b, X, y) - _loss(Wm, b, X, y)) / (2*h)
            for k in range(n):
                bp, bm = b.copy(), b.copy()
                bp[k] += h; bm[k] -= h
                nb[k] = (_loss(W, bp, X, y) - _loss(W, bm, X, y)) / (2*h)

            a = N.concatenate([dW.ravel(), db])
            f = N.concatenate([nW.ravel(), nb])
            scale = max(N.abs(a).max(), N.abs(f).max(), 1e-8)
            self.errors += [ N.abs(a - f).max() / scale ]

        self.assertTrue(max(self.errors) < 1e-5, max(self.errors))

    def test_train_blobs(self):
        """softmax.train separable blobs test"""
        m0 = SoftmaxModel.zeros(self.blobs.class_set, 2)
        self.model, self.trace = train(m0, self.blobs, TrainConfig(seed=3))

        X, y = self.blobs.matrix(), self.blobs.labels()
        predicted = N.argmax(predict_batch(self.model, X), axis=1)
        self.assertTrue(N.mean(predicted == y) >= 0.99)

        ## nearest centroid oracle
        c = N.array([ X[y == k].mean(axis=0) for k in (0, 1) ])
        d = ((X[:, None, :] - c[None, :, :])**2).sum(axis=2)
        self.assertTrue(N.mean(predicted == N.argmin(d, axis=1)) >= 0.99)

        self.assertEqual(self.model.version, 0)
        self.assertEqual(len(self.trace.val_loss), self.trace.epochs + 1)
        self.assertEqual(self.trace.best_val_loss,
                         min(self.trace.val_loss[40:]))

    def test_train_determinism(self):
        m0 = SoftmaxModel.zeros(self.blobs.class_set, 2)
        cfg = TrainConfig(seed=7, max_epochs=20)
        m1, t1 = train(m0, self.blobs, cfg)
        m2, t2 = train(m0, self.blobs, cfg)
        self.assertEqual(m1, m2)
        self.assertEqual(t1.val_loss, t2.val_loss)

    def test_train_noop(self):
        m0 = SoftmaxModel.zeros(self.blobs.class_set, 2).withVersion(3)
        m, t = train(m0, self.blobs, TrainConfig(max_epochs=0))
        self.assertEqual(m, m0)
        self.assertEqual(t.epochs, 0)

    def test_train_missing_class(self):
        """softmax.train warns about absent classes"""
        data = self.blobs.subset(range(100))
        m0 = SoftmaxModel.zeros(data.class_set, 2)
        m, t = train(m0, data, TrainConfig(max_epochs=2))
        self.assertEqual(len(t.warnings), 1)
        self.assertTrue('right' in t.warnings[0])

    def test_train_never_worse(self):
        """softmax.train returns the argmin epoch"""
        m0 = SoftmaxModel.zeros(self.blobs.class_set, 2)
        cfg = TrainConfig(seed=1, learning_rate=5., max_epochs=30,
                          warmup_epochs=0)
        m, t = train(m0, self.blobs, cfg)
        self.assertEqual(t.best_val_loss, min(t.val_loss))

    def test_train_warmup(self):
        """softmax.train skips the warm-up epochs as candidates"""
        m0 = SoftmaxModel.zeros(self.blobs.class_set, 2)
        cfg = TrainConfig(seed=1, learning_rate=5., max_epochs=30,
                          warmup_epochs=12, early_stop_patience=1)
        m, t = train(m0, self.blobs, cfg)
        self.assertTrue(t.epochs >= 12)
        self.assertTrue(t.best_epoch >= 12)
        self.assertEqual(t.best_val_loss, min(t.val_loss[12:]))
        self.assertNotEqual(m, m0)

        m, t = train(m0, self.blobs, cfg.replace(max_epochs=5))
        self.assertEqual(t.epochs, 5)
        self.assertEqual(t.best_epoch, 5)

        self.assertRaises(ModelError, TrainConfig, warmup_epochs=-1)

    def test_snapshot(self):
        """SoftmaxModel.save / load bit-exact test"""
        rng = N.random.default_rng(8)
        m = SoftmaxModel(rng.normal(size=(4, 6)) / 3., rng.normal(size=4),
                         self.classes, version=12)
        m.save(self.f_model)
        self.assertEqual(SoftmaxModel.load(self.f_model), m)


if __name__ == '__main__':

    testing.localTest()
