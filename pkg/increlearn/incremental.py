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
Incremental learning engine.

Pseudo-labeled items are collected in a pending set S. Once S is full it is
padded with random examples of the current training set T_q up to Q
examples per class (partial rehearsal), a copy of the current model is
fine-tuned on this balanced set and the result is committed: T_q and the
feature space F_q grow by the items of S and the update counter q advances.

Per-update randomness is derived from (seed, q) so that a run resumed from
a checkpoint continues exactly like the uninterrupted run.
"""
import os
import logging
import threading

import numpy as N

from increlearn import util as U
from increlearn import fileutil as F
from increlearn import softmax as S
from increlearn import labeler as L
from increlearn import acquisition as A
from increlearn.samples import Example, Dataset, DatasetError
from increlearn.featurefile import SnapshotWriter, SnapshotReader, \
     FeatureFileError, save_features, load_features

class IncrementalError(Exception):
    pass

class BalanceError(IncrementalError):
    pass

class CommitError(IncrementalError):
    pass


class BalanceConfig(object):
    """Q examples per class after balancing; base seed of rehearsal draws"""

    def __init__(self, Q=100, seed=0):
        self.Q = int(Q)
        self.seed = int(seed)
        if self.Q < 1:
            raise BalanceError('Q must be positive, not %r' % Q)

    def forUpdate(self, q):
        """-> BalanceConfig with the seed used for the draws of update q"""
        return BalanceConfig(self.Q, U.derive_seed(self.seed, q))

    def asdict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return 'BalanceConfig(Q=%i, seed=%i)' % (self.Q, self.seed)


class PendingSet(object):
    """
    Immutable collection of pseudo-labeled examples with their normalized
    feature vectors, waiting for the next update. Duplicates are kept.
    """

    def __init__(self, capacity, items=()):
        self.capacity = int(capacity)
        if self.capacity < 1:
            raise IncrementalError('Pending set capacity must be positive')
        self.items = tuple(items)
        if len(self.items) > self.capacity:
            raise IncrementalError('%i items exceed capacity %i' %
                                   (len(self.items), self.capacity))
        for e, f in self.items:
            if e.pseudo_label is None:
                raise IncrementalError('Pending item %s has no pseudo label'
                                       % e.id)

    def __len__(self):
        return len(self.items)

    @property
    def ready(self):
        """True if the pending set has reached its capacity"""
        return len(self.items) == self.capacity

    def withItem(self, example, f):
        return PendingSet(self.capacity, self.items + ((example, f),))

    def empty(self):
        return PendingSet(self.capacity)

    def examples(self):
        return [ e for e, f in self.items ]

    def labels(self):
        return N.array([ e.pseudo_label for e, f in self.items ], dtype=int)

    def classCounts(self, nclasses):
        return N.bincount(self.labels(), minlength=nclasses)

    def noise(self):
        """
        Returns:
            float or None: fraction of items whose pseudo label differs
            from a known true label; None if no true label is known
        """
        known = [ e for e, f in self.items if e.true_label is not None ]
        if not known:
            return None
        return sum( e.pseudo_label != e.true_label for e in known ) / len(known)

    def __repr__(self):
        return '<PendingSet %i / %i>' % (len(self), self.capacity)


class SystemState(object):
    """
    Snapshot of the learning system after q updates: model M_q, training
    set T_q, feature space F_q and the pending set. Immutable; every
    operation of this module returns a new state.
    """

    def __init__(self, model, training_set, feature_space, pending):
        if model.version != feature_space.version:
            raise IncrementalError('Model version %i differs from feature '
                                   'space version %i' % (model.version,
                                                         feature_space.version))
        if model.class_set != training_set.class_set:
            raise IncrementalError('Model and training set classes differ')
        self.model = model
        self.training_set = training_set
        self.feature_space = feature_space
        self.pending = pending

    @classmethod
    def initial(cls, model, training_set, capacity):
        """
        Start state q = 0 from a trained base model and its training set.
        """
        return cls(model.withVersion(0), training_set,
                   L.FeatureSpace.fromDataset(training_set, 0),
                   PendingSet(capacity))

    @property
    def q(self):
        return self.model.version

    @property
    def ready(self):
        return self.pending.ready

    def __repr__(self):
        return '<SystemState q=%i, |T|=%i, |F|=%i, pending %i/%i>' % \
               (self.q, len(self.training_set), len(self.feature_space),
                len(self.pending), self.pending.capacity)

    def save(self, folder):
        """
        Write checkpoint folder `<folder>/q<q:04>/` with model.txt,
        space.txt, training.txt, pending.txt and state.cfg.

        Returns:
            str: checkpoint folder
        """
        target = os.path.join(folder, 'q%04i' % self.q)
        F.ensureFolder(target)

        self.model.save(os.path.join(target, 'model.txt'))
        self.feature_space.save(os.path.join(target, 'space.txt'))
        save_features(self.training_set, os.path.join(target, 'training.txt'))

        names = self.model.class_set.names
        with SnapshotWriter(os.path.join(target, 'pending.txt'), 'pending',
                            self.model.class_set, self.model.D, q=self.q,
                            capacity=self.pending.capacity) as w:
            for e, f in self.pending.items:
                truth = '' if e.true_label is None else names[e.true_label]
                w.floats(e.features, prefix=(e.id, names[e.pseudo_label],
                                             truth))

        U.dic2file({'q': self.q, 'capacity': self.pending.capacity,
                    'training': len(self.training_set),
                    'space': len(self.feature_space),
                    'pending': len(self.pending)},
                   os.path.join(target, 'state.cfg'),
                   header='increlearn checkpoint')
        return target

    @classmethod
    def load(cls, folder):
        """
        Read a checkpoint folder written by `save`.

        Raises:
            FeatureFileError: for malformed snapshot files
            IncrementalError: if the snapshot files are inconsistent
        """
        model = S.SoftmaxModel.load(os.path.join(folder, 'model.txt'))
        space = L.FeatureSpace.load(os.path.join(folder, 'space.txt'))
        training = load_features(os.path.join(folder, 'training.txt'))

        r = SnapshotReader(os.path.join(folder, 'pending.txt'), 'pending',
                           required=['q', 'capacity'])
        if r.fields['q'] != model.version:
            raise IncrementalError('Pending set of q=%i next to model q=%i' %
                                   (r.fields['q'], model.version))
        items = []
        for lineno, tokens in r.rows():
            if len(tokens) < 3:
                raise FeatureFileError('Expected id,pseudo,true,values',
                                       r.fname, lineno)
            e = Example(tokens[0], r.floats(tokens[3:], lineno),
                        true_label=r.label(tokens[2], lineno),
                        pseudo_label=r.label(tokens[1], lineno))
            items += [ (e, L.normalize(e.features)) ]

        return cls(model, training, space, PendingSet(r.fields['capacity'],
                                                      items))


class UpdateRecord(object):
    """
    Bookkeeping of one committed update.

    *Fields:*

        * `q` - version after the update
        * `n_training`, `n_space` - |T_q| and |F_q| after the update
        * `n_balanced` - size of the balanced fine-tuning set
        * `class_counts` - pseudo labels per class of the committed items
        * `noise` - pseudo label noise of the committed items (or None)
        * `epochs`, `best_val_loss` - fine-tuning summary
    """

    FIELDS = ['q', 'n_training', 'n_space', 'n_balanced', 'class_counts',
              'noise', 'epochs', 'best_val_loss']

    def __init__(self, **kwargs):
        for k in self.FIELDS:
            setattr(self, k, kwargs.get(k))

    def asdict(self):
        return { k : getattr(self, k) for k in self.FIELDS }

    def __repr__(self):
        return '<UpdateRecord q=%i |T|=%i noise=%r epochs=%i>' % \
               (self.q, self.n_training, self.noise, self.epochs)


def collect(state, item, label, f=None):
    """
    Add an acquired item with its pseudo label to the pending set.

    Args:
        state (SystemState): current state
        item (acquisition.AcquiredItem or Example): acquired input
        label (int): pseudo label
        f (numpy.ndarray): normalized feature vector [default: computed]
    Returns:
        SystemState: new state; `ready` is True once the pending set is full
    Raises:
        IncrementalError: if the pending set is already full
    """
    e = item.example if isinstance(item, A.AcquiredItem) else item
    if state.pending.ready:
        raise IncrementalError('Pending set is full; update before collecting')
    f = L.normalize(e.features) if f is None else f
    pending = state.pending.withItem(e.withPseudoLabel(int(label)), f)
    return SystemState(state.model, state.training_set, state.feature_space,
                       pending)


def _unique(examples, taken=()):
    """rename repeated IDs to ID#2, ID#3 .."""
    seen, r = set(taken), []
    for e in examples:
        if e.id in seen:
            k = 2
            while '%s#%i' % (e.id, k) in seen:
                k += 1
            e = e.withId('%s#%i' % (e.id, k))
        seen.add(e.id)
        r += [ e ]
    return r


def balance(pending, training_set, cfg):
    """
    Pad the pending set with random training examples to exactly cfg.Q
    examples per class. Draws are without replacement unless the class has
    fewer examples than needed. The result is ordered class by class with
    the pending items of a class first. Repeated IDs are renamed.

    Args:
        pending (PendingSet): pseudo-labeled items
        training_set (Dataset): current training set T_q
        cfg (BalanceConfig): Q and seed
    Returns:
        Dataset: N * Q examples
    Raises:
        BalanceError: if Q does not exceed the pending count of every class,
            or a class has no training examples
    """
    nclasses = training_set.class_set.N
    counts = pending.classCounts(nclasses) if len(pending) else \
             N.zeros(nclasses, dtype=int)

    n_max = int(N.argmax(counts))
    if cfg.Q <= counts[n_max]:
        raise BalanceError('Q=%i must exceed the %i pending items of class %s'
                           % (cfg.Q, counts[n_max],
                              training_set.class_set[n_max]))

    rng = N.random.default_rng(cfg.seed)
    labels = training_set.labels()
    items = pending.examples()
    r = []

    for n in range(nclasses):
        pool = training_set.classIndices(n, labels)
        if len(pool) == 0:
            raise BalanceError('Class %s has no examples in the training set'
                               % training_set.class_set[n])
        need = cfg.Q - counts[n]
        draw = rng.choice(pool, size=need, replace=len(pool) < need)
        r += [ e for e in items if e.pseudo_label == n ]
        r += [ training_set[i] for i in draw ]

    return Dataset(_unique(r), training_set.class_set, training_set.dim)


def fine_tune(model, balanced, cfg):
    """
    Train a copy of the model on the balanced set, starting from its
    weights with fresh momentum.

    Returns:
        tuple: (SoftmaxModel with version + 1, softmax.TrainTrace)
    Raises:
        ModelError: if the balanced set is empty or lacks labels
    """
    new, trace = S.train(model, balanced, cfg)
    return new.withVersion(model.version + 1), trace


def commit(state, new_model):
    """
    Replace M_q by M_q+1 and add the pending items to T_q and F_q. Pending
    IDs already present in T_q are stored as <id>#<q+1>.

    Args:
        state (SystemState): current state
        new_model (SoftmaxModel): fine-tuned model of version q + 1
    Returns:
        SystemState: state q + 1 with an empty pending set
    Raises:
        CommitError: if the model version is not q + 1
    """
    q = state.q + 1
    if new_model.version != q:
        raise CommitError('Cannot commit model version %i onto state q=%i' %
                          (new_model.version, state.q))

    taken = set(state.training_set.ids())
    added = []
    for e in state.pending.examples():
        if e.id in taken:
            e = e.withId('%s#%i' % (e.id, q))
        added += [ e ]
    added = _unique(added, taken)

    training = state.training_set.concat(
        Dataset(added, state.training_set.class_set, state.training_set.dim))
    space = L.extend(state.feature_space,
                     [ (f, e.pseudo_label) for e, f in state.pending.items ])

    return SystemState(new_model, training, space.withVersion(q),
                       state.pending.empty())


def update(state, balance_cfg, train_cfg):
    """
    balance, fine-tune and commit the pending set of a state. Rehearsal
    draws and fine-tuning use seeds derived from the configured seeds and q.

    Returns:
        tuple: (new SystemState, UpdateRecord)
    """
    q = state.q
    balanced = balance(state.pending, state.training_set,
                       balance_cfg.forUpdate(q))
    model, trace = fine_tune(state.model, balanced, train_cfg.replace(
        seed=U.derive_seed(train_cfg.seed, q)))

    nclasses = state.model.class_set.N
    record = UpdateRecord(
        q=q + 1, n_balanced=len(balanced),
        class_counts=state.pending.classCounts(nclasses).tolist()
                     if len(state.pending) else [0] * nclasses,
        noise=state.pending.noise(), epochs=trace.epochs,
        best_val_loss=trace.best_val_loss)

    state = commit(state, model)
    record.n_training = len(state.training_set)
    record.n_space = len(state.feature_space)

    logging.info('update q=%i: |T|=%i, balanced %i, %i epochs, noise %r' %
                 (record.q, record.n_training, record.n_balanced,
                  record.epochs, record.noise))
    return state, record


class _Labeling(object):
    """
    pseudo labels from anchors (rebuilt after each commit) or, with oracle,
    the labels carried by the examples
    """

    def __init__(self, cfg, oracle=False, anchors=None):
        self.cfg = cfg
        self.oracle = oracle
        self.anchors = anchors
        self.space = None

    def refresh(self, state):
        if self.oracle or self.space is state.feature_space:
            return
        self.anchors = L.build_anchors(state.feature_space, self.cfg,
                                       previous=self.anchors)
        self.space = state.feature_space

    def label(self, e):
        """-> (int label, normalized feature vector)"""
        f = L.normalize(e.features)
        if self.oracle:
            if e.label is None:
                raise IncrementalError('Oracle labeling needs a label for %s'
                                       % e.id)
            return e.label, f
        labels, conf = L.pseudo_label_batch(N.atleast_2d(e.features),
                                            self.anchors, self.cfg)
        return int(labels[0]), f


def _consume(state, examples, labeling, balance_cfg, train_cfg, monitor,
             acquisition=None):
    trace = []
    labeling.refresh(state)

    for e in examples:
        if acquisition is not None:
            pred = S.forward(state.model, e.features)
            item = A.acquire(pred, e, acquisition, state.q)
            if item is None:
                continue

        label, f = labeling.label(e)
        state = collect(state, e, label, f)

        if state.ready:
            state, record = update(state, balance_cfg, train_cfg)
            labeling.refresh(state)
            trace += [ record ]
            if monitor:
                monitor(state, record)

    return state, trace


def run_incremental(state, stream, acq_cfg, labeler_cfg, balance_cfg,
                    train_cfg, oracle=False, monitor=None, anchors=None):
    """
    Online loop: classify every input with the current model, acquire it if
    the confidence is below the threshold, pseudo-label it from the anchors
    of the current feature space, and update whenever the pending set is
    full. A partial pending set remains in the returned state.

    Args:
        state (SystemState): start state
        stream (iterable of Example): inputs
        acq_cfg (AcquisitionConfig): threshold t
        labeler_cfg (LabelerConfig): anchors and soft voting
        balance_cfg (BalanceConfig): Q and rehearsal seed
        train_cfg (TrainConfig): fine-tuning parameters and seed
        oracle (bool): use the labels of the examples (pseudo label if
            present, else true label) instead of the labeler
        monitor (callable): called as monitor(state, record) after every
            update
        anchors (AnchorSet): anchors of the start feature space, if
            already known
    Returns:
        tuple: (final SystemState, list of UpdateRecord)
    """
    return _consume(state, stream, _Labeling(labeler_cfg, oracle, anchors),
                    balance_cfg, train_cfg, monitor, acquisition=acq_cfg)


def run_acquired(state, items, labeler_cfg, balance_cfg, train_cfg,
                 oracle=False, monitor=None, anchors=None):
    """
    Like `run_incremental` for inputs that have already been acquired
    (e.g. the uncertain split of a validation set); items are not
    re-classified. floor(len(items) / capacity) updates are performed.

    Args:
        items (iterable of Example or AcquiredItem): acquired inputs
    Returns:
        tuple: (final SystemState, list of UpdateRecord)
    """
    examples = [ i.example if isinstance(i, A.AcquiredItem) else i
                 for i in items ]
    return _consume(state, examples, _Labeling(labeler_cfg, oracle, anchors),
                    balance_cfg, train_cfg, monitor)


class IncrementalSystem(object):
    """
    Thread-safe front end. `classify` may be called from any thread and
    always sees one complete model snapshot; `submit` serializes
    acquisition, labeling and updates under a lock.

        >>> system = IncrementalSystem(state, AcquisitionConfig(),
        ...                            LabelerConfig(), BalanceConfig(),
        ...                            TrainConfig())
        >>> system.submit(example)
    """

    def __init__(self, state, acq_cfg, labeler_cfg, balance_cfg, train_cfg,
                 oracle=False):
        self._state = state
        self._lock = threading.Lock()
        self.acq_cfg = acq_cfg
        self.balance_cfg = balance_cfg
        self.train_cfg = train_cfg
        self.records = []
        self._labeling = _Labeling(labeler_cfg, oracle)
        self._labeling.refresh(state)

    @property
    def state(self):
        return self._state

    def classify(self, x):
        """-> softmax.Prediction by the current model"""
        return S.forward(self._state.model, x)

    def submit(self, example):
        """
        Classify, acquire and possibly learn one input.

        Returns:
            acquisition.AcquiredItem or None: the item if it was acquired
        """
        with self._lock:
            state = self._state
            item = A.acquire(S.forward(state.model, example.features),
                             example, self.acq_cfg, state.q)
            if item is None:
                return None

            label, f = self._labeling.label(example)
            state = collect(state, example, label, f)
            if state.ready:
                state, record = update(state, self.balance_cfg,
                                       self.train_cfg)
                self._labeling.refresh(state)
                self.records += [ record ]
            self._state = state
            return item


######################
### Module testing ###
from increlearn import testing
from increlearn.samples import ClassSet

class Test(testing.AutoTest):
    """Test incremental"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        self.classes = ClassSet(['a', 'b', 'c', 'd'])
        rng = N.random.default_rng(3)
        centers = 3 * N.eye(4, 6)
        X = N.vstack([ c + rng.normal(scale=0.3, size=(30, 6))
                       for c in centers ])
        y = N.repeat(N.arange(4), 30)
        self.T = Dataset.fromArrays([ 't%03i' % i for i in range(120) ], X,
                                    self.classes, true_labels=y)
        self.model, trace = S.train(S.SoftmaxModel.zeros(self.classes, 6),
                                    self.T, S.TrainConfig(learning_rate=0.05,
                                                          seed=1))
        self.state = SystemState.initial(self.model, self.T, 5)
        self.new = [ Example('n%02i' % i, centers[i % 4] +
                             rng.normal(scale=0.3, size=6), i % 4)
                     for i in range(20) ]
        self.f_out = tempfile.mkdtemp(prefix='test_incremental_')

    def cleanUp(self):
        F.tryRemove(self.f_out, tree=True)

    def _pending(self, labels, capacity=10):
        p = PendingSet(capacity)
        for i, l in enumerate(labels):
            e = self.new[i].withPseudoLabel(l)
            p = p.withItem(e, L.normalize(e.features))
        return p

    def test_collect(self):
        """incremental.collect readiness"""
        s = self.state
        for i in range(4):
            s = collect(s, self.new[i], i)
            self.assertFalse(s.ready)
        s = collect(s, self.new[4], 0)
        self.assertTrue(s.ready)
        self.assertRaises(IncrementalError, collect, s, self.new[5], 0)

        s = SystemState.initial(self.model, self.T, 1)
        self.assertTrue(collect(s, self.new[0], 0).ready)

        s = collect(self.state, self.new[0], 0)
        s = collect(s, self.new[0], 0)
        self.assertEqual(len(s.pending), 2)

    def test_balance(self):
        """incremental.balance sizes and errors"""
        p = self._pending([0, 0, 0, 1, 1])
        r = balance(p, self.T, BalanceConfig(Q=10, seed=2))
        self.assertEqual(len(r), 40)
        self.assertEqual(list(r.classCounts()), [10] * 4)
        self.assertEqual(len([ i for i in r.ids() if i.startswith('n') ]), 5)
        self.assertEqual(r, balance(p, self.T, BalanceConfig(Q=10, seed=2)))

        r = balance(PendingSet(5), self.T, BalanceConfig(Q=10))
        self.assertEqual(list(r.classCounts()), [10] * 4)

        self.assertRaises(BalanceError, balance, p, self.T, BalanceConfig(Q=3))
        try:
            balance(p, self.T, BalanceConfig(Q=3))
        except BalanceError as why:
            self.assertTrue('class a' in str(why))

        small = self.T.subset(range(0, 120, 30))
        r = balance(PendingSet(5), small, BalanceConfig(Q=3))
        self.assertEqual(len(r), 12)
        self.assertEqual(len(set(r.ids())), 12)

        missing = self.T.subset(range(90))
        self.assertRaises(BalanceError, balance, p, missing,
                          BalanceConfig(Q=10))

    def test_fine_tune(self):
        """incremental.fine_tune versions"""
        r = balance(PendingSet(5), self.T, BalanceConfig(Q=10))
        m, trace = fine_tune(self.model, r, S.TrainConfig(max_epochs=0))
        self.assertEqual(m.version, 1)
        self.assertTrue(N.array_equal(m.weights, self.model.weights))
        self.assertEqual(self.model.version, 0)

        cfg = S.TrainConfig(learning_rate=0.05, seed=4)
        self.assertEqual(fine_tune(self.model, r, cfg)[0],
                         fine_tune(self.model, r, cfg)[0])

    def test_fine_tune_learns(self):
        """incremental.fine_tune takes new items in despite rehearsal loss"""
        rng = N.random.default_rng(6)
        x = N.array([1.5, 1.5, 0., 0., 4., 0.])
        new = [ Example('u%i' % i, x + rng.normal(scale=0.3, size=6), 2)
                for i in range(10) ]
        p = PendingSet(5)
        for e in new[:5]:
            p = p.withItem(e.withPseudoLabel(2), L.normalize(e.features))
        r = balance(p, self.T, BalanceConfig(Q=10, seed=1))

        m, trace = fine_tune(self.model, r,
                             S.TrainConfig(learning_rate=0.05, seed=2))
        self.assertTrue(trace.best_epoch >= 40)

        X = N.array([ e.features for e in new[5:] ])
        before, after = S.predict_batch(self.model, X), S.predict_batch(m, X)
        self.assertTrue(N.all(after[:, 2] > before[:, 2]))
        self.assertTrue(N.all(N.argmax(after, axis=1) == 2))

    def test_commit(self):
        """incremental.commit bookkeeping"""
        s = self.state
        for i in range(5):
            s = collect(s, self.new[i], i % 4)
        s1 = commit(s, self.model.withVersion(1))
        self.assertEqual(len(s1.training_set), 125)
        self.assertEqual(len(s1.feature_space), 125)
        self.assertEqual(len(s1.pending), 0)
        self.assertEqual((s1.q, s1.feature_space.version), (1, 1))
        index = s1.training_set.toExampleIndex()
        self.assertEqual(index['n00'].pseudo_label, 0)

        self.assertRaises(CommitError, commit, s, self.model.withVersion(2))

        s2 = commit(s1, self.model.withVersion(2))
        self.assertEqual(s2.q, 2)
        self.assertEqual(len(s2.training_set), 125)

        s = collect(s2, self.T[0], 1)
        s = collect(s, self.T[0], 1)
        s3 = commit(s, self.model.withVersion(3))
        self.assertTrue('t000#3' in s3.training_set)
        self.assertEqual(len(set(s3.training_set.ids())), 127)

    def test_update(self):
        s = self.state
        for i in range(5):
            s = collect(s, self.new[i], self.new[i].true_label)
        s, record = update(s, BalanceConfig(Q=10), S.TrainConfig(seed=1))
        self.assertEqual(record.q, 1)
        self.assertEqual(record.n_balanced, 40)
        self.assertEqual(record.noise, 0.)
        self.assertEqual(record.class_counts, [2, 1, 1, 1])

    def test_run_confident(self):
        """incremental.run_incremental without acquisitions"""
        acq = A.AcquisitionConfig(threshold=1e-6)
        s, trace = run_incremental(self.state, self.new, acq,
                                   L.LabelerConfig(M=3), BalanceConfig(Q=10),
                                   S.TrainConfig())
        self.assertEqual(trace, [])
        self.assertEqual(s.q, 0)

    def test_run_acquired(self):
        """incremental.run_acquired update count and determinism"""
        seen = []
        args = (L.LabelerConfig(M=3), BalanceConfig(Q=10, seed=5),
                S.TrainConfig(learning_rate=0.05, seed=5))
        s, trace = run_acquired(self.state, self.new[:17], *args,
                                monitor=lambda st, r: seen.append(st.q))
        self.assertEqual(len(trace), 3)
        self.assertEqual(seen, [1, 2, 3])
        self.assertEqual(len(s.pending), 2)
        self.assertEqual(len(s.training_set), 135)

        s2, trace2 = run_acquired(self.state, self.new[:17], *args)
        self.assertEqual(s2.model, s.model)
        self.assertEqual([ r.asdict() for r in trace2 ],
                         [ r.asdict() for r in trace ])

        s3, trace3 = run_acquired(self.state, self.new[:17], *args,
                                  oracle=True)
        self.assertEqual([ r.noise for r in trace3 ], [0., 0., 0.])

    def test_resume(self):
        """incremental checkpoint resume reproduces the full run"""
        args = (L.LabelerConfig(M=3), BalanceConfig(Q=10, seed=5),
                S.TrainConfig(learning_rate=0.05, seed=5))
        full, trace = run_acquired(self.state, self.new, *args)

        half, t1 = run_acquired(self.state, self.new[:12], *args)
        folder = half.save(self.f_out)
        resumed = SystemState.load(folder)
        self.assertEqual(resumed.q, 2)
        self.assertEqual(len(resumed.pending), 2)
        self.assertEqual(resumed.feature_space, half.feature_space)
        self.assertEqual(resumed.training_set, half.training_set)

        rest, t2 = run_acquired(resumed, self.new[12:], *args)
        self.assertEqual(rest.model, full.model)
        self.assertEqual(rest.training_set.ids(), full.training_set.ids())

    def test_system(self):
        """incremental.IncrementalSystem serial use"""
        system = IncrementalSystem(self.state, A.AcquisitionConfig(1.0),
                                   L.LabelerConfig(M=3), BalanceConfig(Q=10),
                                   S.TrainConfig(learning_rate=0.05))
        self.assertEqual(system.classify(self.new[0].features).probs.shape,
                         (4,))
        for e in self.new[:10]:
            self.assertTrue(system.submit(e) is not None)
        self.assertEqual(system.state.q, 2)
        self.assertEqual(len(system.records), 2)

    def test_system_threads(self):
        """incremental.IncrementalSystem concurrent submit"""
        from concurrent.futures import ThreadPoolExecutor
        system = IncrementalSystem(self.state, A.AcquisitionConfig(1.0),
                                   L.LabelerConfig(M=3), BalanceConfig(Q=10),
                                   S.TrainConfig(learning_rate=0.05))
        with ThreadPoolExecutor(4) as pool:
            list(pool.map(system.submit, self.new))
        self.assertEqual(system.state.q, 4)
        self.assertEqual(len(system.state.training_set), 140)


if __name__ == '__main__':

    testing.localTest()
