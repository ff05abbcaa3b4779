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
"""Confusion matrices and counts for models and the feature-space labeler"""
import numpy as N
from sklearn.metrics import confusion_matrix

from increlearn import softmax as S
from increlearn import labeler as L
from increlearn.samples import DatasetError

class MetricsError(Exception):
    pass


class ConfusionMatrix(object):
    """
    N x N counts; rows are true classes, columns predicted classes.
    The accuracy of an empty matrix is 0.
    """

    def __init__(self, counts, class_set):
        self.counts = N.asarray(counts, dtype=int)
        self.class_set = class_set
        if self.counts.shape != (class_set.N, class_set.N):
            raise MetricsError('Expected %i x %i counts' % (class_set.N,
                                                            class_set.N))

    @classmethod
    def fromLabels(cls, y_true, y_pred, class_set):
        if len(y_true) == 0:
            return cls(N.zeros((class_set.N, class_set.N)), class_set)
        return cls(confusion_matrix(y_true, y_pred,
                                    labels=list(range(class_set.N))),
                   class_set)

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def accuracy(self):
        if self.total == 0:
            return 0.
        return float(N.trace(self.counts)) / self.total

    def recall(self):
        """-> numpy.ndarray, per class fraction of correct predictions"""
        rows = self.counts.sum(axis=1)
        return N.divide(N.diag(self.counts), rows, out=N.zeros(len(rows)),
                        where=rows > 0)

    def tolist(self):
        return self.counts.tolist()

    def __eq__(self, o):
        return isinstance(o, ConfusionMatrix) and \
               self.class_set == o.class_set and \
               N.array_equal(self.counts, o.counts)

    def __str__(self):
        width = max( len(n) for n in self.class_set.names ) + 1
        r = ' ' * width + ''.join('%8s' % n[:7] for n in self.class_set.names)
        for name, row in zip(self.class_set.names, self.counts):
            r += '\n' + name.ljust(width) + ''.join('%8i' % v for v in row)
        return r + '\naccuracy %.4f' % self.accuracy

    def __repr__(self):
        return '<ConfusionMatrix %i examples, accuracy %.4f>' % (self.total,
                                                                 self.accuracy)


def evaluate(model, data):
    """
    Args:
        model (SoftmaxModel): classifier
        data (Dataset): examples with true labels
    Returns:
        ConfusionMatrix: argmax predictions of the model
    Raises:
        DatasetError: if true labels are missing
    """
    y = data.true_labels()
    if len(data) == 0:
        return ConfusionMatrix.fromLabels([], [], data.class_set)
    P = S.predict_batch(model, data.matrix())
    return ConfusionMatrix.fromLabels(y, N.argmax(P, axis=1), data.class_set)


def evaluate_labeler(anchors, cfg, data):
    """
    Args:
        anchors (AnchorSet): per class anchors of a feature space
        cfg (LabelerConfig): soft voting parameters
        data (Dataset): examples with true labels
    Returns:
        ConfusionMatrix: pseudo labels of the feature-space labeler
    """
    y = data.true_labels()
    if len(data) == 0:
        return ConfusionMatrix.fromLabels([], [], data.class_set)
    labels, conf = L.pseudo_label_batch(data.matrix(), anchors, cfg)
    return ConfusionMatrix.fromLabels(y, labels, data.class_set)


def count_uncertain(model, data, t):
    """-> int, number of examples classified with a confidence below t"""
    if len(data) == 0:
        return 0
    return int((S.predict_batch(model, data.matrix()).max(axis=1) < t).sum())


def noise_rate(data):
    """
    Returns:
        float or None: fraction of examples whose training label differs
        from the true label; None for an empty dataset
    """
    if len(data) == 0:
        return None
    return float(N.mean(data.labels() != data.true_labels()))


######################
### Module testing ###
from increlearn import testing
from hypothesis import given, strategies as st
from increlearn.samples import ClassSet, Dataset

class Test(testing.AutoTest):
    """Test metrics"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        self.classes = ClassSet(['a', 'b', 'c', 'd'])
        X = N.repeat(N.eye(4), 5, axis=0)
        self.y = N.repeat(N.arange(4), 5)
        self.data = Dataset.fromArrays([ 'e%02i' % i for i in range(20) ], X,
                                       self.classes, true_labels=self.y)
        self.perfect = S.SoftmaxModel(10 * N.eye(4), N.zeros(4), self.classes)

    def test_perfect(self):
        """metrics.evaluate diagonal"""
        m = evaluate(self.perfect, self.data)
        self.assertTrue(N.array_equal(m.counts, 5 * N.eye(4)))
        self.assertEqual(m.accuracy, 1.)
        self.assertEqual(list(m.counts.sum(axis=1)), [5] * 4)

    def test_uniform(self):
        """metrics.evaluate ties go to class 0"""
        m = evaluate(S.SoftmaxModel.zeros(self.classes, 4), self.data)
        self.assertEqual(m.accuracy, 0.25)
        self.assertEqual(list(m.counts[:, 0]), [5] * 4)

    def test_hand_counted(self):
        """metrics.evaluate known mispredictions"""
        W = 10 * N.eye(4)
        W[1] = W[0]             ## class b never predicted over a
        W[3, 2] = 20            ## c examples go to d
        m = evaluate(S.SoftmaxModel(W, N.zeros(4), self.classes), self.data)
        expected = N.array([[5, 0, 0, 0],
                            [5, 0, 0, 0],
                            [0, 0, 0, 5],
                            [0, 0, 0, 5]])
        self.assertTrue(N.array_equal(m.counts, expected))
        self.assertEqual(m.accuracy, 0.5)
        self.assertTrue(N.array_equal(m.recall(), [1, 0, 0, 1]))

    @given(st.randoms(use_true_random=False))
    def test_permutation(self, random):
        """metrics.evaluate is invariant under permutation"""
        order = list(range(20))
        random.shuffle(order)
        model = S.SoftmaxModel(N.arange(16.).reshape(4, 4), N.ones(4),
                               self.classes)
        self.assertEqual(evaluate(model, self.data.subset(order)),
                         evaluate(model, self.data))

    def test_labeler(self):
        """metrics.evaluate_labeler with memorizing anchors"""
        cfg = L.LabelerConfig(M=5)
        space = L.FeatureSpace.fromDataset(self.data)
        m = evaluate_labeler(L.build_anchors(space, cfg), cfg, self.data)
        self.assertEqual(m.accuracy, 1.)

        one = self.data.subset(range(5))
        space = L.FeatureSpace.fromDataset(one)
        m = evaluate_labeler(L.build_anchors(space, cfg), cfg, one)
        self.assertEqual(m.accuracy, 1.)

    def test_count_uncertain(self):
        uniform = S.SoftmaxModel.zeros(self.classes, 4)
        self.assertEqual(count_uncertain(uniform, self.data, 0.), 0)
        self.assertEqual(count_uncertain(uniform, self.data, 0.9), 20)
        self.assertEqual(count_uncertain(self.perfect, self.data, 0.9), 0)

    def test_noise_rate(self):
        self.assertEqual(noise_rate(self.data), 0.)
        noisy = self.data.withLabels((self.y + 1) % 4)
        self.assertEqual(noise_rate(noisy), 1.)

    def test_empty(self):
        empty = self.data.subset([])
        self.assertEqual(evaluate(self.perfect, empty).accuracy, 0.)
        self.assertEqual(count_uncertain(self.perfect, empty, 0.9), 0)
        self.assertEqual(noise_rate(empty), None)


if __name__ == '__main__':

    testing.localTest()
