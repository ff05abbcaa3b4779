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
Acquisition function: route low-confidence classifications into learning.

An input is acquired if and only if the confidence of its classification
(the largest class probability) is strictly below the threshold t.
"""
import numpy as N

from increlearn import softmax as S
from increlearn.samples import Dataset, Example

class AcquisitionError(Exception):
    pass


class AcquisitionConfig(object):
    """threshold t in (0, 1]; default 0.9"""

    def __init__(self, threshold=0.9):
        self.threshold = float(threshold)
        if not 0 < self.threshold <= 1:
            raise AcquisitionError('threshold must be in (0, 1], not %r'
                                   % threshold)

    def asdict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return 'AcquisitionConfig(threshold=%r)' % self.threshold


class AcquiredItem(object):
    """
    An example selected for learning together with its feature vector,
    classification confidence and the version q of the model that
    classified it. Immutable.
    """

    def __init__(self, example, confidence, model_version, predicted=None):
        assert isinstance(example, Example)
        self._example = example
        self._confidence = float(confidence)
        self._version = int(model_version)
        self._predicted = predicted

    @property
    def example(self):
        return self._example

    @property
    def features(self):
        return self._example.features

    @property
    def confidence(self):
        return self._confidence

    @property
    def model_version(self):
        return self._version

    @property
    def predicted(self):
        """class index predicted by the softmax head (or None)"""
        return self._predicted

    def __repr__(self):
        return '<AcquiredItem %s confidence %.3f q=%i>' % \
               (self._example.id, self._confidence, self._version)


def acquire(pred, item, cfg, model_version=0):
    """
    Acquisition function.

    Args:
        pred (softmax.Prediction): classification of item
        item (Example): the classified example
        cfg (AcquisitionConfig): threshold
        model_version (int): version q of the classifying model
    Returns:
        AcquiredItem or None: an item if pred.confidence < threshold
    """
    if pred.confidence < cfg.threshold:
        return AcquiredItem(item, pred.confidence, model_version,
                            pred.best_class)
    return None


def uncertain_mask(model, data, cfg):
    """
    Returns:
        numpy.ndarray: bool array, True for examples classified with a
        confidence below the threshold
    Raises:
        softmax.DimensionError: if dimensions do not match
    """
    if len(data) == 0:
        return N.zeros(0, dtype=bool)
    if data.dim != model.D:
        raise S.DimensionError('Dataset dimension %i does not match model '
                               'dimension %i' % (data.dim, model.D))
    P = S.predict_batch(model, data.matrix())
    return P.max(axis=1) < cfg.threshold


def split_by_confidence(data, model, cfg):
    """
    Partition a dataset into examples classified with confidence >= t
    (kept) and below t (uncertain). Order within each part is preserved.

    Args:
        data (Dataset): examples to classify
        model (softmax.SoftmaxModel): current classifier
        cfg (AcquisitionConfig): threshold
    Returns:
        tuple: (kept Dataset, uncertain Dataset)
    """
    mask = uncertain_mask(model, data, cfg)
    return data.subset(N.flatnonzero(~mask)), data.subset(N.flatnonzero(mask))


######################
### Module testing ###
from increlearn import testing
from hypothesis import given, strategies as st

class Test(testing.AutoTest):
    """Test acquisition"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        from increlearn.samples import ClassSet
        rng = N.random.default_rng(9)
        self.classes = ClassSet(['a', 'b', 'c', 'd'])
        self.data = Dataset.fromArrays([ 'x%i' % i for i in range(40) ],
                                       rng.normal(size=(40, 3)), self.classes)
        self.model = S.SoftmaxModel(rng.normal(size=(4, 3)) * 2.,
                                    rng.normal(size=4), self.classes)
        self.example = self.data[0]

    def _pred(self, confidence):
        p = [confidence] + [ (1 - confidence) / 3 ] * 3
        return S.Prediction(p)

    def test_acquire(self):
        """acquisition.acquire boundary test"""
        cfg = AcquisitionConfig(0.9)
        r = acquire(self._pred(0.85), self.example, cfg, model_version=2)
        self.assertEqual(r.confidence, 0.85)
        self.assertEqual(r.model_version, 2)
        self.assertEqual(r.predicted, 0)
        self.assertTrue(r.features is self.example.features)

        self.assertEqual(acquire(self._pred(0.9), self.example, cfg), None)
        self.assertTrue(acquire(self._pred(0.99), self.example,
                                AcquisitionConfig(1.0)) is not None)

    def test_config(self):
        self.assertRaises(AcquisitionError, AcquisitionConfig, 0.)
        self.assertRaises(AcquisitionError, AcquisitionConfig, 1.1)

    def test_split_uniform(self):
        m = S.SoftmaxModel.zeros(self.classes, 3)
        kept, uncertain = split_by_confidence(self.data, m,
                                              AcquisitionConfig(0.9))
        self.assertEqual(len(kept), 0)
        self.assertEqual(uncertain, self.data)

        kept, uncertain = split_by_confidence(self.data, m,
                                              AcquisitionConfig(1e-9))
        self.assertEqual(kept, self.data)

    @given(st.floats(0.01, 1.0), st.floats(0.01, 1.0))
    def test_split_partition(self, t1, t2):
        """acquisition.split_by_confidence partition and monotonicity"""
        t1, t2 = min(t1, t2), max(t1, t2)
        kept, unc1 = split_by_confidence(self.data, self.model,
                                         AcquisitionConfig(t1))
        self.assertEqual(sorted(kept.ids() + unc1.ids()),
                         sorted(self.data.ids()))
        self.assertFalse(set(kept.ids()) & set(unc1.ids()))

        unc2 = split_by_confidence(self.data, self.model,
                                   AcquisitionConfig(t2))[1]
        self.assertTrue(set(unc1.ids()) <= set(unc2.ids()))

    def test_dimension(self):
        m = S.SoftmaxModel.zeros(self.classes, 4)
        self.assertRaises(S.DimensionError, split_by_confidence, self.data, m,
                          AcquisitionConfig())


if __name__ == '__main__':

    testing.localTest()
