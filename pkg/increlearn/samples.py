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
Class sets, labeled feature vectors (examples) and datasets.
"""
from collections.abc import Sequence

import numpy as N

import increlearn.util as U

class DatasetError(Exception):
    pass


def normalize_example_id(ids):
    """
    Normalizes input ID or (ID, sub-ID) tuple to a single 'ID' or 'ID#subID'
    string. int or float IDs are converted to str (1.0 -> '1').

    Args:
        ids (float | int | str or tuple thereof): input ID[,subID]

    Returns:
        str: 'ID' or 'ID#subID'
    Raises:
        DatasetError: if an ID contains ',' or a line break
    """
    if type(ids) not in [tuple, list]:
        ids = (ids,)

    ids = [str(U.intfloat2int(x)).strip() for x in ids]
    ids = [ x for x in ids if x ]  ## filter out empty strings but not '0'

    for x in ids:
        if ',' in x or '\n' in x or '\r' in x:
            raise DatasetError('Invalid example ID %r' % x)

    return '#'.join(ids)


class ClassSet(object):
    """
    Ordered, immutable set of N class names. The position of a name is its
    class index, which stays stable for the lifetime of a run.

        >>> c = ClassSet(['cat', 'dog', 'car'])
        >>> c.N
            3
        >>> c.index('dog')
            1
        >>> c[2]
            'car'
    """

    def __init__(self, names):
        """
        Args:
            names (list of str): at least two unique class names; names must
                not contain ',' or white space at the ends
        Raises:
            DatasetError: if there are fewer than 2 or duplicate names
        """
        names = tuple( str(n).strip() for n in names )

        if len(names) < 2:
            raise DatasetError('A class set needs at least 2 classes, got %r'
                               % (names,))
        if len(set(names)) != len(names):
            raise DatasetError('Duplicate class names in %r' % (names,))

        for n in names:
            if not n or ',' in n or '\n' in n:
                raise DatasetError('Invalid class name %r' % n)

        self._names = names
        self._index = { n : i for i, n in enumerate(names) }

    @property
    def names(self):
        """tuple of str, class names in index order"""
        return self._names

    @property
    def N(self):
        """number of classes"""
        return len(self._names)

    def index(self, name):
        """
        Returns:
            int: class index of given class name
        Raises:
            KeyError: if the class name is unknown
        """
        return self._index[ str(name).strip() ]

    def __contains__(self, name):
        return name in self._index

    def __getitem__(self, i):
        return self._names[i]

    def __len__(self):
        return len(self._names)

    def __iter__(self):
        return iter(self._names)

    def __eq__(self, o):
        return isinstance(o, ClassSet) and self._names == o._names

    def __hash__(self):
        return hash(self._names)

    def __repr__(self):
        return '<ClassSet %s>' % ', '.join(self._names)


class Example(object):
    """
    A single feature vector with optional ground truth and pseudo label.

    Example is immutable. The feature vector is stored as a read-only
    float64 array. `label` gives the label used for training: the pseudo
    label if present, else the true label.

    *Properties:*

        * `id` - str, unique within a dataset; 'ID#subID' marks a re-added
          copy of an existing ID
        * `features` - read-only numpy array of length D
        * `true_label` - int or None, ground truth (used by the harness)
        * `pseudo_label` - int or None, automatically assigned label
        * `label` - int or None, pseudo_label if given, otherwise true_label
    """

    def __init__(self, id, features, true_label=None, pseudo_label=None):
        self._id = normalize_example_id(id)
        if not self._id:
            raise DatasetError('Example without ID')

        f = N.array(features, dtype=float)
        if f.ndim != 1:
            raise DatasetError('Features of %s must be a 1-D vector, not %r'
                               % (self._id, f.shape))
        if not N.all(N.isfinite(f)):
            raise DatasetError('Non-finite feature value in example %s'
                               % self._id)
        f.flags.writeable = False
        self._features = f

        self._true = None if true_label is None else int(true_label)
        self._pseudo = None if pseudo_label is None else int(pseudo_label)

    @property
    def id(self):
        return self._id

    @property
    def features(self):
        return self._features

    @property
    def dim(self):
        return len(self._features)

    @property
    def true_label(self):
        return self._true

    @property
    def pseudo_label(self):
        return self._pseudo

    @property
    def label(self):
        """pseudo label if present, else true label, else None"""
        return self._true if self._pseudo is None else self._pseudo

    def withPseudoLabel(self, label):
        """
        Returns:
            Example: copy of this example carrying the given pseudo label
        """
        return Example(self._id, self._features, self._true, label)

    def withId(self, id):
        """
        Returns:
            Example: copy of this example with a new ID
        """
        return Example(id, self._features, self._true, self._pseudo)

    def __repr__(self):
        return '<Example %s {dim: %i, true: %r, pseudo: %r}>' % \
               (self._id, self.dim, self._true, self._pseudo)

    def __eq__(self, o):
        if not isinstance(o, Example):
            return False
        return self._id == o._id and self._true == o._true \
               and self._pseudo == o._pseudo \
               and N.array_equal(self._features, o._features)

    def __hash__(self):
        return hash((self._id, self._true, self._pseudo))


class Dataset(Sequence):
    """
    Immutable list of `Example` instances sharing one `ClassSet` and one
    feature dimension D. Implements the read-only list interface.

    The same class is used for every role in a run (training set T_q,
    validation set, known / uncertain splits, learn / test splits).

    *Usage:*

        >>> d = Dataset([Example('a', [1.,2.], 0), Example('b', [0.,1.], 1)],
        ...             ClassSet(['x','y']))
        >>> d.matrix().shape
            (2, 2)
        >>> d.labels()
            array([0, 1])
    """

    def __init__(self, examples, class_set, dim=None):
        """
        Args:
            examples (iterable of Example): dataset content
            class_set (ClassSet): shared classes
            dim (int): feature dimension; required if examples is empty

        Raises:
            DatasetError: if dimensions differ, IDs are not unique or a label
                is outside [0, N)
        """
        assert isinstance(class_set, ClassSet)

        self._list = list(examples)
        self._classes = class_set

        if dim is None:
            if not self._list:
                raise DatasetError('Empty dataset needs an explicit dimension')
            dim = self._list[0].dim
        self._dim = int(dim)

        ids = set()
        for e in self._list:
            if not isinstance(e, Example):
                raise DatasetError('%r is not an Example' % e)
            if e.dim != self._dim:
                raise DatasetError('Example %s has dimension %i, expected %i'
                                   % (e.id, e.dim, self._dim))
            if e.id in ids:
                raise DatasetError('Duplicate example ID %s' % e.id)
            ids.add(e.id)
            for l in (e.true_label, e.pseudo_label):
                if l is not None and not 0 <= l < class_set.N:
                    raise DatasetError('Label %i of %s outside [0, %i)'
                                       % (l, e.id, class_set.N))

        self._ids = ids
        self._matrix = None

    @classmethod
    def fromArrays(cls, ids, X, class_set, true_labels=None,
                   pseudo_labels=None):
        """
        Create dataset from parallel arrays.

        Args:
            ids (list of str): example IDs
            X (numpy.ndarray): n x D feature matrix
            class_set (ClassSet): classes
            true_labels (list of int or None): optional ground truth
            pseudo_labels (list of int or None): optional pseudo labels
        Returns:
            Dataset
        """
        X = N.asarray(X, dtype=float)
        n = len(ids)
        true_labels = [None]*n if true_labels is None else true_labels
        pseudo_labels = [None]*n if pseudo_labels is None else pseudo_labels

        r = [ Example(i, x, t, p) for i, x, t, p in
              zip(ids, X, true_labels, pseudo_labels) ]
        return cls(r, class_set, dim=X.shape[1] if X.ndim == 2 else None)

    @property
    def class_set(self):
        return self._classes

    @property
    def dim(self):
        return self._dim

    def __len__(self):
        return len(self._list)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Dataset(self._list[i], self._classes, self._dim)
        return self._list[i]

    def __contains__(self, o):
        if isinstance(o, str):
            return o in self._ids
        return o in self._list

    def __eq__(self, o):
        return isinstance(o, Dataset) and self._classes == o._classes \
               and self._dim == o._dim and self._list == o._list

    def __repr__(self):
        return '<Dataset %i examples, D=%i, classes %r>' % \
               (len(self), self._dim, self._classes.names)

    def ids(self):
        """-> list of str, example IDs in order"""
        return [ e.id for e in self._list ]

    def matrix(self):
        """
        Returns:
            numpy.ndarray: read-only n x D feature matrix (cached)
        """
        if self._matrix is None:
            m = N.zeros((len(self._list), self._dim))
            for i, e in enumerate(self._list):
                m[i] = e.features
            m.flags.writeable = False
            self._matrix = m
        return self._matrix

    def labels(self):
        """
        Training labels: pseudo label where present, else true label.

        Returns:
            numpy.ndarray: int array of length n
        Raises:
            DatasetError: if an example has no usable label
        """
        r = [ e.label for e in self._list ]
        missing = [ e.id for e in self._list if e.label is None ]
        if missing:
            raise DatasetError('%i examples without label, e.g. %s'
                               % (len(missing), missing[0]))
        return N.array(r, dtype=int)

    def true_labels(self):
        """
        Returns:
            numpy.ndarray: int array of ground truth labels
        Raises:
            DatasetError: if an example has no true label
        """
        missing = [ e.id for e in self._list if e.true_label is None ]
        if missing:
            raise DatasetError('%i examples without true label, e.g. %s'
                               % (len(missing), missing[0]))
        return N.array([ e.true_label for e in self._list ], dtype=int)

    def classCounts(self, labels=None):
        """
        Args:
            labels (numpy.ndarray): labels to count [default: `labels()`]
        Returns:
            numpy.ndarray: number of examples per class index
        """
        labels = self.labels() if labels is None else labels
        return N.bincount(N.asarray(labels, dtype=int),
                          minlength=self._classes.N)

    def classIndices(self, n, labels=None):
        """
        Returns:
            numpy.ndarray: positions of all examples with (training) label n
        """
        labels = self.labels() if labels is None else labels
        return N.flatnonzero(labels == n)

    def subset(self, indices):
        """
        Returns:
            Dataset: new dataset holding the examples at given positions
        """
        return Dataset([ self._list[i] for i in indices ], self._classes,
                       self._dim)

    def concat(self, other):
        """
        Returns:
            Dataset: examples of self followed by examples of other
        Raises:
            DatasetError: if classes or dimensions differ or IDs collide
        """
        if other.class_set != self._classes:
            raise DatasetError('Cannot join datasets with different classes')
        return Dataset(self._list + list(other), self._classes, self._dim)

    def toExampleIndex(self):
        """
        Returns:
            dict: {str : `Example`} examples indexed by ID
        """
        return { e.id : e for e in self._list }

    def withLabels(self, labels, pseudo=True):
        """
        Args:
            labels (list of int): one label per example
            pseudo (bool): set pseudo labels (True) or replace true labels
        Returns:
            Dataset: copy carrying the given labels
        """
        if len(labels) != len(self):
            raise DatasetError('%i labels given for %i examples'
                               % (len(labels), len(self)))
        if pseudo:
            r = [ e.withPseudoLabel(l) for e, l in zip(self._list, labels) ]
        else:
            r = [ Example(e.id, e.features, l, e.pseudo_label)
                  for e, l in zip(self._list, labels) ]
        return Dataset(r, self._classes, self._dim)


######################
### Module testing ###
from increlearn import testing

class Test(testing.AutoTest):
    """Test samples"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        self.classes = ClassSet(['cat', 'dog', 'car'])
        self.data = Dataset.fromArrays(['a', 'b', 'c', 'd'],
                                       N.arange(8.).reshape(4,2),
                                       self.classes, true_labels=[0,1,1,2])

    def test_normalize_example_id(self):
        self.assertEqual(normalize_example_id(('a', 2.0)), 'a#2')
        self.assertEqual(normalize_example_id(10.0), '10')
        self.assertEqual(normalize_example_id(('x', '')), 'x')
        self.assertRaises(DatasetError, normalize_example_id, 'a,b')
        self.assertRaises(DatasetError, normalize_example_id, ('a', 'b\nc'))
        self.assertRaises(DatasetError, Example, 'x,1', [1., 2.])

    def test_classSet(self):
        self.assertEqual(self.classes.N, 3)
        self.assertEqual(self.classes.index('dog'), 1)
        self.assertEqual(self.classes[2], 'car')
        self.assertEqual(self.classes, ClassSet(('cat', 'dog', 'car')))
        self.assertRaises(DatasetError, ClassSet, ['one'])
        self.assertRaises(DatasetError, ClassSet, ['a', 'b', 'a'])
        self.assertRaises(DatasetError, ClassSet, ['a', 'b,c'])

    def test_example(self):
        e = Example('x', [1., 2.], true_label=1)
        self.assertEqual(e.label, 1)
        e2 = e.withPseudoLabel(2)
        self.assertEqual((e2.true_label, e2.pseudo_label, e2.label), (1, 2, 2))
        self.assertEqual(e.pseudo_label, None)
        self.assertRaises(ValueError, e.features.__setitem__, 0, 5.)
        self.assertRaises(DatasetError, Example, 'y', [1., N.nan])

    def test_dataset(self):
        d = self.data
        self.assertEqual(len(d), 4)
        self.assertEqual(d.dim, 2)
        self.assertEqual(list(d.labels()), [0,1,1,2])
        self.assertEqual(list(d.classCounts()), [1,2,1])
        self.assertEqual(list(d.classIndices(1)), [1,2])
        self.assertTrue('c' in d)
        self.assertEqual(d.subset([3,0]).ids(), ['d', 'a'])
        self.assertEqual(d[1:3].ids(), ['b', 'c'])

        p = d.withLabels([2,2,2,2])
        self.assertEqual(list(p.labels()), [2,2,2,2])
        self.assertEqual(list(p.true_labels()), [0,1,1,2])

        self.assertRaises(DatasetError, d.concat, d)
        self.assertRaises(DatasetError, Dataset,
                          [Example('a', [1.]), Example('b', [1., 2.])],
                          self.classes)
        self.assertRaises(DatasetError, Dataset, [Example('a', [1.], 3)],
                          self.classes)

    def test_missing_labels(self):
        d = Dataset([Example('a', [1.])], self.classes)
        self.assertRaises(DatasetError, d.labels)
        self.assertRaises(DatasetError, d.true_labels)


if __name__ == '__main__':

    testing.localTest()
