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
Text file formats for feature vectors, models and feature spaces.

All formats share the same layout::

    increlearn-<kind> v1, N=<n>, D=<d>[, key=<int> ...]
    <class name 0>,<class name 1>,...
    <comma separated rows>

Floats are written with ``repr`` which gives the shortest decimal string
that reads back to the identical double; files therefore round-trip bit by
bit. Feature files (kind ``features``) hold one row per example::

    id,label,v0,v1,...,v{D-1}

where label is a class name or empty for unlabeled examples. Files written
by `save_features` carry the header field ``pseudo=1`` and one more column
so that ground truth and pseudo label both survive a round trip::

    id,true label,pseudo label,v0,v1,...,v{D-1}
"""

__all__ = ['FeatureFileError', 'MalformedHeader', 'DimensionMismatch',
           'UnknownClass', 'NonFiniteValue', 'SnapshotWriter',
           'SnapshotReader', 'load_features', 'save_features']

import math

import numpy as N

from increlearn import fileutil as F
from increlearn.samples import ClassSet, Example, Dataset, DatasetError

#: format version written into every header
FORMAT_VERSION = 'v1'

class FeatureFileError( Exception ):
    """Parsing error carrying file name and (1-based) line number"""

    def __init__(self, msg, filename='', line=0):
        self.filename = filename
        self.line = line
        super().__init__('%s (file %s, line %i)' % (msg, filename, line))

class MalformedHeader( FeatureFileError ):
    pass

class DimensionMismatch( FeatureFileError ):
    pass

class UnknownClass( FeatureFileError ):
    pass

class NonFiniteValue( FeatureFileError ):
    pass

class DuplicateId( FeatureFileError ):
    pass


def format_floats(values):
    """
    Args:
        values (iterable of float): numbers to format
    Returns:
        str: comma separated, full precision
    """
    return ','.join( repr(float(v)) for v in values )


class SnapshotWriter(object):
    """
    Writer for all increlearn text snapshots. Use in a ``with`` statement::

        with SnapshotWriter('model.txt', 'model', classes, D, q=3) as w:
            w.row(['0.5', '1.5'])
            w.floats(bias)

    The header and class-name line are written on the first access to the
    file handle.
    """

    def __init__(self, fname, kind, class_set, dim, **fields):
        """
        Args:
            fname (str): output file (will be overwritten)
            kind (str): snapshot kind, e.g. 'features', 'model'
            class_set (ClassSet): classes of the snapshot
            dim (int): feature dimension D
            fields (int): additional integer header fields (e.g. q=2)
        """
        self.fname = F.absfile(fname)
        self.kind = kind
        self.class_set = class_set
        self.dim = dim
        self.fields = fields
        self._f = None

    def __str__(self):
        return 'Snapshot writer for %s' % self.fname

    def headerLine(self):
        r = 'increlearn-%s %s, N=%i, D=%i' % (self.kind, FORMAT_VERSION,
                                             self.class_set.N, self.dim)
        for key, value in self.fields.items():
            r += ', %s=%i' % (key, value)
        return r

    def _get_file(self):
        if not self._f:
            self._f = open(self.fname, mode='w')
            self._f.write(self.headerLine() + '\n')
            self._f.write(','.join(self.class_set.names) + '\n')
        return self._f

    f = property(_get_file, doc='file handle for writing; writes header')

    def close(self):
        if not self._f:
            self._get_file()   ## empty snapshots still get a header
        self._f.close()
        self._f = None

    def __enter__(self):
        return self

    def __exit__(self, type, value, traceback):
        self.close()

    def row(self, fields):
        """Write one comma separated row of str fields"""
        self.f.write(','.join(fields) + '\n')

    def floats(self, values, prefix=()):
        """Write a row of floats, optionally preceded by str fields"""
        line = format_floats(values)
        if prefix:
            line = ','.join(list(prefix) + [line]) if len(values) \
                   else ','.join(prefix)
        self.f.write(line + '\n')


class SnapshotReader(object):
    """
    Parse an increlearn text snapshot. The header and class-name line are
    consumed by the constructor; `rows` then iterates over the remaining
    lines as (line number, list of str fields).

        >>> r = SnapshotReader('model.txt', 'model', ['q'])
        >>> r.N, r.D, r.fields['q']
    """

    def __init__(self, fname, kind, required=()):
        """
        Args:
            fname (str): existing input file
            kind (str): expected snapshot kind
            required (list of str): integer header fields that must be present

        Raises:
            FileNotFoundError: if file does not exist
            MalformedHeader: if header or class line cannot be parsed
        """
        self.fname = F.existingFile(fname)
        self.kind = kind

        with open(self.fname) as f:
            self._lines = f.read().splitlines()

        self.fields = self._parseHeader(required)
        self.N = self.fields.pop('N')
        self.D = self.fields.pop('D')

        if len(self._lines) < 2:
            raise MalformedHeader('Missing class name line', self.fname, 2)
        try:
            self.class_set = ClassSet(self._lines[1].split(','))
        except DatasetError as why:
            raise MalformedHeader(str(why), self.fname, 2)

        if self.class_set.N != self.N:
            raise MalformedHeader('Header declares N=%i but %i class names '
                                  'are given' % (self.N, self.class_set.N),
                                  self.fname, 2)

    def _parseHeader(self, required):
        if not self._lines:
            raise MalformedHeader('Empty file', self.fname, 1)

        tokens = [ t.strip() for t in self._lines[0].split(',') ]
        magic = 'increlearn-%s %s' % (self.kind, FORMAT_VERSION)
        if tokens[0] != magic:
            raise MalformedHeader('Expected header %r, found %r' % 
                                  (magic, tokens[0]), self.fname, 1)
        r = {}
        for t in tokens[1:]:
            try:
                key, value = t.split('=')
                r[key.strip()] = int(value)
            except ValueError:
                raise MalformedHeader('Cannot parse header field %r' % t,
                                      self.fname, 1)

        for key in ['N', 'D'] + list(required):
            if key not in r:
                raise MalformedHeader('Header field %s missing' % key,
                                      self.fname, 1)
            if r[key] < 0:
                raise MalformedHeader('Negative header field %s' % key,
                                      self.fname, 1)
        return r

    def rows(self):
        """
        Yields:
            (int, list of str): 1-based line number and fields of each
            non-empty data line
        """
        for i, line in enumerate(self._lines[2:]):
            if line.strip():
                yield i + 3, line.split(',')

    def floats(self, tokens, lineno, dim=None):
        """
        Convert str fields into a float vector.

        Args:
            tokens (list of str): fields to convert
            lineno (int): line number for error reporting
            dim (int): expected length [default: D]
        Raises:
            DimensionMismatch: if the number of values is not dim
            NonFiniteValue: if a value is nan, inf or not a number
        """
        dim = self.D if dim is None else dim
        if len(tokens) != dim:
            raise DimensionMismatch('Expected %i values, found %i' %
                                    (dim, len(tokens)), self.fname, lineno)
        try:
            r = [ float(t) for t in tokens ]
        except ValueError as why:
            raise NonFiniteValue(str(why), self.fname, lineno)

        if not all( math.isfinite(v) for v in r ):
            raise NonFiniteValue('Non-finite value', self.fname, lineno)
        return N.array(r)

    def label(self, name, lineno):
        """
        Returns:
            int or None: class index of given class name; None for ''
        Raises:
            UnknownClass: if name is not part of the class set
        """
        name = name.strip()
        if not name:
            return None
        if name not in self.class_set:
            raise UnknownClass('Unknown class %r' % name, self.fname, lineno)
        return self.class_set.index(name)


def save_features(data, fname):
    """
    Write dataset to feature file with separate true and pseudo label
    columns (header field pseudo=1).

    Args:
        data (Dataset): dataset to write
        fname (str): output file name
    """
    names = data.class_set.names
    def name(label):
        return '' if label is None else names[label]

    with SnapshotWriter(fname, 'features', data.class_set, data.dim,
                        pseudo=1) as w:
        for e in data:
            w.floats(e.features, prefix=(e.id, name(e.true_label),
                                         name(e.pseudo_label)))


def load_features(fname):
    """
    Read feature file into a dataset. Without the pseudo=1 header field the
    single label column is read as true label.

    Args:
        fname (str): existing feature file
    Returns:
        Dataset
    Raises:
        FeatureFileError: (or sub-class) with file name and line number
    """
    r = SnapshotReader(fname, 'features')
    pseudo = bool(r.fields.get('pseudo'))
    first = 3 if pseudo else 2
    examples = []
    ids = set()

    for lineno, tokens in r.rows():
        if len(tokens) < first:
            raise DimensionMismatch('Expected id,label%s,values' %
                                    (',pseudo' if pseudo else ''),
                                    r.fname, lineno)
        _id = tokens[0].strip()
        if _id in ids:
            raise DuplicateId('Duplicate example ID %r' % _id, r.fname, lineno)
        ids.add(_id)

        examples += [ Example(_id, r.floats(tokens[first:], lineno),
                              true_label=r.label(tokens[1], lineno),
                              pseudo_label=r.label(tokens[2], lineno)
                              if pseudo else None) ]

    return Dataset(examples, r.class_set, r.D)


######################
### Module testing ###
from increlearn import testing

class Test(testing.AutoTest):
    """Test featurefile"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        self.f_out = tempfile.mktemp(prefix='test_features_', suffix='.txt')
        self.f_bad = tempfile.mktemp(prefix='test_badfeatures_', suffix='.txt')

    def cleanUp(self):
        F.tryRemove(self.f_out)
        F.tryRemove(self.f_bad)

    def _writebad(self, lines):
        with open(self.f_bad, 'w') as f:
            f.write('\n'.join(lines) + '\n')

    def test_loadFixture(self):
        """featurefile.load_features fixture test"""
        self.data = load_features(F.testRoot('three_rows.txt'))
        self.assertEqual(len(self.data), 3)
        self.assertEqual(self.data.ids(), ['img-001', 'img-002', 'img-003'])
        self.assertEqual(self.data.class_set.names, ('cat', 'dog', 'car'))
        self.assertEqual(self.data.dim, 4)
        self.assertEqual(self.data[2].true_label, None)
        self.assertEqual(self.data[1].true_label, 1)

    def test_roundtrip(self):
        """featurefile.save_features / load_features bit-exact test"""
        rng = N.random.default_rng(3)
        classes = ClassSet(['a', 'b'])
        X = rng.normal(size=(5, 7)) * 10.0**rng.integers(-30, 30, size=(5, 7))
        d = Dataset.fromArrays(['x%i' % i for i in range(5)], X, classes,
                               true_labels=[0, 1, 1, None, 0])
        save_features(d, self.f_out)
        r = load_features(self.f_out)
        self.assertEqual(r, d)
        self.assertTrue(N.array_equal(r.matrix(), X))

    def test_roundtrip_pseudo(self):
        """featurefile keeps true and pseudo label apart"""
        classes = ClassSet(['a', 'b', 'c'])
        d = Dataset([ Example('x0', [1., 2.], true_label=0, pseudo_label=1),
                      Example('x1', [3., 4.], pseudo_label=2),
                      Example('x2', [5., 6.], true_label=2),
                      Example('x3', [7., 8.]) ], classes)
        save_features(d, self.f_out)
        r = load_features(self.f_out)
        self.assertEqual(r, d)
        self.assertEqual((r[0].true_label, r[0].pseudo_label), (0, 1))
        self.assertEqual(r[1].true_label, None)

    def test_comma_id(self):
        """featurefile ids with a comma are rejected before writing"""
        classes = ClassSet(['a', 'b'])
        self.assertRaises(DatasetError, Dataset.fromArrays, ['img,1', 'img2'],
                          N.ones((2, 3)), classes, true_labels=[0, 1])

    def test_errors(self):
        """featurefile error reporting test"""
        self._writebad(['increlearn-features v1, N=2, D=3', 'a,b',
                        'x,a,1,2,3', 'y,b,1,2'])
        with self.assertRaises(DimensionMismatch) as cm:
            load_features(self.f_bad)
        self.assertEqual(cm.exception.line, 4)

        self._writebad(['increlearn-features v1, N=2, D=2', 'a,b',
                        'x,c,1,2'])
        self.assertRaises(UnknownClass, load_features, self.f_bad)

        self._writebad(['increlearn-features v1, N=2, D=2', 'a,b',
                        'x,a,1,nan'])
        self.assertRaises(NonFiniteValue, load_features, self.f_bad)

        self._writebad(['increlearn-featurez v1, N=2, D=2', 'a,b'])
        self.assertRaises(MalformedHeader, load_features, self.f_bad)

        self._writebad(['increlearn-features v1, N=3, D=2', 'a,b'])
        self.assertRaises(MalformedHeader, load_features, self.f_bad)

        self._writebad(['increlearn-features v1, N=2, D=1', 'a,b',
                        'x,a,1', 'x,b,2'])
        self.assertRaises(DuplicateId, load_features, self.f_bad)


if __name__ == '__main__':

    testing.localTest()
