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
Run configuration.

A run is configured by one key-value file (see `util.file2dic`)::

    # comment
    seed                    7
    data.train              train.txt
    train.learning_rate     0.0005
    sweep.s_values          5 20 35 50 65 80 95

Values are merged in the order built-in defaults, configuration file,
command line overrides. All randomness derives from `seed`:

    * synthetic data: synth.seed if given, else seed
    * training and fine-tuning: derive_seed(seed, 1)
    * anchor clustering: derive_seed(seed, 2)
    * sweep / run seeds: derive_seed(seed, 3)
"""
import os

from increlearn import util as U
from increlearn import fileutil as F
from increlearn import keywords as K
from increlearn import softmax as S
from increlearn import labeler as L
from increlearn import acquisition as A
from increlearn import experiments as E
from increlearn import datasets as D

class ConfigError(Exception):

    def __init__(self, msg, key=None):
        super().__init__('%s: %s' % (key, msg) if key else msg)
        self.key = key


DEFAULTS = {K.seed: '0',
            K.threshold: '0.9',
            K.balance_q: '100',
            K.capacity: '5',
            K.learn_fraction: '0.6'}

INT_FIELDS = {'N', 'D', 'main_clusters', 'main_size', 'novel_clusters',
              'novel_size', 'seed', 'batch_size', 'max_epochs',
              'early_stop_patience', 'warmup_epochs', 'M', 'restarts',
              'max_iter', 'repeats', 'jobs'}
INT_LISTS = {'s_values', 'q_values', 'probe_q_values'}

PATHS = [K.data_train, K.data_validation, K.model, K.space]

SINGLE = [K.seed, K.threshold, K.balance_q, K.capacity, K.learn_fraction,
          K.ablation_rate] + PATHS

GROUPS = {K.synth: K.synth_fields, K.train: K.train_fields,
          K.labeler: K.labeler_fields, K.sweep: K.sweep_fields}


def _bool(value):
    if str(value).lower() in ('1', 'true', 'yes', 'on'):
        return True
    if str(value).lower() in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('not a boolean: %r' % value)


def _convert(field, value):
    if field in INT_LISTS:
        return [ int(v) for v in U.tolist(value) ]
    if field == 'names':
        return U.tolist(value)
    if field == 'tune':
        return _bool(value)
    if field in INT_FIELDS:
        return int(value)
    return float(value)


class RunConfig(object):
    """
    Validated configuration of one command. Typed configuration objects
    are created on demand; invalid values raise `ConfigError` naming the
    key or group.

        >>> cfg = RunConfig.fromFile('run.cfg', {'seed': '3'})
        >>> cfg.trainConfig()
    """

    def __init__(self, values=None, folder=None):
        """
        Args:
            values (dict): {str : str or [str]} raw key value pairs
            folder (str): base folder of relative paths [current folder]
        Raises:
            ConfigError: for unknown keys
        """
        self.folder = F.absfile(folder or os.getcwd())
        self.values = dict(DEFAULTS)

        for key, value in (values or {}).items():
            if key.startswith(K.manifest):
                continue
            if key not in SINGLE and not self._isGroupKey(key):
                raise ConfigError('unknown configuration key', key)
            self.values[key] = value

        for key in PATHS:
            if self.values.get(key):
                self.values[key] = F.absfile(self.values[key], cwd=self.folder)

    @staticmethod
    def _isGroupKey(key):
        for prefix, fields in GROUPS.items():
            if key.startswith(prefix) and key[len(prefix):] in fields:
                return True
        return False

    @classmethod
    def fromFile(cls, fname=None, overrides=None):
        """
        Args:
            fname (str): configuration file or None for defaults only
            overrides (dict): values taking precedence over the file
        Raises:
            ConfigError: if the file cannot be read or parsed
        """
        values = {}
        folder = None
        if fname:
            try:
                fname = F.existingFile(fname)
                values = U.file2dic(fname)
            except (IOError, U.ParsingError) as why:
                raise ConfigError(str(why), K.manifest_config)
            folder = os.path.dirname(fname)
        values.update(overrides or {})
        return cls(values, folder)

    def _get(self, key, convert):
        try:
            return convert(self.values[key])
        except (ValueError, TypeError) as why:
            raise ConfigError('invalid value %r (%s)' % (self.values[key], why),
                              key)

    def _group(self, prefix):
        r = {}
        for field in GROUPS[prefix]:
            key = prefix + field
            if key in self.values:
                r[field] = self._get(key, lambda v: _convert(field, v))
        return r

    def _build(self, prefix, factory, **kwargs):
        fields = self._group(prefix)
        fields.update(kwargs)
        try:
            return factory(**fields)
        except Exception as why:
            raise ConfigError(str(why), prefix + '*')

    @property
    def seed(self):
        r = self._get(K.seed, int)
        if not 0 <= r < 2**64:
            raise ConfigError('seed must be a 64 bit unsigned integer', K.seed)
        return r

    def path(self, key):
        """-> str or None, absolute path of a file entry"""
        return self.values.get(key) or None

    def synthSpec(self):
        seed = self._group(K.synth).get('seed', self.seed)
        return self._build(K.synth, D.SynthSpec, seed=seed)

    def trainConfig(self):
        return self._build(K.train, S.TrainConfig,
                           seed=U.derive_seed(self.seed, 1))

    def labelerConfig(self):
        return self._build(K.labeler, L.LabelerConfig,
                           seed=U.derive_seed(self.seed, 2))

    def sweepConfig(self):
        return self._build(K.sweep, E.SweepConfig,
                           seed=U.derive_seed(self.seed, 3))

    def acquisitionConfig(self):
        try:
            return A.AcquisitionConfig(self._get(K.threshold, float))
        except A.AcquisitionError as why:
            raise ConfigError(str(why), K.threshold)

    @property
    def Q(self):
        r = self._get(K.balance_q, int)
        if r < 1:
            raise ConfigError('must be positive', K.balance_q)
        return r

    @property
    def capacity(self):
        r = self._get(K.capacity, int)
        if r < 1:
            raise ConfigError('must be positive', K.capacity)
        return r

    @property
    def learn_fraction(self):
        r = self._get(K.learn_fraction, float)
        if not 0 < r < 1:
            raise ConfigError('must be in (0, 1)', K.learn_fraction)
        return r

    @property
    def ablation_rate(self):
        """-> float or None"""
        if not self.values.get(K.ablation_rate):
            return None
        r = self._get(K.ablation_rate, float)
        if not 0 <= r <= 1:
            raise ConfigError('must be in [0, 1]', K.ablation_rate)
        return r

    def resolved(self):
        """
        Complete configuration with all defaults filled in; reading it back
        with `RunConfig` gives an equivalent configuration.

        Returns:
            dict: {str : value}
        Raises:
            ConfigError: if any value is invalid
        """
        r = {K.seed: self.seed, K.threshold: self.acquisitionConfig().threshold,
             K.balance_q: self.Q, K.capacity: self.capacity,
             K.learn_fraction: self.learn_fraction}
        if self.ablation_rate is not None:
            r[K.ablation_rate] = self.ablation_rate
        for key in PATHS:
            if self.path(key):
                r[key] = self.path(key)

        for prefix, obj in ((K.synth, self.synthSpec()),
                            (K.train, self.trainConfig()),
                            (K.labeler, self.labelerConfig()),
                            (K.sweep, self.sweepConfig())):
            d = obj.asdict()
            for field in GROUPS[prefix]:
                if field in d and not (field == 'seed' and prefix != K.synth):
                    r[prefix + field] = d[field]
        return r


######################
### Module testing ###
from increlearn import testing

class Test(testing.AutoTest):
    """Test config"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        self.f_cfg = tempfile.mktemp(prefix='test_config_', suffix='.cfg')
        self.f_cfg2 = tempfile.mktemp(prefix='test_config_', suffix='.cfg')

    def cleanUp(self):
        F.tryRemove(self.f_cfg)
        F.tryRemove(self.f_cfg2)

    def test_defaults(self):
        cfg = RunConfig()
        self.assertEqual(cfg.seed, 0)
        self.assertEqual(cfg.Q, 100)
        self.assertEqual(cfg.capacity, 5)
        self.assertEqual(cfg.acquisitionConfig().threshold, 0.9)
        self.assertEqual(cfg.trainConfig().replace(seed=0), S.TrainConfig())
        self.assertEqual(cfg.labelerConfig().M, 10)
        self.assertEqual(cfg.sweepConfig().repeats, 3)
        self.assertEqual(cfg.ablation_rate, None)

    def test_file(self):
        """config.RunConfig from file with overrides"""
        U.dic2file({'seed': 7, 'train.learning_rate': 0.01,
                    'sweep.s_values': [5, 20], 'synth.tune': 'no',
                    'data.train': 'train.txt'}, self.f_cfg)
        cfg = RunConfig.fromFile(self.f_cfg, {'seed': '9'})
        self.assertEqual(cfg.seed, 9)
        self.assertEqual(cfg.trainConfig().learning_rate, 0.01)
        self.assertEqual(cfg.trainConfig().seed, U.derive_seed(9, 1))
        self.assertEqual(cfg.sweepConfig().s_values, [5, 20])
        self.assertEqual(cfg.synthSpec().tune, False)
        self.assertEqual(cfg.synthSpec().seed, 9)
        self.assertEqual(cfg.path('data.train'),
                         os.path.join(os.path.dirname(F.absfile(self.f_cfg)),
                                      'train.txt'))

    def test_resolved(self):
        """config.RunConfig.resolved reads back to the same configuration"""
        cfg = RunConfig({'seed': '4', 'labeler.M': '6', 'balance.Q': '50'})
        U.dic2file(cfg.resolved(), self.f_cfg)
        again = RunConfig.fromFile(self.f_cfg)
        self.assertEqual(again.resolved(), cfg.resolved())
        self.assertEqual(again.labelerConfig().asdict(),
                         cfg.labelerConfig().asdict())

        U.dic2file(dict(cfg.resolved(), **{'manifest.command': 'sweep'}),
                   self.f_cfg2)
        self.assertEqual(RunConfig.fromFile(self.f_cfg2).resolved(),
                         cfg.resolved())

    def test_errors(self):
        self.assertRaises(ConfigError, RunConfig, {'train.speed': '1'})
        self.assertRaises(ConfigError, RunConfig, {'bogus': '1'})
        self.assertRaises(ConfigError,
                          RunConfig({'train.learning_rate': 'x'}).trainConfig)
        self.assertRaises(ConfigError,
                          RunConfig({'train.momentum': '1.5'}).trainConfig)
        self.assertRaises(ConfigError,
                          RunConfig({'acquisition.threshold': '0'}
                                    ).acquisitionConfig)
        self.assertRaises(ConfigError, RunConfig({'synth.N': '1'}).synthSpec)
        self.assertRaises(ConfigError, RunConfig.fromFile, '/nonexisting.cfg')
        try:
            RunConfig({'balance.Q': 'many'}).Q
        except ConfigError as why:
            self.assertEqual(why.key, 'balance.Q')


if __name__ == '__main__':

    testing.localTest()
