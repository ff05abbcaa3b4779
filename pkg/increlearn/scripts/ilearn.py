#!/usr/bin/env python
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
ilearn.py -- semi-supervised incremental learning on feature vectors.

Syntax:
    ilearn.py <command> [-config <run.cfg>] [-out <folder>] [-seed <int>]
    ilearn.py replay -manifest <folder/manifest.cfg> [-out <folder>]

Commands:
    gen       generate synthetic training / validation feature files
    train     train base model M_0 and feature space F_0 on data.train
    eval      evaluate softmax head and feature-space labeler on
              data.validation
    incr      one incremental run over the uncertain validation examples,
              with a checkpoint of every model version
    sweep     |S| x Q sweep with repeated runs, first update Q probe and
              softmax / labeler comparison
    ablate    paired runs with pseudo labels and oracle labels (or oracle
              labels with ablation.rate injected noise)
    replay    re-run a command from its manifest

Options:
    -config   key-value configuration file (see increlearn.config)
    -out      output folder [results]
    -seed     base seed, overrides the configuration
    -manifest run manifest to replay

Without data.train in the configuration, training and validation data are
generated from the synth.* parameters.

Exit codes:
    0 success, 1 usage, 2 configuration error, 3 data error, 4 other error

Environment:
    INCRELEARN_LOGLEVEL   DEBUG, INFO, WARNING or ERROR [INFO]
"""

import sys, logging, os, json

import increlearn.util as U
import increlearn.fileutil as F
import increlearn.keywords as K
import increlearn.softmax as S
import increlearn.labeler as L
import increlearn.metrics as M
import increlearn.datasets as D
import increlearn.experiments as E

from increlearn.config import RunConfig, ConfigError
from increlearn.runtask import RunTask
from increlearn.featurefile import FeatureFileError

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3, 4

def _defaultOptions():
    return {'out': 'results'}


class DataTask(RunTask):
    """common data access of all commands"""

    def data(self):
        """-> (training Dataset, validation Dataset or None)"""
        cfg = self.config
        if cfg.path(K.data_train):
            train = D.load_features(cfg.path(K.data_train))
            valid = None
            if cfg.path(K.data_validation):
                valid = D.load_features(cfg.path(K.data_validation))
        else:
            self.log.info('no data.train given, generating synthetic data')
            train, valid, truth = D.generate(cfg.synthSpec())

        if len(train) == 0:
            raise D.DatasetError('Training set is empty')
        return train, valid

    def validation(self, valid):
        if valid is None or len(valid) == 0:
            raise D.DatasetError('No validation examples (data.validation)')
        return valid

    def baseModel(self, train):
        if self.config.path(K.model):
            return S.SoftmaxModel.load(self.config.path(K.model))
        model, trace = S.train(S.SoftmaxModel.zeros(train.class_set,
                                                    train.dim),
                               train, self.config.trainConfig())
        return model

    def protocol(self):
        train, valid = self.data()
        return E.Protocol(train, self.validation(valid),
                          self.config.acquisitionConfig(),
                          self.config.labelerConfig(),
                          self.config.trainConfig(),
                          learn_fraction=self.config.learn_fraction,
                          model=self.baseModel(train))

    def writeJson(self, d, fname):
        with open(self.path(fname), 'w') as f:
            json.dump(E.jsonable(d), f, sort_keys=True, indent=1)
            f.write('\n')
        return self.path(fname)


class GenTask(DataTask):
    COMMAND = 'gen'

    def execute(self):
        spec = self.config.synthSpec()
        train, valid, truth = D.generate(spec)

        D.save_features(train, self.path('train.txt'))
        D.save_features(valid, self.path('validation.txt'))
        truth.save(self.path('truth.txt'), train.class_set)
        U.dic2file({'offset': truth.offset, 'training': len(train),
                    'validation': len(valid), 'novel': len(truth.novel),
                    'lookalike': len(truth.lookalike)},
                   self.path('synth.cfg'), header='generated synthetic data')

        self.log.info('generated %i / %i examples, novel offset %.2f' %
                      (len(train), len(valid), truth.offset))
        return [ self.path(f) for f in ('train.txt', 'validation.txt',
                                        'truth.txt', 'synth.cfg') ]


class TrainTask(DataTask):
    COMMAND = 'train'

    def execute(self):
        train, valid = self.data()
        model, trace = S.train(S.SoftmaxModel.zeros(train.class_set,
                                                    train.dim),
                               train, self.config.trainConfig())
        model.save(self.path('model.txt'))
        L.FeatureSpace.fromDataset(train).save(self.path('space.txt'))

        with open(self.path('training.tsv'), 'w') as f:
            f.write('epoch\ttrain_loss\tval_loss\n')
            for i, (lt, lv) in enumerate(zip(trace.train_loss,
                                             trace.val_loss)):
                f.write('%i\t%r\t%r\n' % (i, float(lt), float(lv)))

        for msg in trace.warnings:
            self.log.warning(msg)
        self.log.info('trained %i epochs, best epoch %i' % (trace.epochs,
                                                           trace.best_epoch))
        return [ self.path(f) for f in ('model.txt', 'space.txt',
                                        'training.tsv') ]


class EvalTask(DataTask):
    COMMAND = 'eval'

    def execute(self):
        cfg = self.config
        train, valid = self.data()
        valid = self.validation(valid)
        model = self.baseModel(train)

        if cfg.path(K.space):
            space = L.FeatureSpace.load(cfg.path(K.space))
        else:
            space = L.FeatureSpace.fromDataset(train)
        lcfg = cfg.labelerConfig()
        anchors = L.build_anchors(space, lcfg)

        t = cfg.acquisitionConfig().threshold
        soft = M.evaluate(model, valid)
        lab = M.evaluate_labeler(anchors, lcfg, valid)
        r = {'n': len(valid), 'threshold': t,
             'uncertain': M.count_uncertain(model, valid, t),
             'softmax': {'accuracy': soft.accuracy,
                         'confusion': soft.tolist()},
             'labeler': {'accuracy': lab.accuracy,
                         'confusion': lab.tolist()},
             'classes': valid.class_set.names}

        self.log.info('softmax accuracy %.4f, labeler accuracy %.4f' %
                      (soft.accuracy, lab.accuracy))
        return [ self.writeJson(r, 'evaluation.json') ]


class IncrTask(DataTask):
    COMMAND = 'incr'

    def execute(self):
        cfg = self.config
        p = self.protocol()
        s, q = cfg.capacity, cfg.Q
        seed = cfg.sweepConfig().runSeed(s, q, 0)
        result = p.run(s, q, seed, checkpoints=self.path('checkpoints'))
        report = E.ExperimentReport('incr', {'protocol': p.describe(),
                                             'seed': seed}, [result])
        return E.emit_report(report, self.f_out)


class SweepTask(DataTask):
    COMMAND = 'sweep'

    def execute(self):
        p = self.protocol()
        sweep = self.config.sweepConfig()
        r = E.emit_report(E.run_sweep(p, sweep), self.path('sweep'))
        r += E.emit_report(E.probe_q(p, sweep), self.path('probe'))
        r += [ self.writeJson(p.compare_labeling(), 'labeling.json') ]
        return r


class AblateTask(DataTask):
    COMMAND = 'ablate'

    def execute(self):
        p = self.protocol()
        cfg = self.config
        sweep = cfg.sweepConfig()
        sweep.s_values, sweep.q_values = [cfg.capacity], [cfg.Q]
        report = E.noise_ablation(p, sweep, rate=cfg.ablation_rate)
        self.log.info('final accuracy gap %.4f, measured noise %r' %
                      (report.extra['gap'], report.extra['noise']))
        return E.emit_report(report, self.f_out)


TASKS = { t.COMMAND : t for t in (GenTask, TrainTask, EvalTask, IncrTask,
                                  SweepTask, AblateTask) }


#####################################
# MAIN Method (also used for testing)
#####################################
def run(options):
    """
    Args:
        options (dict): parsed command line (see `util.cmdDict`)
    Returns:
        int: exit code
    """
    command = options.get('', '')
    command = command[0] if type(command) is list else command
    try:
        if command == 'replay':
            if 'manifest' not in options:
                raise ConfigError('replay needs a -manifest file', 'manifest')
            fmanifest = F.existingFile(options['manifest'])
            manifest = U.file2dic(fmanifest)
            command = manifest.get(K.manifest_command)
            fconfig = fmanifest
            out = options.get('out', manifest.get(K.manifest_out))
            overrides = {}
        else:
            fconfig = options.get('config')
            out = options.get('out', 'results')
            overrides = { K.seed : options['seed'] } if 'seed' in options \
                        else {}

        if command not in TASKS:
            U.scriptusage(options, doc=__doc__, exit=False, force=True)
            return EXIT_USAGE

        cfg = RunConfig.fromFile(fconfig, overrides)
        cfg.resolved()

        task = TASKS[command](out, cfg, configfile=fconfig)
        task.start()

    except ConfigError as why:
        logging.error('configuration error: %s' % why)
        return EXIT_CONFIG
    except (FeatureFileError, D.DatasetError, FileNotFoundError,
            F.UtilError, U.ParsingError) as why:
        logging.error('data error: %s' % why)
        return EXIT_DATA
    except Exception:
        logging.error(U.lastError())
        return EXIT_RUNTIME

    return EXIT_OK


def main():
    level = os.environ.get('INCRELEARN_LOGLEVEL', 'INFO').upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format='%(levelname)s %(name)s: %(message)s')

    U.scriptusage(_defaultOptions(), doc=__doc__)
    options = U.cmdDict(_defaultOptions())
    sys.exit(run(options))


######################
# Script test fixture
######################
from increlearn import testing

class Test(testing.AutoTest):
    """Test ilearn.py"""

    TAGS = [ testing.SCRIPT ]

    def prepare(self):
        import tempfile
        self.f_project = tempfile.mkdtemp(prefix='increlearn_ilearn_')
        self.f_small = F.testRoot('small.cfg')

    def cleanUp(self):
        F.tryRemove(self.f_project, verbose=(self.VERBOSITY>1), tree=1)

    def out(self, name):
        return os.path.join(self.f_project, name)

    def runcmd(self, *args):
        return run(U.get_cmdDict(list(args), {}))

    def config(self, name, **values):
        """small.cfg plus given values (dots written as __)"""
        d = U.file2dic(self.f_small)
        d.update({ k.replace('__', '.') : v for k, v in values.items() })
        U.dic2file(d, self.out(name))
        return self.out(name)

    def test_usage(self):
        """ilearn.py unknown command"""
        self.assertEqual(self.runcmd('fly'), EXIT_USAGE)

    def test_gen(self):
        """ilearn.py gen; repeated seed gives identical files"""
        for name in ('gen1', 'gen2'):
            code = self.runcmd('gen', '-config', self.f_small, '-out',
                               self.out(name), '-seed', '5')
            self.assertEqual(code, EXIT_OK)
        for f in ('train.txt', 'validation.txt', 'truth.txt'):
            self.assertTrue(F.sameContent(os.path.join(self.out('gen1'), f),
                                          os.path.join(self.out('gen2'), f)))
        data = D.load_features(os.path.join(self.out('gen1'), 'train.txt'))
        self.assertEqual(data.class_set.N, 3)

    def test_bad_config(self):
        """ilearn.py invalid synthetic spec"""
        cfg = self.config('bad.cfg', synth__N='1')
        self.assertEqual(self.runcmd('gen', '-config', cfg, '-out',
                                     self.out('bad')), EXIT_CONFIG)
        cfg = self.config('bad2.cfg', data__train='missing.txt')
        self.assertEqual(self.runcmd('train', '-config', cfg, '-out',
                                     self.out('bad2')), EXIT_DATA)

    def test_train_eval(self):
        """ilearn.py train and eval from files"""
        self.runcmd('gen', '-config', self.f_small, '-out', self.out('data'))
        cfg = self.config('files.cfg',
                          data__train=self.out('data/train.txt'),
                          data__validation=self.out('data/validation.txt'))
        self.assertEqual(self.runcmd('train', '-config', cfg, '-out',
                                     self.out('train')), EXIT_OK)
        model = S.SoftmaxModel.load(self.out('train/model.txt'))
        self.assertEqual(model.version, 0)

        cfg = self.config('eval.cfg',
                          data__train=self.out('data/train.txt'),
                          data__validation=self.out('data/validation.txt'),
                          model=self.out('train/model.txt'),
                          space=self.out('train/space.txt'))
        self.assertEqual(self.runcmd('eval', '-config', cfg, '-out',
                                     self.out('eval')), EXIT_OK)
        with open(self.out('eval/evaluation.json')) as f:
            r = json.load(f)
        self.assertTrue(0 <= r['softmax']['accuracy'] <= 1)

        empty = self.out('empty.txt')
        with open(empty, 'w') as f:
            f.write('increlearn-features v1, N=2, D=3\na,b\n')
        cfg = self.config('empty.cfg', data__train=empty)
        self.assertEqual(self.runcmd('train', '-config', cfg, '-out',
                                     self.out('empty')), EXIT_DATA)

    def test_incr_replay(self):
        """ilearn.py incr and replay give identical reports"""
        self.assertEqual(self.runcmd('incr', '-config', self.f_small, '-out',
                                     self.out('incr')), EXIT_OK)
        self.assertTrue(os.path.isdir(self.out('incr/checkpoints/q0000')))

        self.assertEqual(self.runcmd('replay', '-manifest',
                                     self.out('incr/manifest.cfg'), '-out',
                                     self.out('replay')), EXIT_OK)
        self.assertTrue(F.sameContent(self.out('incr/summary.json'),
                                      self.out('replay/summary.json')))

    def test_sweep_ablate(self):
        """ilearn.py sweep and ablate"""
        self.assertEqual(self.runcmd('sweep', '-config', self.f_small, '-out',
                                     self.out('sweep')), EXIT_OK)
        with open(self.out('sweep/sweep/summary.json')) as f:
            r = json.load(f)
        self.assertEqual(len(r['runs']), 4)
        self.assertTrue(os.path.exists(self.out('sweep/labeling.json')))

        cfg = self.config('ablate.cfg', ablation__rate='0.2')
        self.assertEqual(self.runcmd('ablate', '-config', cfg, '-out',
                                     self.out('ablate')), EXIT_OK)


if __name__ == '__main__':
    main()
