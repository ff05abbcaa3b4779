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
Evaluation protocol and experiments.

A `Protocol` trains (or receives) the base model M_0 on the training set,
splits the validation set with the acquisition function into a known part
V_k (confident) and an uncertain part V_u, and for every run splits V_u
into a learning stream V_learn and a test set V_test. Runs feed V_learn
through the incremental engine and record accuracy on V_test and V_k and
the number of uncertain V_test examples after every update.

Run seeds are derived from (base seed, |S|, Q, run index); all further
randomness of a run is derived from its run seed.
"""
import os
import json
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as N

import increlearn
from increlearn import util as U
from increlearn import fileutil as F
from increlearn import softmax as S
from increlearn import labeler as L
from increlearn import acquisition as A
from increlearn import incremental as I
from increlearn import metrics as M
from increlearn import datasets as D

class ExperimentError(Exception):
    pass

class ReportError(ExperimentError):
    pass


class SweepConfig(object):
    """
    Pending set capacities |S| and per-class targets Q to combine, runs per
    combination, base seed and number of worker processes.
    """

    def __init__(self, s_values=(5,), q_values=(100,), repeats=3, seed=0,
                 probe_q_values=tuple(range(10, 101, 10)), jobs=1):
        self.s_values = [ int(s) for s in U.tolist(s_values) ]
        self.q_values = [ int(q) for q in U.tolist(q_values) ]
        self.probe_q_values = [ int(q) for q in U.tolist(probe_q_values) ]
        self.repeats = int(repeats)
        self.seed = int(seed)
        self.jobs = int(jobs)

        values = self.s_values + self.q_values + self.probe_q_values
        if not self.s_values or not self.q_values or min(values) < 1:
            raise ExperimentError('Sweep values must be positive integers')
        if self.repeats < 1 or self.jobs < 1:
            raise ExperimentError('repeats and jobs must be positive')

    def runSeed(self, s, q, i):
        return U.derive_seed(self.seed, s, q, i)

    def asdict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return 'SweepConfig(%s)' % ', '.join('%s=%r' % kv for kv in
                                             sorted(self.__dict__.items()))


class RunResult(object):
    """
    Traces of one incremental run; index 0 of every trace is M_0.

    *Fields:*

        * `label` - 'pseudo' (labeler), 'oracle' or 'noisy'
        * `capacity`, `Q`, `seed` - run parameters
        * `acc_test`, `acc_known` - accuracy on V_test and V_k per version
        * `uncertain` - number of V_test examples below the threshold
        * `records` - list of dict, one `UpdateRecord` per update
        * `confusion_test`, `confusion_known` - final confusion matrices
    """

    def __init__(self, label, capacity, Q, seed, n_learn=0, n_test=0):
        self.label = label
        self.capacity = capacity
        self.Q = Q
        self.seed = seed
        self.n_learn = n_learn
        self.n_test = n_test
        self.acc_test = []
        self.acc_known = []
        self.uncertain = []
        self.records = []
        self.confusion_test = None
        self.confusion_known = None

    @property
    def updates(self):
        return len(self.acc_test) - 1

    @property
    def noise(self):
        """mean pseudo label noise of committed items (or None)"""
        r = [ rec['noise'] for rec in self.records if rec['noise'] is not None ]
        return float(N.mean(r)) if r else None

    def asdict(self):
        r = dict(self.__dict__)
        r['noise'] = self.noise
        return r

    def __repr__(self):
        return '<RunResult %s |S|=%i Q=%i, %i updates, acc %.3f -> %.3f>' % \
               (self.label, self.capacity, self.Q, self.updates,
                self.acc_test[0], self.acc_test[-1])


class Protocol(object):
    """
    Fixture of the evaluation protocol (see module doc).

    *Usage:*

        >>> p = Protocol(train, validation, AcquisitionConfig(),
        ...              LabelerConfig(), TrainConfig())
        >>> result = p.run(capacity=5, Q=100, seed=1)
        >>> result.acc_test[-1] - result.acc_test[0]
    """

    def __init__(self, train, validation, acq_cfg, labeler_cfg, train_cfg,
                 learn_fraction=0.6, model=None):
        """
        Args:
            train (Dataset): T_0
            validation (Dataset): V, with true labels
            acq_cfg (AcquisitionConfig): threshold t
            labeler_cfg (LabelerConfig): anchor parameters
            train_cfg (TrainConfig): base training and fine-tuning
            learn_fraction (float): share of V_u used as learning stream
            model (SoftmaxModel): base model [default: trained on train]
        """
        self.train = train
        self.validation = validation
        self.acq_cfg = acq_cfg
        self.labeler_cfg = labeler_cfg
        self.train_cfg = train_cfg
        self.learn_fraction = float(learn_fraction)

        if not 0 < self.learn_fraction < 1:
            raise ExperimentError('learn_fraction must be in (0, 1)')

        if model is None:
            model, trace = S.train(S.SoftmaxModel.zeros(train.class_set,
                                                        train.dim),
                                   train, train_cfg)
        self.model = model.withVersion(0)
        self.anchors = L.build_anchors(L.FeatureSpace.fromDataset(train),
                                       labeler_cfg)
        self.known, self.uncertain = A.split_by_confidence(validation,
                                                           self.model, acq_cfg)
        if len(self.uncertain) < 2:
            logging.warning('Only %i uncertain validation examples' %
                            len(self.uncertain))

        logging.info('protocol: |T|=%i, |V_k|=%i, |V_u|=%i' %
                     (len(train), len(self.known), len(self.uncertain)))

    def describe(self):
        """-> dict, configuration echo for reports"""
        return {'train': self.train_cfg.asdict(),
                'labeler': self.labeler_cfg.asdict(),
                'threshold': self.acq_cfg.threshold,
                'learn_fraction': self.learn_fraction,
                'n_train': len(self.train), 'n_known': len(self.known),
                'n_uncertain': len(self.uncertain)}

    def learnTest(self, seed):
        """-> (V_learn, V_test) for the given run seed"""
        spec = D.SplitSpec([self.learn_fraction, 1 - self.learn_fraction],
                           seed=U.derive_seed(seed, 0))
        return tuple(D.split(self.uncertain, spec))

    def compare_labeling(self):
        """
        Softmax head against the feature-space labeler of T_0 on V_k and V_u.

        Returns:
            dict: confusion matrices, accuracies and the pseudo label noise
            of V_u
        """
        r = {}
        for name, data in (('known', self.known), ('uncertain',
                                                   self.uncertain)):
            soft = M.evaluate(self.model, data)
            lab = M.evaluate_labeler(self.anchors, self.labeler_cfg, data)
            r[name] = {'n': len(data),
                       'softmax_accuracy': soft.accuracy,
                       'labeler_accuracy': lab.accuracy,
                       'softmax_confusion': soft.tolist(),
                       'labeler_confusion': lab.tolist()}
        r['uncertain_noise'] = 1. - r['uncertain']['labeler_accuracy'] \
                               if len(self.uncertain) else None
        return r

    def _observe(self, result, model, test):
        result.acc_test += [ M.evaluate(model, test).accuracy ]
        result.acc_known += [ M.evaluate(model, self.known).accuracy ]
        result.uncertain += [ M.count_uncertain(model, test,
                                                self.acq_cfg.threshold) ]

    def run(self, capacity, Q, seed, label='pseudo', noise=None,
            max_updates=None, checkpoints=None):
        """
        One incremental run over V_learn in a seeded random order.

        Args:
            capacity (int): pending set size |S|
            Q (int): examples per class after balancing
            seed (int): run seed
            label (str): 'pseudo' for labeler output, 'oracle' for true
                labels, 'noisy' for true labels with injected noise
            noise (float): noise rate for label 'noisy'
            max_updates (int): stop after this many updates
            checkpoints (str): folder for a checkpoint of every version
        Returns:
            RunResult
        """
        if label not in ('pseudo', 'oracle', 'noisy'):
            raise ExperimentError('Unknown labeling %r' % label)

        learn, test = self.learnTest(seed)
        order = N.random.default_rng(U.derive_seed(seed, 1)).permutation(
            len(learn))
        stream = learn.subset(order)
        if max_updates is not None:
            stream = stream[: capacity * max_updates]
        if label == 'noisy':
            stream, original = D.inject_label_noise(stream, noise or 0.,
                                                    U.derive_seed(seed, 4))

        result = RunResult(label, capacity, Q, seed, len(learn), len(test))
        self._observe(result, self.model, test)

        def monitor(state, record):
            self._observe(result, state.model, test)
            if checkpoints:
                state.save(checkpoints)

        state = I.SystemState.initial(self.model, self.train, capacity)
        if checkpoints:
            state.save(checkpoints)
        state, records = I.run_acquired(
            state, stream, self.labeler_cfg,
            I.BalanceConfig(Q, U.derive_seed(seed, 2)),
            self.train_cfg.replace(seed=U.derive_seed(seed, 3)),
            oracle=label != 'pseudo', monitor=monitor, anchors=self.anchors)

        result.records = [ r.asdict() for r in records ]
        result.confusion_test = M.evaluate(state.model, test).tolist()
        result.confusion_known = M.evaluate(state.model, self.known).tolist()

        logging.info('run %s |S|=%i Q=%i seed %i: %i updates, V_test %.3f -> '
                     '%.3f' % (label, capacity, Q, seed, result.updates,
                               result.acc_test[0], result.acc_test[-1]))
        return result


class ExperimentReport(object):
    """
    Per-run traces of an experiment with a configuration echo. Averages
    are computed from the runs on demand.
    """

    TRACES = ['acc_test', 'acc_known', 'uncertain']

    def __init__(self, kind, config=None, runs=(), extra=None):
        self.kind = kind
        self.config = dict(config or {})
        self.runs = list(runs)
        self.extra = dict(extra or {})

    def cells(self):
        """-> sorted list of (label, capacity, Q)"""
        return sorted(set( (r.label, r.capacity, r.Q) for r in self.runs ))

    def select(self, capacity, Q, label='pseudo'):
        return [ r for r in self.runs if (r.label, r.capacity, r.Q) ==
                 (label, capacity, Q) ]

    def averaged(self, capacity, Q, label='pseudo'):
        """
        Pointwise mean traces over the runs of one cell. Traces are cut to
        the shortest run.

        Returns:
            dict: {trace name : list of float}
        """
        runs = self.select(capacity, Q, label)
        if not runs:
            raise ExperimentError('No runs for %s |S|=%i Q=%i' %
                                  (label, capacity, Q))
        n = min( len(r.acc_test) for r in runs )
        if any( len(r.acc_test) != n for r in runs ):
            logging.warning('Runs of |S|=%i Q=%i differ in length' %
                            (capacity, Q))
        return { t : N.mean([ getattr(r, t)[:n] for r in runs ],
                            axis=0).tolist() for t in self.TRACES }

    def asdict(self):
        averages = []
        for label, s, q in self.cells():
            a = self.averaged(s, q, label)
            a.update({'label': label, 'capacity': s, 'Q': q,
                      'runs': len(self.select(s, q, label))})
            averages += [ a ]
        return {'kind': self.kind, 'version': increlearn.__version__,
                'config': self.config, 'extra': self.extra,
                'runs': [ r.asdict() for r in self.runs ],
                'averages': averages}


def _run_job(args):
    protocol, capacity, Q, seed, label, noise, max_updates = args
    return protocol.run(capacity, Q, seed, label, noise, max_updates)


def _execute(jobs, n_workers=1):
    """run (protocol, capacity, Q, seed, label, noise, max_updates) jobs"""
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as executor:
            return list(executor.map(_run_job, jobs))
    return [ _run_job(j) for j in jobs ]


def run_sweep(protocol, cfg, label='pseudo'):
    """
    cfg.repeats runs for every combination of |S| in cfg.s_values and Q in
    cfg.q_values. Parallel execution (cfg.jobs > 1) gives the same result.

    Returns:
        ExperimentReport
    """
    jobs = [ (protocol, s, q, cfg.runSeed(s, q, i), label, None, None)
             for s in cfg.s_values for q in cfg.q_values
             for i in range(cfg.repeats) ]
    runs = _execute(jobs, cfg.jobs)
    return ExperimentReport('sweep', {'protocol': protocol.describe(),
                                      'sweep': cfg.asdict()}, runs)


def noise_ablation(protocol, cfg, rate=None):
    """
    Paired runs with identical seeds for the first |S| and Q of cfg:
    labeler pseudo labels against oracle labels, or, with a rate, oracle
    labels against oracle labels with that rate of injected noise.

    Returns:
        ExperimentReport: extra holds the final V_test accuracy gap (clean
        minus other) and the mean measured pseudo label noise
    """
    s, q = cfg.s_values[0], cfg.q_values[0]
    other = 'pseudo' if rate is None else 'noisy'
    jobs = []
    for i in range(cfg.repeats):
        seed = cfg.runSeed(s, q, i)
        jobs += [ (protocol, s, q, seed, 'oracle', None, None),
                  (protocol, s, q, seed, other, rate, None) ]
    runs = _execute(jobs, cfg.jobs)

    report = ExperimentReport('ablation', {'protocol': protocol.describe(),
                                           'sweep': cfg.asdict(),
                                           'rate': rate}, runs)
    clean = report.averaged(s, q, 'oracle')['acc_test'][-1]
    noisy = report.averaged(s, q, other)['acc_test'][-1]
    noise = [ r.noise for r in report.select(s, q, other)
              if r.noise is not None ]
    report.extra = {'gap': clean - noisy,
                    'noise': float(N.mean(noise)) if noise else None}
    return report


def probe_q(protocol, cfg):
    """
    Accuracy of M_1 (first update only) with |S| = cfg.s_values[0] for
    every Q of cfg.probe_q_values, averaged over cfg.repeats runs.

    Returns:
        ExperimentReport: extra['probe'] lists Q with mean accuracies
    """
    s = cfg.s_values[0]
    jobs = [ (protocol, s, q, cfg.runSeed(s, q, i), 'pseudo', None, 1)
             for q in cfg.probe_q_values for i in range(cfg.repeats) ]
    report = ExperimentReport('probe', {'protocol': protocol.describe(),
                                        'sweep': cfg.asdict()},
                              _execute(jobs, cfg.jobs))
    probe = []
    for q in cfg.probe_q_values:
        a = report.averaged(s, q)
        probe += [ {'Q': q, 'acc_test': a['acc_test'][-1],
                    'acc_known': a['acc_known'][-1]} ]
    report.extra = {'probe': probe}
    return report


def jsonable(x):
    """-> x with numpy scalars and arrays converted for json"""
    if isinstance(x, dict):
        return { str(k) : jsonable(v) for k, v in x.items() }
    if isinstance(x, (list, tuple)):
        return [ jsonable(v) for v in x ]
    if isinstance(x, N.integer):
        return int(x)
    if isinstance(x, N.floating):
        return float(x)
    if isinstance(x, N.ndarray):
        return jsonable(x.tolist())
    return x


def emit_report(report, folder):
    """
    Write `summary.json` (sorted keys) and one tab separated trace file per
    run into `folder/traces/` with columns q, acc_test, acc_known,
    uncertain. Writing the same report twice gives identical files.

    Returns:
        list of str: written files
    Raises:
        ReportError: if the folder cannot be written
    """
    try:
        F.ensureFolder(os.path.join(folder, 'traces'))
        fsummary = os.path.join(folder, 'summary.json')
        with open(fsummary, 'w') as f:
            json.dump(jsonable(report.asdict()), f, sort_keys=True, indent=1)
            f.write('\n')
        r = [ fsummary ]

        count = {}
        for run in report.runs:
            key = (run.label, run.capacity, run.Q)
            i = count[key] = count.get(key, -1) + 1
            fname = os.path.join(folder, 'traces', '%s_%s_s%i_Q%i_r%i.tsv' %
                                 (report.kind, run.label, run.capacity,
                                  run.Q, i))
            with open(fname, 'w') as f:
                f.write('q\tacc_test\tacc_known\tuncertain\n')
                for q, row in enumerate(zip(run.acc_test, run.acc_known,
                                            run.uncertain)):
                    f.write('%i\t%r\t%r\t%i\n' % (q, float(row[0]),
                                                  float(row[1]), row[2]))
            r += [ fname ]
    except (OSError, F.UtilError) as why:
        raise ReportError('Cannot write report to %s: %s' % (folder, why))
    return r


######################
### Module testing ###
from increlearn import testing

def small_protocol(seed=3, **kwargs):
    """a fast protocol on a small synthetic set"""
    spec = D.SynthSpec(N=3, D=12, main_clusters=2, main_size=40,
                       novel_clusters=1, novel_size=20, novel_offset=0.7,
                       novel_std=0.25, novel_lateral=6., novel_lookalike=0.,
                       scale=1., tune=False, seed=seed)
    train, valid, truth = D.generate(spec)
    return Protocol(train, valid, A.AcquisitionConfig(0.9),
                    L.LabelerConfig(M=3, restarts=2),
                    S.TrainConfig(learning_rate=0.01, max_epochs=30, seed=1,
                                  warmup_epochs=0),
                    **kwargs)


class Test(testing.AutoTest):
    """Test experiments"""

    TAGS = [ testing.NORMAL ]

    def prepare(self):
        import tempfile
        self.protocol = small_protocol()
        self.f_out = tempfile.mkdtemp(prefix='test_experiments_')

    def cleanUp(self):
        F.tryRemove(self.f_out, tree=True)

    def test_protocol_split(self):
        p = self.protocol
        self.assertEqual(len(p.known) + len(p.uncertain), len(p.validation))
        learn, test = p.learnTest(7)
        self.assertEqual(len(learn) + len(test), len(p.uncertain))
        self.assertFalse(set(learn.ids()) & set(test.ids()))

    def test_run(self):
        """experiments.Protocol.run trace lengths"""
        r = self.protocol.run(2, 10, seed=5)
        self.assertEqual(r.updates, r.n_learn // 2)
        self.assertEqual(len(r.acc_known), r.updates + 1)
        self.assertEqual(len(r.uncertain), r.updates + 1)
        self.assertEqual(len(r.records), r.updates)
        self.assertEqual(r.acc_test[0], M.evaluate(self.protocol.model,
                                                   self.protocol.learnTest(5)[1]
                                                   ).accuracy)

        r1 = self.protocol.run(2, 10, seed=5, max_updates=1)
        self.assertEqual(r1.updates, min(1, r.updates))

    def test_sweep_single(self):
        """experiments.run_sweep with one repeat equals the run"""
        cfg = SweepConfig([3], [10], repeats=1, seed=2)
        report = run_sweep(self.protocol, cfg)
        run = self.protocol.run(3, 10, cfg.runSeed(3, 10, 0))
        self.assertEqual(report.averaged(3, 10)['acc_test'], run.acc_test)
        self.assertEqual(report.cells(), [('pseudo', 3, 10)])

    def test_sweep_repeats(self):
        cfg = SweepConfig([3], [10], repeats=3, seed=2)
        report = run_sweep(self.protocol, cfg)
        self.assertEqual(len(set( r.seed for r in report.runs )), 3)
        n = len(report.runs[0].acc_test)
        self.assertEqual(len(report.averaged(3, 10)['acc_test']), n)

    def test_ablation_oracle(self):
        """experiments.noise_ablation rate 0 gives identical traces"""
        cfg = SweepConfig([3], [10], repeats=1, seed=2)
        report = noise_ablation(self.protocol, cfg, rate=0.)
        a = report.averaged(3, 10, 'oracle')
        b = report.averaged(3, 10, 'noisy')
        self.assertEqual(a, b)
        self.assertEqual(report.extra['gap'], 0.)

    def test_compare_labeling(self):
        r = self.protocol.compare_labeling()
        self.assertEqual(r['known']['n'] + r['uncertain']['n'],
                         len(self.protocol.validation))
        self.assertEqual(N.sum(r['known']['softmax_confusion']),
                         r['known']['n'])

    def test_probe(self):
        cfg = SweepConfig([2], [10], repeats=1, probe_q_values=[5, 10])
        report = probe_q(self.protocol, cfg)
        self.assertEqual([ p['Q'] for p in report.extra['probe'] ], [5, 10])

    def test_emit(self):
        """experiments.emit_report is reproducible"""
        cfg = SweepConfig([3], [10], repeats=2, seed=2)
        report = run_sweep(self.protocol, cfg)
        files = emit_report(report, os.path.join(self.f_out, 'a'))
        again = emit_report(report, os.path.join(self.f_out, 'b'))
        self.assertEqual(len(files), 3)
        for f1, f2 in zip(files, again):
            self.assertTrue(F.sameContent(f1, f2))

        with open(files[0]) as f:
            summary = json.load(f)
        self.assertEqual(summary['kind'], 'sweep')
        self.assertEqual(len(summary['runs']), 2)

        with open(files[1]) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], 'q\tacc_test\tacc_known\tuncertain')
        self.assertEqual(len(lines), report.runs[0].updates + 2)

    def test_parallel(self):
        """experiments.run_sweep parallel equals serial"""
        cfg = SweepConfig([3], [10], repeats=2, seed=2)
        serial = run_sweep(self.protocol, cfg)
        parallel = run_sweep(self.protocol, SweepConfig([3], [10], repeats=2,
                                                        seed=2, jobs=2))
        self.assertEqual(serial.asdict()['averages'],
                         parallel.asdict()['averages'])


def _fixture(seed):
    train, valid, truth = D.generate(D.SynthSpec(seed=seed))
    return Protocol(train, valid, A.AcquisitionConfig(), L.LabelerConfig(),
                    S.TrainConfig(seed=U.derive_seed(seed, 1)))


class LongTest(testing.AutoTest):
    """Incremental learning on the default synthetic fixture"""

    TAGS = [ testing.LONG ]

    SEEDS = [1, 2, 3]

    def prepare(self):
        self.protocols = [ _fixture(s) for s in self.SEEDS ]
        self.cfg = SweepConfig([5], [100], repeats=1, seed=11)

    def test_labeler_dominance(self):
        """labeler beats softmax on V_u and matches it on V_k"""
        r = [ p.compare_labeling() for p in self.protocols ]
        gain = N.mean([ x['uncertain']['labeler_accuracy'] -
                        x['uncertain']['softmax_accuracy'] for x in r ])
        self.assertTrue(gain >= 0.15, 'labeler gain %.3f' % gain)

        diff = N.mean([ x['known']['labeler_accuracy'] -
                        x['known']['softmax_accuracy'] for x in r ])
        self.assertTrue(abs(diff) <= 0.06, 'V_k difference %.3f' % diff)

        noise = N.mean([ x['uncertain_noise'] for x in r ])
        self.assertTrue(0.10 <= noise <= 0.20, 'V_u noise %.3f' % noise)

    def test_incremental_gain(self):
        """accuracy gain without forgetting and fewer uncertain inputs"""
        runs = [ run_sweep(p, self.cfg).runs[0] for p in self.protocols ]
        gain = N.mean([ r.acc_test[-1] - r.acc_test[0] for r in runs ])
        self.assertTrue(gain >= 0.20, 'V_test gain %.3f' % gain)

        for r in runs:
            self.assertTrue(r.acc_known[-1] >= r.acc_known[0] - 0.03,
                            'V_k %.3f -> %.3f' % (r.acc_known[0],
                                                  r.acc_known[-1]))
            self.assertTrue(r.uncertain[-1] < r.uncertain[0])

        drop = N.mean([ 1 - r.uncertain[1] / r.uncertain[0] for r in runs ])
        self.assertTrue(drop >= 0.5, 'first update drop %.3f' % drop)

    def test_pseudo_against_oracle(self):
        """pseudo labels within 3 points of oracle labels"""
        r = [ noise_ablation(p, self.cfg) for p in self.protocols ]
        gap = N.mean([ x.extra['gap'] for x in r ])
        noise = N.mean([ x.extra['noise'] for x in r ])
        self.assertTrue(gap <= 0.03, 'gap %.3f' % gap)
        self.assertTrue(0.10 <= noise <= 0.20, 'noise %.3f' % noise)

    def test_noise_ablation(self):
        """injected label noise has little effect on final accuracy"""
        gaps = [ noise_ablation(p, self.cfg, rate=0.15).extra['gap']
                 for p in self.protocols ]
        self.assertTrue(N.mean(gaps) <= 0.05, 'gap %.3f' % N.mean(gaps))

    def test_all_labels_wrong(self):
        """clean labels beat a stream of wrong labels"""
        for p in self.protocols:
            gap = noise_ablation(p, self.cfg, rate=1.).extra['gap']
            self.assertTrue(gap > 0, 'gap %.3f' % gap)

    def test_capacity(self):
        """final accuracy hardly depends on |S|"""
        ## same split and order for every |S|
        final = [ N.mean([ p.run(s, 100, self.cfg.runSeed(5, 100, 0)
                                 ).acc_test[-1] for p in self.protocols ])
                  for s in (5, 20, 35, 50, 65, 80, 95) ]
        spread = max(final) - min(final)
        self.assertTrue(spread <= 0.05, 'final accuracy %r' % final)


if __name__ == '__main__':

    testing.localTest()
