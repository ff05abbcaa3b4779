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

import os.path as osp
import logging, logging.handlers

import increlearn
import increlearn.fileutil as F
import increlearn.util as U
import increlearn.keywords as K

class RunTaskError(Exception):
    pass


class RunTask(object):
    """
    Output folder, log and manifest handling for one command.

    RunTask.f_out:

        Output folder of the task. It is created if it does not exist yet.
        All artifacts of the command are written into it.

    RunTask.log:

        Logger 'increlearn.<TaskClass>' writing into a rotating log file
        task.log within the output folder (previous logs are rotated away).
        It does not propagate to the root logger.

    The run manifest (manifest.cfg) is written by `start` before `execute`
    is called; it holds the command, the resolved configuration, the seed
    and the tool version, and can be passed back as configuration file to
    replay the command.

    Typical usage:
    >>> class TrainTask(RunTask):
    ...     COMMAND = 'train'
    ...     def execute(self):
    ...         ...
    >>> TrainTask('results/train01', cfg).start()
    """

    #: command name recorded in the manifest. Override!
    COMMAND = 'task'
    #: default log file name
    F_LOG = 'task.log'
    #: manifest file name
    F_MANIFEST = 'manifest.cfg'

    def __init__(self, outfolder, config, configfile=None,
                 loglevel=logging.INFO):
        """
        Args:
            outfolder (str): output folder (created if needed)
            config (config.RunConfig): validated configuration
            configfile (str): configuration file name recorded in manifest
            loglevel (int): level of the task log
        Raises:
            RunTaskError: if the output folder cannot be created
        """
        logging.info('Initiating new task: %s in %s', self.__class__.__name__,
                     outfolder)

        self.config = config
        self.configfile = configfile
        self.f_out = self.prepareFolder(outfolder)

        self.log = logging.getLogger('increlearn.' + self.__class__.__name__)
        self.log.setLevel(loglevel)

        hdlr = logging.handlers.RotatingFileHandler(
            osp.join(self.f_out, self.F_LOG), backupCount=5)
        if hdlr.stream.tell():
            hdlr.doRollover()
        hdlr.setFormatter(logging.Formatter(
            '%(asctime)s %(levelname)s %(message)s'))
        for h in list(self.log.handlers):
            self.log.removeHandler(h)
            h.close()
        self.log.addHandler(hdlr)
        self.log.propagate = False  ## don't copy to root log

        self.log.info('Task %s initiated in %s' % (self.__class__.__name__,
                                                   self.f_out))

    def prepareFolder(self, outfolder):
        """
        Returns:
            str: full path to (if needed created) existing output folder
        """
        try:
            r = F.absfile(outfolder)
            F.ensureFolder(r)
        except (OSError, F.UtilError) as why:
            msg = 'Could not create output folder %r: %s' % (outfolder, why)
            logging.error(msg)
            raise RunTaskError(msg)

        if not osp.isdir(r):
            raise RunTaskError('Could not create output folder %r.' % r)
        return r

    def path(self, fname):
        """-> str, absolute path of a file in the output folder"""
        return osp.join(self.f_out, fname)

    def manifest(self):
        """-> dict, manifest entries"""
        r = self.config.resolved()
        r[K.manifest_command] = self.COMMAND
        r[K.manifest_version] = increlearn.__version__
        r[K.manifest_out] = self.f_out
        if self.configfile:
            r[K.manifest_config] = F.absfile(self.configfile)
        return r

    def start(self):
        """
        Write the manifest, then run `execute`.

        Returns:
            list of str: artifacts reported by `execute`
        """
        U.dic2file(self.manifest(), self.path(self.F_MANIFEST),
                   header='increlearn %s run manifest' % self.COMMAND)
        self.log.info('manifest written to %s' % self.path(self.F_MANIFEST))
        try:
            r = self.execute() or []
        except Exception:
            self.log.error(U.lastError())
            raise
        self.log.info('%s finished; %i artifacts' % (self.COMMAND, len(r)))
        return r

    def execute(self):
        """Override! Returns list of written files."""
        raise NotImplementedError


######################
### Module testing ###
from increlearn import testing

class Test(testing.AutoTest):
    """Test RunTask"""

    TAGS = [ testing.NORMAL ]
    DEBUG = False

    def prepare(self):
        import tempfile
        self.f_project = tempfile.mkdtemp(prefix='test_runtask_')

    def cleanUp(self):
        if not self.DEBUG:
            F.tryRemove(self.f_project, tree=True)

    def test_runtask(self):
        from increlearn.config import RunConfig

        class EchoTask(RunTask):
            COMMAND = 'echo'
            def execute(self):
                with open(self.path('echo.txt'), 'w') as f:
                    f.write('echo\n')
                return [ self.path('echo.txt') ]

        out = osp.join(self.f_project, 'run', 'echo')
        t = EchoTask(out, RunConfig({'seed': '3'}))
        self.assertTrue(osp.exists(t.f_out), 'no output folder')
        self.assertTrue(osp.exists(t.path(t.F_LOG)), 'no log file')

        self.assertEqual(len(t.start()), 1)
        m = U.file2dic(t.path(t.F_MANIFEST))
        self.assertEqual(m['manifest.command'], 'echo')
        self.assertEqual(m['seed'], '3')

    def test_failing(self):
        class FailTask(RunTask):
            def execute(self):
                raise ValueError('failure')

        from increlearn.config import RunConfig
        t = FailTask(osp.join(self.f_project, 'fail'), RunConfig())
        self.assertRaises(ValueError, t.start)
        self.assertTrue(osp.exists(t.path(t.F_MANIFEST)))


if __name__ == '__main__':

    testing.localTest(debug=False)
