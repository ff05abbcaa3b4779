#!/usr/bin/env python3

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

'''
Automatic package testing
==========================

Self-contained extension of the standard unittest framework:

* automatic collection of test cases from all modules of a package
* filtering of test cases by 'tags' (e.g. skip LONG running experiments)
* every module runs its own tests when executed stand-alone
* test variables are pushed into the global name space for debugging
* this module doubles as the script that runs the whole test suite

Every module of increlearn ends with a ``Test`` class derived from
`AutoTest`. `AutoTestLoader` collects all these classes into a
`FilteredTestSuite`. Calling `localTest` from the ``__main__`` section of a
module runs only the tests of that module and afterwards pushes all
``self.*`` fields of the test instance into the interactive name space.

Property-based checks use hypothesis. The ``increlearn`` hypothesis profile
(no deadline, derandomized) is loaded on import so that test runs are
reproducible and not flagged for slow numpy start-up.

Usage::

    class Test(testing.AutoTest):
        """Test MyModule"""

        TAGS = [ testing.LONG ]

        def test_convergence( self ):
            """MyModule.converge test"""
            self.result = converge()
            if self.local:   ## only if the module is executed directly
                print( self.result )
            self.assertAlmostEqual( self.result, 42. )

    if __name__ == '__main__':
        testing.localTest()

Run this module without arguments for help on the test script.
'''

import unittest as U
import importlib
import inspect
import glob
import os.path
import logging
import sys
import time

from hypothesis import settings, HealthCheck

## CONFIGURATION

#: packages from which test cases are collected by default (-p)
DEFAULT_PACKAGES = ['increlearn', 'increlearn.scripts']

#: tests with the following tags are excluded by default (override with -e)
DEFAULT_EXCLUDE  = ['old', 'extra']

## END OF CONFIGURATION

## categories
NORMAL = 0  ## standard test case
LONG   = 1  ## long running test case (acceptance level experiments)
EXTRA  = 4  ## tests not routinely run
OLD    = 5  ## is obsolete
SCRIPT = 6  ## a script test case
FAILS  = 7  ## test known to currently fail

settings.register_profile( 'increlearn', deadline=None, derandomize=True,
                           suppress_health_check=[HealthCheck.too_slow] )
settings.load_profile( 'increlearn' )
class AutoTestError( Exception ):
    pass


def packageRoot():
    """
    Returns:
        str: absolute path of the folder containing the increlearn package
    """
    ## no package imports here; every module imports testing at load time
    here = os.path.dirname( os.path.realpath( __file__ ) )
    return os.path.dirname( here )


#########################
### Core test library ###

class AutoTest( U.TestCase ):
    """
    Base class for test cases.

    AutoTest adds to ``unittest.TestCase``:

      - ``self.local`` tells whether the test runs in the __main__ scope of
        its own module or as part of the whole suite.
      - the static ``TAGS`` field classifies the test case (`NORMAL`,
        `LONG`, `SCRIPT`, ...) for filtering by the test runner.
      - `prepare` and `cleanUp` hooks; cleanUp is skipped in `DEBUG` mode
        so that temporary output can be inspected.
    """
    #: categories for which this test case qualifies (class-wide)
    TAGS  = [ NORMAL ]

    #: debug mode -- don't delete temporary data
    DEBUG = False

    #: File handle for system-wide test log
    TESTLOG = sys.stdout

    #: System-wide verbosity level
    VERBOSITY = 2

    def prepare(self):
        """Hook for test setup."""
        pass

    def cleanUp( self ):
        """Hook for post-test clean up; skipped if DEBUG==True."""
        pass

    def setUp( self ):
        self.local = self.__module__ == '__main__'
        self.prepare()

    def tearDown( self ):
        if not self.DEBUG:
            self.cleanUp()


def isTestClass( c ):
    """
    True if class `c` derives from `AutoTest`. Compares class names along the
    MRO, as a module running as __main__ sees its own copy of this module.
    """
    if not (type(c) is type and issubclass( c, U.TestCase )):
        return False
    return 'AutoTest' in [ b.__name__ for b in c.__mro__[1:] ]


class FilteredTestSuite( U.TestSuite ):
    """
    TestSuite that drops AutoTests carrying a forbidden tag or, if
    `allowed` is given, none of the allowed tags.
    """

    def __init__( self, tests=(), allowed=(), forbidden=() ):
        self._allowed   = list( allowed )
        self._forbidden = list( forbidden )
        U.TestSuite.__init__( self, tests=tests )

    def accepts( self, test ):
        tags = set( test.TAGS )
        if tags & set( self._forbidden ):
            return False
        return not self._allowed or bool( tags & set( self._allowed ) )

    def addTest( self, test ):
        if not isTestClass( type(test) ):
            raise AutoTestError( 'FilteredTestSuite only accepts AutoTest '
                                 'instances, not %r' % test )
        if self.accepts( test ):
            U.TestSuite.addTest( self, test )


class PrettyTextTestResult( U.TextTestResult ):
    """
    One line per test: the test id without package prefix, padded with dots,
    and the run time of tests taking longer than half a second.
    """

    def getDescription(self, test):
        return test.id().split( '.', 1 )[-1]

    def startTest(self, test):
        U.TestResult.startTest(self, test)
        self._newline = False
        self.startclock = time.time()
        if self.showAll:
            self.stream.write( self.getDescription(test).ljust(62, '.') + ' ' )
            self.stream.flush()

    def addSuccess(self, test):
        U.TestResult.addSuccess(self, test)
        dt = time.time() - self.startclock
        if self.showAll:
            self.stream.writeln( 'ok  [%5.2fs]' % dt if dt > 0.5 else 'ok' )
        elif self.dots:
            self.stream.write('.')
            self.stream.flush()


class AutoTestLoader( object ):
    """
    Collects the AutoTests of whole packages and runs them.

    Args:
        log (file): output stream of the test runner [STDOUT]
        allowed (list of int): tags required for a test to be run
        forbidden (list of int): tags excluding a test
        verbosity (int): verbosity level of the test runner
        debug (bool): skip clean up of temporary data
    """

    def __init__( self, log=sys.stdout,
                  allowed=(), forbidden=(), verbosity=2, debug=False ):
        self.log = log
        self.verbosity = verbosity
        self.debugging = debug
        self.suite = FilteredTestSuite( allowed=allowed, forbidden=forbidden )
        self.modules_untested = []
        self.modules_tested = []
        self.result = U.TestResult()

    def modulesFromPath( self, path=None, module='' ):
        """
        Import the python files of one package folder (not recursive).
        Files starting with '_' are skipped; import failures are logged.

        Args:
            path (str): folder containing the package [packageRoot()]
            module (str): dotted package name, e.g. 'increlearn.scripts'

        Returns:
            list of module: imported modules
        """
        folder = os.path.join( path or packageRoot(), *module.split('.') )
        names = sorted( os.path.splitext( os.path.basename(f) )[0]
                        for f in glob.glob( os.path.join( folder, '*.py' ) ) )

        r = []
        for name in names:
            if name.startswith('_'):
                continue
            try:
                r += [ importlib.import_module( '%s.%s' % (module, name) ) ]
            except Exception as why:
                logging.error( 'Import failure in %s: %r' % (name, why) )
        return r

    def addTestsFromModules( self, modules ):
        """
        Add the AutoTest classes defined (not merely imported) in each
        module to the suite.
        """
        for m in modules:
            classes = [ c for c in vars(m).values()
                        if isTestClass( c ) and c.__module__ == m.__name__ ]
            for c in classes:
                self.suite.addTests( U.defaultTestLoader.loadTestsFromTestCase(c) )

            (self.modules_tested if classes else self.modules_untested).append(m)

    def collectTests( self, path=None, module='' ):
        self.addTestsFromModules( self.modulesFromPath( path=path,
                                                        module=module ) )

    def report( self ):
        """Print untested modules and a pass / fail summary to stdout."""
        total  = self.result.testsRun
        problems = self.result.failures + self.result.errors

        print('\nModules without test case: %i of %i' %
              (len(self.modules_untested),
               len(self.modules_tested) + len(self.modules_untested)))
        for m in self.modules_untested:
            print('\t', m.__name__)

        print('\nSUMMARY: %i tests from %i modules; %i passed, %i failed' %
              (total, len(self.modules_tested), total - len(problems),
               len(problems)))
        for test, trace in self.result.failures:
            print('      - failed: %s' % test.id())
        for test, trace in self.result.errors:
            print('      - error : %s' % test.id())

    def run( self, dry=False ):
        """
        Args:
            dry (bool): only collect, do not run the tests
        """
        for test in self.suite:
            test.DEBUG = self.debugging
            test.VERBOSITY = self.verbosity
            test.TESTLOG = self.log

        runner = U.TextTestRunner( self.log, verbosity=self.verbosity,
                                   descriptions=False,
                                   resultclass=PrettyTextTestResult )
        if not dry:
            self.result = runner.run( self.suite )

#########################
### Helper functions ####

def getOuterNamespace():
    """
    Returns:
        dict: globals of the outermost frame on the call stack
    """
    frame = inspect.currentframe()
    try:
        while frame.f_back is not None:
            frame = frame.f_back
        return frame.f_globals
    finally:
        del frame


def extractTestCases( namespace ):
    """
    Returns:
        list of class: all AutoTest classes of a namespace
    Raises:
        AutoTestError: if there is none
    """
    r = [ i for i in namespace.values() if isTestClass( i ) ]
    if not r:
        raise AutoTestError('no AutoTest class found in namespace')
    return r


def localTest( testclass=None, verbosity=AutoTest.VERBOSITY,
               debug=AutoTest.DEBUG, log=AutoTest.TESTLOG ):
    """
    Run the AutoTest(s) of the calling module, then push the fields of each
    test instance (and the instance itself as ``self``) into the global
    namespace for interactive inspection.

    Args:
        testclass (class): AutoTest-derived class [default: all found]
        verbosity (int): verbosity level of TextTestRunner
        debug (bool): don't delete temporary files (skip cleanUp)

    Returns:
        unittest.TestResult: the test result object
    """
    outer = getOuterNamespace()
    testclasses = [testclass] if testclass else extractTestCases( outer )

    tests = []
    for c in testclasses:
        tests += list( U.TestLoader().loadTestsFromTestCase(c) )

    for test in tests:
        test.DEBUG = debug
        test.VERBOSITY = verbosity
        test.TESTLOG = log

    ## the suite drops its tests after the run; keep them for inspection
    r = U.TextTestRunner( verbosity=verbosity ).run( U.TestSuite( tests ) )

    for t in tests:
        outer.update( t.__dict__ )
        outer['self'] = t

    return r


################################
### Script-related functions ###

_TAGS = {'normal':NORMAL, 'long':LONG, 'extra':EXTRA, 'old':OLD,
         'script':SCRIPT, 'fails':FAILS}

def _use( defaults ):
    print("""
Run the tests of the increlearn package.

    testing.py [-i |include tag1 tag2..| -e |exclude tag1 tag2..|
                -p |package1 package2..| -v |verbosity| -log |log-file|
                -debug -dry ]

    i    - include tags, only run tests with at least one of these tags   [All]
    e    - exclude tags, do not run tests labeled with one of these tags
           (normal, long, script, extra, old, fails)
    p    - packages to test                                                [All]
    v    - int, verbosity level                                             [2]
    log  - path to logfile (appended); empty -log means STDOUT         [STDOUT]
    debug- do not clean up temporary files                              [False]
    dry  - do not actually run the test but just collect tests          [False]

Example, everything except the long running experiments:

    testing.py -e old extra long

Default options:
""")
    for key, value in defaults.items():
        print("\t-%s \t%r" % (key,value))

    sys.exit(0)


def _str2tags( s ):
    """tag names -> list of tag constants; unknown names are logged"""
    r = []
    for x in s:
        if x and x.lower() not in _TAGS:
            logging.error('unrecognized tag: %r' % x)
        elif x:
            r += [ _TAGS[ x.lower() ] ]
    return r

def _convertOptions( o ):
    from increlearn import util
    o['i'] = _str2tags( util.tolist( o['i'] ) )
    o['e'] = _str2tags( util.tolist( o['e'] ) )
    o['v'] = int( o['v'] )
    o['dry'] = ('dry' in o)
    o['debug'] = ('debug' in o)
    o['log'] = open( o['log'], 'a' ) if o['log'] else AutoTest.TESTLOG
    o['p'] = util.tolist( o['p'] )

############
### MAIN ###

if __name__ == '__main__':

    from increlearn import util

    defaults = {'i':'',
                'e': DEFAULT_EXCLUDE,
                'p': DEFAULT_PACKAGES,
                'v':'2',
                'log': '',
                }

    o = util.cmdDict( defaults )

    if len( sys.argv ) == 1 and 'testing.py' in sys.argv[0]:
        _use( defaults )

    _convertOptions( o )

    AutoTest.VERBOSITY = o['v']
    AutoTest.DEBUG = o['debug']

    l = AutoTestLoader( allowed=o['i'], forbidden=o['e'],
                        verbosity=o['v'], log=o['log'], debug=o['debug'])

    for package in o['p']:
        print('collecting ', repr( package ))
        l.collectTests( module=package )

    l.run( dry=o['dry'] )
    l.report()

    ## non-0 exit code on any failure, for CI
    sys.exit( 0 if l.result.wasSuccessful() and l.result.testsRun > 0 else 1 )
