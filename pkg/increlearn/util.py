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

"""General purpose helpers: option files, command line, seeds"""

import sys
import traceback

import numpy as N

class ParsingError(Exception):
    pass

def tolist(x):
    """wrap x into a list unless it is a list or tuple already"""
    return x if type(x) in [list, tuple] else [x]


def intfloat2int(x):
    """1.0 -> 1; anything else is returned unchanged"""
    if type(x) is float and x.is_integer():
        return int(x)
    return x

def lastError():
    """
    Describe the exception that is currently being handled.

    Returns:
        str: '<ExceptionType> in <file> line <lineNumber>:<arguments>.'
    """
    etype, why, trace = sys.exc_info()
    if trace is None:
        return ''
    fname, lineno = traceback.extract_tb(trace)[-1][:2]
    return "%s in %s line %i:\n\t%s." % (etype.__name__, fname, lineno,
                                          getattr(why, 'args', why))

def scriptusage(options={}, doc='', minargs=1, exit=True, force=False):
    """
    Print the usage text of a script (and exit) if the command line holds
    fewer than `minargs` arguments.

    Args:
        options (dict): default options listed below the usage text
        doc (str): usage text
        minargs (int): arguments expected besides the script name
        exit (bool): exit with code 1 after printing
        force (bool): print no matter what the command line looks like
    """
    if len(sys.argv) > minargs and not force:
        return

    print(doc)

    if options:
        print('Default options:\n')
        for key, value in options.items():
            print("\t-%s\t%s" % (key, value))

    if exit:
        sys.exit(1)


def file2dic( filename ):
    """
    Parse a key - value file into a dictionary.

    One entry per line, ``key value [value ...]``; a '#' starts a comment.
    Several values become a list of str, a key without value maps to ''.

    Args:
        filename (str): name of file

    Returns:
        dict: {str : str or [str]}

    Raises:
        ParsingError: if a line cannot be read
        IOError: if the file can't be opened
    """
    result = {}
    lineno = 0
    with open( filename ) as f:
        try:
            for lineno, line in enumerate( f, 1 ):
                tokens = line.split('#', 1)[0].split()
                if not tokens:
                    continue
                key, values = tokens[0], tokens[1:]
                if len( values ) > 1:
                    result[ key ] = values
                else:
                    result[ key ] = values[0] if values else ''
        except UnicodeDecodeError as why:
            raise ParsingError( 'Error parsing option file %s line %i: %s'
                                % (filename, lineno, why) )
    return result


def dic2file( d, filename, header='' ):
    """
    Write a dictionary as key - value file that `file2dic` reads back.
    Keys are sorted so that the output is reproducible.

    Args:
        d (dict): {str : str or number or list}
        filename (str): target file (will be overwritten)
        header (str): optional comment line(s) written at the top
    """
    with open( filename, 'w' ) as f:
        for line in header.splitlines():
            f.write( '# %s\n' % line )
        for key in sorted( d ):
            value = d[key]
            if type(value) in [list, tuple]:
                value = ' '.join( [ str(v) for v in value ] )
            f.write( '%s %s\n' % (key, value) )


def get_cmdDict(lst_cmd, dic_default):
    """
    Parse command line options into a ``{<option> : <value>}`` dictionary.

    Options start with one or more '-' (so ``--seed`` and ``-seed`` are the
    same). Following values are attached to the latest option; several
    values become a list. Values before the first option (e.g. a
    sub-command) are collected under the key ''. ``-x <file>`` reads
    further options from a key - value file; the command line wins over the
    file, which wins over `dic_default`.

    Args:
        lst_cmd (list of str): e.g. ['train', '--config', 'run.cfg']
        dic_default (dict): default options; e.g. {'out':'results'}

    Returns:
        dict: e.g. {'':'train', 'config':'run.cfg', 'out':'results'}
    """
    dic_cmd = {}
    option = ''

    for cmd in lst_cmd:
        if cmd[:1] == '-':
            option = cmd.lstrip('-')
            dic_cmd[option] = ''
        elif option not in dic_cmd or dic_cmd[option] == '':
            dic_cmd[option] = cmd
        else:
            dic_cmd[option] = tolist( dic_cmd[option] ) + [cmd]

    if 'x' in dic_cmd:
        d = file2dic( dic_cmd['x'] )
        d.update( dic_cmd )
        dic_cmd = d

    r = dict( dic_default )
    r.update( dic_cmd )
    return r


def cmdDict( defaultDic={} ):
    """
    `get_cmdDict` applied to sys.argv[1:].

    Example:
      'sweep --config run.cfg --seed 7' becomes
      {'':'sweep', 'config':'run.cfg', 'seed':'7'}
    """
    return get_cmdDict( sys.argv[1:], defaultDic )


def derive_seed( *keys ):
    """
    Derive a reproducible 64 bit seed from a base seed and any number of
    further integer keys (e.g. cell parameters and run index). The
    derivation is stable across platforms and python sessions.

    Args:
        keys (int): base seed followed by integer keys
    Returns:
        int: seed in [0, 2**64)
    """
    entropy = [ int(k) for k in keys ]
    if min( entropy + [0] ) < 0:
        raise ValueError('seed keys must be non-negative: %r' % (keys,))
    state = N.random.SeedSequence( entropy ).generate_state( 1, N.uint64 )
    return int( state[0] )


######################
### Module testing ###
from increlearn import testing

class Test(testing.AutoTest):
    """Test util"""

    TAGS = [ testing.NORMAL ]

    def prepare( self ):
        import tempfile
        self.f_cfg = tempfile.mktemp( prefix='test_util_', suffix='.cfg' )

    def cleanUp( self ):
        from increlearn import fileutil as F
        F.tryRemove( self.f_cfg )

    def test_cmdDict( self ):
        """util.get_cmdDict test"""
        r = get_cmdDict( ['sweep', '--config', 'run.cfg', '-seed', '7',
                          '--values', '1', '2', '3', '-debug'],
                         {'out':'results'} )
        self.assertEqual( r[''], 'sweep' )
        self.assertEqual( r['config'], 'run.cfg' )
        self.assertEqual( r['seed'], '7' )
        self.assertEqual( r['values'], ['1', '2', '3'] )
        self.assertEqual( r['debug'], '' )
        self.assertEqual( r['out'], 'results' )

    def test_file2dic( self ):
        """util.dic2file / file2dic test"""
        d = {'train.learning_rate': 0.0005, 'sweep.s_values': [5, 20, 35],
             'flag': ''}
        dic2file( d, self.f_cfg, header='test config' )
        r = file2dic( self.f_cfg )

        self.assertEqual( r['train.learning_rate'], '0.0005' )
        self.assertEqual( r['sweep.s_values'], ['5', '20', '35'] )
        self.assertEqual( r['flag'], '' )
        self.assertEqual( len( r ), 3 )

    def test_lastError( self ):
        """util.lastError test"""
        self.assertEqual( lastError(), '' )
        try:
            raise ParsingError( 'bad line' )
        except ParsingError:
            r = lastError()
        self.assertTrue( r.startswith( 'ParsingError in' ) )
        self.assertTrue( 'bad line' in r )

    def test_intfloat2int( self ):
        self.assertEqual( intfloat2int( 2.0 ), 2 )
        self.assertEqual( intfloat2int( 2.5 ), 2.5 )
        self.assertEqual( intfloat2int( 'a' ), 'a' )

    def test_derive_seed( self ):
        """util.derive_seed test"""
        self.assertEqual( derive_seed(42, 5, 100, 0), derive_seed(42, 5, 100, 0))
        self.assertNotEqual( derive_seed(42, 5, 100, 0),
                             derive_seed(42, 5, 100, 1) )
        self.assertTrue( 0 <= derive_seed(2**63, 1) < 2**64 )
        self.assertRaises( ValueError, derive_seed, -1 )

if __name__ == '__main__':

    testing.localTest()
