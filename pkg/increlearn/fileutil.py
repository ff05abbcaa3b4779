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

"""File and folder helpers shared by data files, snapshots and run folders"""

import os.path as osp
import os
import shutil
import logging

from increlearn import util

class UtilError( Exception ):
    pass


def absfile( filename, resolveLinks=True, cwd=None ):
    """
    Absolute, user-expanded path of a file or folder.

    Relative names are resolved against `cwd` (default: the current working
    directory), so that paths in a configuration file can be given relative
    to the folder of that file.

    Args:
        filename (str): file or folder name
        resolveLinks (bool): also resolve symbolic links (default: True)
        cwd (str): folder for relative names

    Returns:
        str: absolute path; empty input is returned unchanged

    Raises:
        UtilError: if a ~user part cannot be expanded
    """
    if not filename:
        return filename

    r = osp.expanduser( filename )
    if '~' in r:
        raise UtilError( 'Could not expand user home in %s' % filename )

    r = osp.abspath( osp.join( cwd, r ) if cwd else r )
    return osp.realpath( r ) if resolveLinks else r


def existingFile( filename, cwd=None, errmsg='' ):
    """
    `absfile` of an input file that must exist.

    Raises:
        FileNotFoundError: if there is no such file
    """
    r = absfile( filename, cwd=cwd )
    if not osp.exists( r ):
        raise FileNotFoundError( (errmsg or 'Cannot find file: ') + r )
    return r


def ensureFolder( folder ):
    """
    Create a folder including its parents unless it exists already.

    Returns:
        str: absolute path of the folder
    """
    r = absfile( folder )
    if not osp.isdir( r ):
        logging.info( 'Creating new folder ' + r )
        os.makedirs( r, exist_ok=True )
    return r


def testRoot( fname='' ):
    """
    Path of a fixture file in the increlearn/testdata folder.

    Args:
        fname (str): file within the test data folder

    Returns:
        str: absolute path
    """
    return osp.join( osp.dirname( absfile( __file__ ) ), 'testdata', fname )


def tryRemove( f, verbose=False, tree=False ):
    """
    Remove a file (or, with `tree`, a whole folder) if possible.

    Returns:
       bool: True if something was removed
    """
    try:
        f = absfile( f )
        if osp.isdir( f ):
            if not tree:
                logging.error( '%r is a folder - not removed.' % f )
                return False
            shutil.rmtree( f )
        else:
            os.remove( f )
        return True
    except OSError:
        if verbose:
            logging.warning( 'Cannot remove %r:\n%s' % (f, util.lastError()) )
        return False


def sameContent( f1, f2 ):
    """
    Returns:
        bool: True if both files exist and are byte-identical
    """
    if not (osp.isfile( f1 ) and osp.isfile( f2 )):
        return False
    with open( f1, 'rb' ) as h1, open( f2, 'rb' ) as h2:
        return h1.read() == h2.read()


######################
### Module testing ###
from increlearn import testing

class Test(testing.AutoTest):
    """Test fileutil"""

    TAGS = [ testing.NORMAL ]

    def prepare( self ):
        import tempfile
        self.f_project = tempfile.mkdtemp( prefix='test_fileutil_' )

    def cleanUp( self ):
        tryRemove( self.f_project, tree=True )

    def test_absfile( self ):
        """fileutil.absfile with home and relative folder"""
        r = absfile( '~/nonexistent/../subfolder/file.txt', resolveLinks=False )
        self.assertEqual( r, osp.join( osp.expanduser('~'), 'subfolder',
                                       'file.txt' ) )

        r = absfile( 'data/train.txt', resolveLinks=False, cwd='/tmp/run' )
        self.assertEqual( r, '/tmp/run/data/train.txt' )
        self.assertEqual( absfile( '' ), '' )

    def test_existingFile( self ):
        """fileutil.existingFile / testRoot"""
        self.assertTrue( osp.isfile( existingFile( testRoot( 'small.cfg' ) ) ) )
        with self.assertRaises( FileNotFoundError ):
            existingFile( 'missing.cfg', cwd=self.f_project )

    def test_ensureFolder( self ):
        """fileutil.ensureFolder / sameContent / tryRemove"""
        r = ensureFolder( osp.join( self.f_project, 'a', 'b' ) )
        self.assertTrue( osp.isdir( r ) )
        self.assertEqual( ensureFolder( r ), r )

        f1, f2 = osp.join( r, 'x.txt' ), osp.join( r, 'y.txt' )
        for f in (f1, f2):
            with open( f, 'w' ) as h:
                h.write( 'same\n' )
        self.assertTrue( sameContent( f1, f2 ) )
        self.assertFalse( sameContent( f1, osp.join( r, 'missing.txt' ) ) )

        self.assertFalse( tryRemove( r ) )
        self.assertTrue( tryRemove( f1 ) )
        self.assertFalse( tryRemove( f1 ) )
        self.assertTrue( tryRemove( osp.join( self.f_project, 'a' ), tree=True ) )
        self.assertFalse( osp.exists( r ) )

if __name__ == '__main__':

    testing.localTest()
