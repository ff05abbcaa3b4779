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

VERSION = (0,3,0)

__version__ = __VERSION__ = '.'.join([ str(i) for i in VERSION])

## documentation hints:
## * napoleon sphinx extension for readable docstrings:
##   http://www.sphinx-doc.org/en/stable/ext/napoleon.html
## * .. default-role:: any
##   activates much more convenient ref / linking to methods and classes
