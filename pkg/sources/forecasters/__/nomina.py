# vim: set filetype=python fileencoding=utf-8:
# -*- coding: utf-8 -*-

#============================================================================#
#                                                                            #
#  Licensed under the Apache License, Version 2.0 (the "License");           #
#  you may not use this file except in compliance with the License.          #
#  You may obtain a copy of the License at                                   #
#                                                                            #
#      http://www.apache.org/licenses/LICENSE-2.0                            #
#                                                                            #
#  Unless required by applicable law or agreed to in writing, software       #
#  distributed under the License is distributed on an "AS IS" BASIS,         #
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  #
#  See the License for the specific language governing permissions and       #
#  limitations under the License.                                            #
#                                                                            #
#============================================================================#


''' Common names and type aliases. '''


from . import imports as __


Array: __.typx.TypeAlias = __.npt.NDArray[ __.np.float64 ]
IndexArray: __.typx.TypeAlias = __.npt.NDArray[ __.np.int64 ]
NominativeArguments: __.typx.TypeAlias = __.cabc.Mapping[ str, __.typx.Any ]


package_name = __name__.split( '.', maxsplit = 1 )[ 0 ]


def provide_scribe( name: str = package_name ) -> __.logging.Logger:
    ''' Provides logger for package or module. '''
    return __.logging.getLogger( name )
