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


''' Versioned JSON records of forecaster parameters. '''


from . import __
from . import exceptions as _exceptions
from . import models as _models


FORMAT_VERSION = 1

_records_classes: __.cabc.Mapping[
    _models.ModelKind, type[ _models.Parameters ]
] = __.types.MappingProxyType( {
    _models.ModelKind.Linear: _models.LinearParams,
    _models.ModelKind.NLinear: _models.NLinearParams,
    _models.ModelKind.DLinear: _models.DLinearParams,
    _models.ModelKind.Persistence: _models.PersistenceParams,
} )


def render_params( params: _models.Parameters ) -> dict[ str, __.typx.Any ]:
    ''' Renders parameters as JSON-compatible record.

        Arrays are stored row-major with their shapes. Float values survive
        a round trip bit for bit.
    '''
    settings = params.survey_settings( )
    return {
        'format_version': FORMAT_VERSION,
        'kind': params.kind.value,
        'flattening': _models.FLATTENING,
        'lookback': settings[ 'lookback' ],
        'horizon': settings[ 'horizon' ],
        'channels': settings[ 'channels' ],
        'kernel': settings.get( 'kernel' ),
        'anchor': _render_anchor( settings.get( 'anchor', __.absent ) ),
        'arrays': {
            name: {
                'shape': list( array.shape ),
                'values': [ float( value ) for value in array.ravel( ) ],
            }
            for name, array in params.survey_arrays( ).items( ) },
    }


def restore_params(
    record: __.cabc.Mapping[ str, __.typx.Any ]
) -> _models.Parameters:
    ''' Restores parameters from JSON-compatible record. '''
    version = record.get( 'format_version' )
    if version != FORMAT_VERSION:
        raise _exceptions.CheckpointInvalidity(
            f"unsupported format version {version!r}" )
    if record.get( 'flattening' ) != _models.FLATTENING:
        raise _exceptions.CheckpointInvalidity(
            f"unsupported flattening {record.get( 'flattening' )!r}" )
    try:
        kind = _models.ModelKind( record[ 'kind' ] )
        settings: dict[ str, __.typx.Any ] = {
            name: int( record[ name ] )
            for name in ( 'lookback', 'channels', 'horizon' ) }
        arrays = {
            name: __.np.array(
                entry[ 'values' ], dtype = __.np.float64
            ).reshape( entry[ 'shape' ] )
            for name, entry in record[ 'arrays' ].items( ) }
    except ( KeyError, TypeError, ValueError ) as exc:
        raise _exceptions.CheckpointInvalidity( str( exc ) ) from exc
    match kind:
        case _models.ModelKind.NLinear | _models.ModelKind.Persistence:
            anchor = record.get( 'anchor' )
            settings[ 'anchor' ] = (
                __.absent if anchor is None else int( anchor ) )
        case _models.ModelKind.DLinear:
            settings[ 'kernel' ] = int( record[ 'kernel' ] )
        case _: pass
    try: return _records_classes[ kind ]( **settings, **arrays )
    except TypeError as exc:
        raise _exceptions.CheckpointInvalidity( str( exc ) ) from exc


def save_params(
    params: _models.Parameters, location: __.pathlib.Path
) -> None:
    ''' Saves parameters record to JSON file. '''
    location.parent.mkdir( parents = True, exist_ok = True )
    location.write_text(
        __.json.dumps( render_params( params ), indent = 2 ) + '\n',
        encoding = 'utf-8' )


def load_params( location: __.pathlib.Path ) -> _models.Parameters:
    ''' Loads parameters record from JSON file. '''
    if not location.is_file( ): raise _exceptions.DataAbsence( location )
    try:
        record = __.json.loads( location.read_text( encoding = 'utf-8' ) )
    except __.json.JSONDecodeError as exc:
        raise _exceptions.CheckpointInvalidity( str( exc ) ) from exc
    return restore_params( record )


def _render_anchor( anchor: __.Absential[ int ] ) -> int | None:
    return None if __.is_absent( anchor ) else anchor
