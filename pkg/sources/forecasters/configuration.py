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


''' Benchmark configuration from TOML files.

    Keys are flat and snake-cased. Per-model training overrides live in
    ``[training.<model>]`` tables. Relative paths resolve against the
    directory of the configuration file.
'''


from . import __
from . import dataio as _dataio
from . import exceptions as _exceptions
from . import metrics as _metrics
from . import models as _models
from . import training as _training


ANCHOR_NONE = 'none'

_training_names = frozenset(
    name for name in _training.SETTING_NAMES if name != 'seed' )
_general_names = frozenset( (
    'data', 'target', 'training_size', 'validation_size', 'test_size',
    'lookback', 'horizon', 'models', 'kernel', 'anchor', 'output', 'seed',
    'kl_reference_std', 'kl_direction', 'training',
) )
_scribe = __.provide_scribe( __name__ )


class BenchConfig( __.immut.DataclassObject ):
    ''' Everything needed to reproduce one benchmark run. '''

    data: __.pathlib.Path
    target: str
    splits: _dataio.SplitSpec
    models: tuple[ _models.ModelKind, ... ]
    output: __.pathlib.Path
    training: _training.TrainConfig
    overrides: __.immut.Dictionary[
        _models.ModelKind, __.immut.Dictionary[ str, __.typx.Any ] ]
    snapshot: __.typx.Annotated[
        str,
        __.typx.Doc( ''' Verbatim text of configuration source. ''' ),
    ] = ''
    lookback: int = 96
    horizon: int = 96
    kernel: int = 25
    anchor: __.typx.Annotated[
        __.Absential[ str ],
        __.typx.Doc( ''' Exogenous channel re-added by NLinear. ''' ),
    ] = __.absent
    seed: int = 0
    kl_reference_std: __.Absential[ float ] = __.absent
    kl_direction: _metrics.KlDirection = (
        _metrics.KlDirection.ForecastToObservation )

    def provide_training(
        self, kind: _models.ModelKind
    ) -> _training.TrainConfig:
        ''' Training configuration for model, with global seed. '''
        return self.training.with_overrides( {
            'seed': self.seed, **self.overrides.get( kind, { } ) } )

    def with_overrides(
        self,
        seed: __.Absential[ int ] = __.absent,
        output: __.Absential[ __.pathlib.Path ] = __.absent,
    ) -> __.typx.Self:
        ''' Replaces seed or output directory, as from command line. '''
        changes: dict[ str, __.typx.Any ] = { }
        if not __.is_absent( seed ):
            changes[ 'seed' ] = _validate_seed( seed )
        if not __.is_absent( output ): changes[ 'output' ] = output
        return __.dataclasses.replace( self, **changes )


def load_config(
    location: str | __.pathlib.Path,
    seed: __.Absential[ int ] = __.absent,
    output: __.Absential[ __.pathlib.Path ] = __.absent,
) -> BenchConfig:
    ''' Loads benchmark configuration from TOML file. '''
    location = __.pathlib.Path( location )
    if not location.is_file( ): raise _exceptions.DataAbsence( location )
    snapshot = location.read_bytes( ).decode( 'utf-8' )
    try: document = __.tomli.loads( snapshot )
    except __.tomli.TOMLDecodeError as exc:
        raise _exceptions.ConfigurationInvalidity(
            str( location ), str( exc ) ) from exc
    configuration = produce_config(
        document, snapshot = snapshot, base = location.parent.resolve( ) )
    _scribe.info( "Loaded benchmark configuration from '%s'.", location )
    return configuration.with_overrides( seed = seed, output = output )


def produce_config(
    document: __.cabc.Mapping[ str, __.typx.Any ],
    snapshot: str = '',
    base: __.pathlib.Path = __.pathlib.Path( ),
) -> BenchConfig:
    ''' Produces validated configuration from parsed document. '''
    for name in document:
        if name not in _general_names and name not in _training_names:
            raise _exceptions.ConfigurationInvalidity(
                name, 'unknown configuration entry' )
    models = _produce_models( document )
    try:
        splits = _dataio.SplitSpec.produce(
            _access_integer( document, 'training_size' ),
            _access_integer( document, 'validation_size' ),
            _access_integer( document, 'test_size' ) )
    except _exceptions.DimensionInvalidity as exc:
        raise _exceptions.ConfigurationInvalidity(
            exc.context[ 'dimension' ], 'must be positive' ) from exc
    training = _training.TrainConfig.produce( **{
        name: document[ name ]
        for name in _training_names if name in document } )
    overrides = _produce_overrides( document, training )
    kl_reference_std = _produce_reference_std( document )
    direction = document.get(
        'kl_direction', _metrics.KlDirection.ForecastToObservation.value )
    try: kl_direction = _metrics.KlDirection( direction )
    except ValueError as exc:
        raise _exceptions.ConfigurationInvalidity(
            'kl_direction', f"unknown direction {direction!r}" ) from exc
    return BenchConfig(
        data = _resolve_path( base, _access_text( document, 'data' ) ),
        target = _access_text( document, 'target' ),
        splits = splits,
        models = models,
        output = _resolve_path(
            base, _access_text( document, 'output', 'runs' ) ),
        training = training,
        overrides = overrides,
        snapshot = snapshot,
        lookback = _access_positive( document, 'lookback', 96 ),
        horizon = _access_positive( document, 'horizon', 96 ),
        kernel = _produce_kernel( document ),
        anchor = _produce_anchor( document ),
        seed = _validate_seed( _access_integer( document, 'seed', 0 ) ),
        kl_reference_std = kl_reference_std,
        kl_direction = kl_direction )


def _access_integer(
    document: __.cabc.Mapping[ str, __.typx.Any ],
    name: str,
    default: __.Absential[ int ] = __.absent,
) -> int:
    value = _access( document, name, default )
    if isinstance( value, bool ) or not isinstance( value, int ):
        raise _exceptions.ConfigurationInvalidity(
            name, f"expected an integer; received {value!r}" )
    return value


def _access_positive(
    document: __.cabc.Mapping[ str, __.typx.Any ], name: str, default: int
) -> int:
    value = _access_integer( document, name, default )
    if value < 1:
        raise _exceptions.ConfigurationInvalidity( name, 'must be positive' )
    return value


def _access_text(
    document: __.cabc.Mapping[ str, __.typx.Any ],
    name: str,
    default: __.Absential[ str ] = __.absent,
) -> str:
    value = _access( document, name, default )
    if not isinstance( value, str ) or not value:
        raise _exceptions.ConfigurationInvalidity(
            name, f"expected non-empty text; received {value!r}" )
    return value


def _access(
    document: __.cabc.Mapping[ str, __.typx.Any ],
    name: str,
    default: __.Absential[ __.typx.Any ],
) -> __.typx.Any:
    if name in document: return document[ name ]
    if __.is_absent( default ):
        raise _exceptions.ConfigurationInvalidity( name, 'entry is missing' )
    return default


def _produce_anchor(
    document: __.cabc.Mapping[ str, __.typx.Any ]
) -> __.Absential[ str ]:
    anchor = _access_text( document, 'anchor', ANCHOR_NONE )
    if anchor == ANCHOR_NONE: return __.absent
    if anchor == document.get( 'target' ):
        raise _exceptions.ConfigurationInvalidity(
            'anchor', 'target channel cannot anchor forecasts' )
    return anchor


def _produce_kernel( document: __.cabc.Mapping[ str, __.typx.Any ] ) -> int:
    kernel = _access_integer( document, 'kernel', 25 )
    if kernel < 1 or kernel % 2 == 0:
        raise _exceptions.ConfigurationInvalidity(
            'kernel', 'must be odd and positive' )
    return kernel


def _produce_models(
    document: __.cabc.Mapping[ str, __.typx.Any ]
) -> tuple[ _models.ModelKind, ... ]:
    names = _access( document, 'models', __.absent )
    if isinstance( names, str ) or not isinstance( names, list ) or (
        not names
    ):
        raise _exceptions.ConfigurationInvalidity(
            'models', 'expected a non-empty list of model names' )
    kinds: list[ _models.ModelKind ] = [ ]
    for name in names:
        try: kind = _models.ModelKind( name )
        except ValueError as exc:
            raise _exceptions.ConfigurationInvalidity(
                'models', f"unknown model {name!r}" ) from exc
        if kind in kinds:
            raise _exceptions.ConfigurationInvalidity(
                'models', f"model {name!r} listed twice" )
        kinds.append( kind )
    return tuple( kinds )


def _produce_overrides(
    document: __.cabc.Mapping[ str, __.typx.Any ],
    training: _training.TrainConfig,
) -> __.immut.Dictionary[
    _models.ModelKind, __.immut.Dictionary[ str, __.typx.Any ]
]:
    tables = document.get( 'training', { } )
    if not isinstance( tables, dict ):
        raise _exceptions.ConfigurationInvalidity(
            'training', 'expected tables keyed by model name' )
    overrides: dict[
        _models.ModelKind, __.immut.Dictionary[ str, __.typx.Any ]
    ] = { }
    for name, table in tables.items( ):
        entry = f"training.{name}"
        try: kind = _models.ModelKind( name )
        except ValueError as exc:
            raise _exceptions.ConfigurationInvalidity(
                entry, 'unknown model' ) from exc
        if not kind.trainable or not isinstance( table, dict ):
            raise _exceptions.ConfigurationInvalidity(
                entry, 'expected training settings of a trainable model' )
        for setting in table:
            if setting not in _training_names:
                raise _exceptions.ConfigurationInvalidity(
                    f"{entry}.{setting}", 'unknown training setting' )
        training.with_overrides( table )
        overrides[ kind ] = __.immut.Dictionary( table )
    return __.immut.Dictionary( overrides )


def _produce_reference_std(
    document: __.cabc.Mapping[ str, __.typx.Any ]
) -> __.Absential[ float ]:
    if 'kl_reference_std' not in document: return __.absent
    value = document[ 'kl_reference_std' ]
    if isinstance( value, bool ) or not isinstance( value, ( int, float ) ):
        raise _exceptions.ConfigurationInvalidity(
            'kl_reference_std', f"expected a number; received {value!r}" )
    if not value > 0.0:
        raise _exceptions.ConfigurationInvalidity(
            'kl_reference_std', 'must be positive' )
    return float( value )


def _resolve_path( base: __.pathlib.Path, value: str ) -> __.pathlib.Path:
    path = __.pathlib.Path( value ).expanduser( )
    return path if path.is_absolute( ) else base / path


def _validate_seed( seed: int ) -> int:
    if seed < 0:
        raise _exceptions.ConfigurationInvalidity(
            'seed', 'must not be negative' )
    return seed
