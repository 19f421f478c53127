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


''' Series ingestion, splits, normalization, and sliding windows.

    Windows follow the exogenous-only rule: model inputs hold every channel
    except the target, while targets hold only the target channel. Every
    window lies entirely inside one split.
'''


from . import __
from . import exceptions as _exceptions


_scribe = __.provide_scribe( __name__ )


class SeriesFrame( __.immut.DataclassObject ):
    ''' Multivariate series with designated target channel. '''

    timestamps: __.npt.NDArray[ __.np.datetime64 ]
    values: __.Array
    channel_names: tuple[ str, ... ]
    target_index: int

    @classmethod
    def produce(
        cls,
        timestamps: __.npt.ArrayLike,
        values: __.npt.ArrayLike,
        channel_names: __.cabc.Sequence[ str ],
        target_name: str,
        location: str = 'series',
    ) -> __.typx.Self:
        ''' Produces validated frame from in-memory data. '''
        stamps = __.np.array( timestamps, dtype = 'datetime64[ns]' )
        matrix = __.np.array( values, dtype = __.np.float64 )
        names = tuple( channel_names )
        if matrix.ndim != 2 or matrix.shape != ( stamps.size, len( names ) ):
            raise _exceptions.ShapeIncompatibility(
                'series values', ( stamps.size, len( names ) ),
                matrix.shape )
        _validate_uniqueness( names, location )
        _validate_ordering( stamps, location )
        _validate_finitude( matrix, names, location )
        if target_name not in names:
            raise _exceptions.ChannelAbsence( target_name, location )
        matrix.setflags( write = False )
        stamps.setflags( write = False )
        return cls(
            timestamps = stamps,
            values = matrix,
            channel_names = names,
            target_index = names.index( target_name ) )

    @property
    def length( self ) -> int:
        ''' Number of time steps. '''
        return int( self.values.shape[ 0 ] )

    @property
    def exogenous_indices( self ) -> tuple[ int, ... ]:
        ''' Column indices of all channels except the target. '''
        return tuple(
            index for index in range( len( self.channel_names ) )
            if index != self.target_index )

    @property
    def target_name( self ) -> str:
        ''' Name of target channel. '''
        return self.channel_names[ self.target_index ]

    def locate_exogenous( self, name: str ) -> int:
        ''' Position of named channel among exogenous inputs. '''
        exogenous = tuple(
            self.channel_names[ index ] for index in self.exogenous_indices )
        if name not in exogenous:
            raise _exceptions.ChannelAbsence( name, 'exogenous channels' )
        return exogenous.index( name )


class SplitSpec( __.immut.DataclassObject ):
    ''' Row counts of contiguous training, validation, and test splits. '''

    training_size: int
    validation_size: int
    test_size: int

    @classmethod
    def produce(
        cls, training_size: int, validation_size: int, test_size: int
    ) -> __.typx.Self:
        ''' Produces split specification with positive counts. '''
        for name, value in (
            ( 'training_size', training_size ),
            ( 'validation_size', validation_size ),
            ( 'test_size', test_size ),
        ):
            if value < 1:
                raise _exceptions.DimensionInvalidity( name, value )
        return cls(
            training_size = training_size,
            validation_size = validation_size,
            test_size = test_size )

    @property
    def total( self ) -> int:
        ''' Rows consumed by all splits. '''
        return self.training_size + self.validation_size + self.test_size


class SplitView( __.immut.DataclassObject ):
    ''' Contiguous row range of a frame. '''

    name: str
    frame: SeriesFrame
    start: int
    stop: int

    @property
    def length( self ) -> int:
        ''' Number of rows in split. '''
        return self.stop - self.start

    @property
    def timestamps( self ) -> __.npt.NDArray[ __.np.datetime64 ]:
        ''' Timestamps of rows in split. '''
        return self.frame.timestamps[ self.start : self.stop ]

    @property
    def values( self ) -> __.Array:
        ''' Channel values of rows in split. '''
        return self.frame.values[ self.start : self.stop ]


class Splits( __.immut.DataclassObject ):
    ''' Training, validation, and test views, in time order. '''

    training: SplitView
    validation: SplitView
    test: SplitView

    def survey( self ) -> tuple[ SplitView, SplitView, SplitView ]:
        ''' Views in time order. '''
        return ( self.training, self.validation, self.test )


class NormStats( __.immut.DataclassObject ):
    ''' Per-channel location and scale fitted on training rows. '''

    means: __.Array
    deviations: __.Array

    @property
    def channels( self ) -> int:
        ''' Number of channels described. '''
        return int( self.means.size )


class WindowBatch( __.immut.DataclassObject ):
    ''' Batch of exogenous input windows and target horizons. '''

    inputs: __.Array
    targets: __.Array
    origins: __.IndexArray

    @property
    def size( self ) -> int:
        ''' Number of windows in batch. '''
        return int( self.inputs.shape[ 0 ] )


class WindowSet( __.immut.DataclassObject ):
    ''' Every stride-1 window of a split, as zero-copy views.

        Inputs have shape ``[count, lookback, channels]`` and targets have
        shape ``[count, horizon]``. Origins are window start rows relative to
        the split. Channel indices name the frame columns behind the inputs.
    '''

    split: str
    inputs: __.Array
    targets: __.Array
    origins: __.IndexArray
    channel_indices: tuple[ int, ... ]

    @property
    def count( self ) -> int:
        ''' Number of windows. '''
        return int( self.inputs.shape[ 0 ] )

    @property
    def lookback( self ) -> int:
        ''' Input window length. '''
        return int( self.inputs.shape[ 1 ] )

    @property
    def horizon( self ) -> int:
        ''' Target horizon length. '''
        return int( self.targets.shape[ 1 ] )

    @property
    def channels( self ) -> int:
        ''' Number of exogenous input channels. '''
        return int( self.inputs.shape[ 2 ] )

    def select( self, indices: __.IndexArray ) -> WindowBatch:
        ''' Gathers windows by index into batch. '''
        return WindowBatch(
            inputs = self.inputs[ indices ],
            targets = self.targets[ indices ],
            origins = self.origins[ indices ] )

    def batches(
        self,
        size: int,
        order: __.Absential[ __.IndexArray ] = __.absent,
    ) -> __.cabc.Iterator[ WindowBatch ]:
        ''' Yields consecutive batches, by start index unless reordered. '''
        if size < 1:
            raise _exceptions.DimensionInvalidity( 'batch_size', size )
        if __.is_absent( order ):
            order = __.np.arange( self.count, dtype = __.np.int64 )
        for start in range( 0, order.size, size ):
            yield self.select( order[ start : start + size ] )


class ExogenousAudit:
    ''' Accounts for frame channels which reach model inputs. '''

    def __init__( self, target_index: int ) -> None:
        self.target_index = target_index
        self._channels: dict[ str, frozenset[ int ] ] = { }

    def record( self, consumer: str, windows: WindowSet ) -> None:
        ''' Records channels of window set consumed by model. '''
        source = f"{consumer}/{windows.split}"
        channels = frozenset( windows.channel_indices )
        self._channels[ source ] = (
            self._channels.get( source, frozenset( ) ) | channels )
        if self.target_index in channels:
            raise _exceptions.ExogenousLeakage( self.target_index, source )

    def survey_channels( self ) -> frozenset[ int ]:
        ''' All channels recorded so far. '''
        return frozenset( ).union( *self._channels.values( ) )

    def verify( self ) -> None:
        ''' Asserts target channel never reached model inputs. '''
        for source, channels in self._channels.items( ):
            if self.target_index in channels:
                raise _exceptions.ExogenousLeakage(
                    self.target_index, source )


def load_csv(
    location: __.typx.Annotated[
        str | __.pathlib.Path,
        __.typx.Doc( ''' CSV file with leading timestamp column. ''' ),
    ],
    target_name: __.typx.Annotated[
        str, __.typx.Doc( ''' Name of target channel column. ''' ),
    ],
) -> SeriesFrame:
    ''' Loads multivariate series from CSV file.

        Rows are reported as one-based data rows, not counting the header.
    '''
    location = __.pathlib.Path( location )
    if not location.is_file( ): raise _exceptions.DataAbsence( location )
    try:
        header = __.pd.read_csv(
            location, header = None, nrows = 1, dtype = str,
            keep_default_na = False )
        table = __.pd.read_csv(
            location, dtype = str, keep_default_na = False )
    except __.pd.errors.EmptyDataError:
        raise _exceptions.DataInvalidity(
            0, '', 'file holds no header', str( location ) ) from None
    _validate_uniqueness(
        tuple( str( name ) for name in header.iloc[ 0, 1 : ] ),
        str( location ) )
    columns = tuple( str( column ) for column in table.columns )
    names = columns[ 1 : ]
    if target_name not in names:
        raise _exceptions.ChannelAbsence( target_name, str( location ) )
    stamps = _parse_timestamps( table.iloc[ :, 0 ], columns[ 0 ], location )
    matrix = _parse_values( table.iloc[ :, 1 : ], names, location )
    frame = SeriesFrame.produce(
        stamps, matrix, names, target_name, location = str( location ) )
    _scribe.info(
        "Loaded %d rows and %d channels from '%s'; target is '%s'.",
        frame.length, len( names ), location, target_name )
    return frame


def make_splits( frame: SeriesFrame, spec: SplitSpec ) -> Splits:
    ''' Partitions prefix of frame into contiguous time-ordered splits. '''
    if spec.total > frame.length:
        raise _exceptions.SplitOverflow( spec.total, frame.length )
    training_stop = spec.training_size
    validation_stop = training_stop + spec.validation_size
    test_stop = validation_stop + spec.test_size
    return Splits(
        training = SplitView(
            name = 'training', frame = frame,
            start = 0, stop = training_stop ),
        validation = SplitView(
            name = 'validation', frame = frame,
            start = training_stop, stop = validation_stop ),
        test = SplitView(
            name = 'test', frame = frame,
            start = validation_stop, stop = test_stop ) )


def fit_norm_stats( view: SplitView ) -> NormStats:
    ''' Fits population mean and deviation per channel on split rows.

        Zero-variance channels receive unit deviation.
    '''
    if view.length < 1:
        raise _exceptions.DimensionInvalidity( f"{view.name} rows", 0 )
    values = view.values
    means = values.mean( axis = 0 )
    deviations = values.std( axis = 0 )
    constant = deviations == 0.0
    if constant.any( ):
        _scribe.warning(
            "Clamped deviation to 1.0 for constant channels: %s.",
            ', '.join(
                view.frame.channel_names[ index ]
                for index in __.np.flatnonzero( constant ) ) )
        deviations = __.np.where( constant, 1.0, deviations )
    return NormStats( means = means, deviations = deviations )


def normalize( values: __.Array, stats: NormStats ) -> __.Array:
    ''' Maps channel values into normalized space. '''
    _validate_channels( values, stats )
    return ( values - stats.means ) / stats.deviations


def denormalize( values: __.Array, stats: NormStats ) -> __.Array:
    ''' Maps normalized values back into channel units. '''
    _validate_channels( values, stats )
    return values * stats.deviations + stats.means


def count_windows( length: int, lookback: int, horizon: int ) -> int:
    ''' Number of stride-1 windows over series of given length. '''
    return max( length - lookback - horizon + 1, 0 )


def assemble_windows(
    view: SplitView,
    stats: NormStats,
    lookback: int,
    horizon: int,
    target_index: int,
) -> WindowSet:
    ''' Produces every stride-1 window of split in normalized space. '''
    if lookback < 1:
        raise _exceptions.DimensionInvalidity( 'lookback', lookback )
    if horizon < 1:
        raise _exceptions.DimensionInvalidity( 'horizon', horizon )
    if view.length < lookback + horizon:
        raise _exceptions.WindowInsufficiency(
            view.name, view.length, lookback, horizon )
    channels = len( view.frame.channel_names )
    if not 0 <= target_index < channels:
        raise _exceptions.ChannelAbsence(
            str( target_index ), f"split '{view.name}'" )
    normalized = normalize( view.values, stats )
    exogenous = tuple(
        index for index in range( channels ) if index != target_index )
    count = count_windows( view.length, lookback, horizon )
    covariates = __.np.ascontiguousarray( normalized[ :, exogenous ] )
    inputs = __.sliding_window_view(
        covariates, lookback, axis = 0 )[ : count ].transpose( 0, 2, 1 )
    targets = __.sliding_window_view(
        __.np.ascontiguousarray( normalized[ lookback :, target_index ] ),
        horizon )[ : count ]
    return WindowSet(
        split = view.name,
        inputs = inputs,
        targets = targets,
        origins = __.np.arange( count, dtype = __.np.int64 ),
        channel_indices = exogenous )


def window_iter( # noqa: PLR0913
    view: SplitView,
    stats: NormStats,
    lookback: int,
    horizon: int,
    target_index: int,
    batch_size: int = 32,
) -> __.cabc.Iterator[ WindowBatch ]:
    ''' Yields batches of consecutive windows in start-index order. '''
    windows = assemble_windows( view, stats, lookback, horizon, target_index )
    yield from windows.batches( batch_size )


def summarize_splits(
    splits: Splits, lookback: int, horizon: int
) -> list[ dict[ str, __.typx.Any ] ]:
    ''' Summarizes boundaries and window counts of splits. '''
    summaries: list[ dict[ str, __.typx.Any ] ] = [ ]
    for view in splits.survey( ):
        stamps = view.timestamps
        summaries.append( {
            'split': view.name,
            'start': view.start,
            'stop': view.stop,
            'rows': view.length,
            'windows': count_windows( view.length, lookback, horizon ),
            'first': _render_timestamp( stamps[ 0 ] ) if stamps.size else None,
            'last': _render_timestamp( stamps[ -1 ] ) if stamps.size else None,
        } )
    return summaries


def _parse_timestamps(
    column: __.pd.Series, name: str, location: __.pathlib.Path
) -> __.npt.NDArray[ __.np.datetime64 ]:
    stamps = __.pd.to_datetime(
        column, format = 'ISO8601', errors = 'coerce', utc = True )
    invalid = __.np.flatnonzero( stamps.isna( ).to_numpy( ) )
    if invalid.size:
        row = int( invalid[ 0 ] )
        raise _exceptions.DataInvalidity(
            row + 1, name,
            f"unparseable timestamp {column.iat[ row ]!r}", str( location ) )
    return stamps.dt.tz_localize( None ).to_numpy( dtype = 'datetime64[ns]' )


def _parse_values(
    table: __.pd.DataFrame,
    names: tuple[ str, ... ],
    location: __.pathlib.Path,
) -> __.Array:
    numeric = table.apply( __.pd.to_numeric, errors = 'coerce' )
    matrix = numeric.to_numpy( dtype = __.np.float64 )
    invalid = __.np.argwhere( ~__.np.isfinite( matrix ) )
    if invalid.size:
        row, column = ( int( index ) for index in invalid[ 0 ] )
        text = table.iat[ row, column ]
        try: float( text )
        except ValueError: reason = f"non-numeric value {text!r}"
        else: reason = f"non-finite value {text!r}"
        raise _exceptions.DataInvalidity(
            row + 1, names[ column ], reason, str( location ) )
    return matrix


def _render_timestamp( stamp: __.np.datetime64 ) -> str:
    return str( __.np.datetime_as_string( stamp, unit = 's' ) )


def _validate_channels( values: __.Array, stats: NormStats ) -> None:
    if values.ndim != 2 or values.shape[ 1 ] != stats.channels:
        raise _exceptions.ShapeIncompatibility(
            'channel values', f"[rows, {stats.channels}]", values.shape )


def _validate_finitude(
    matrix: __.Array, names: tuple[ str, ... ], location: str
) -> None:
    invalid = __.np.argwhere( ~__.np.isfinite( matrix ) )
    if not invalid.size: return
    row, column = ( int( index ) for index in invalid[ 0 ] )
    raise _exceptions.DataInvalidity(
        row + 1, names[ column ],
        f"non-finite value {matrix[ row, column ]!r}", location )


def _validate_ordering(
    stamps: __.npt.NDArray[ __.np.datetime64 ], location: str
) -> None:
    steps = __.np.diff( stamps.astype( __.np.int64 ) )
    disordered = __.np.flatnonzero( steps <= 0 )
    if disordered.size:
        raise _exceptions.TimestampDisorder(
            int( disordered[ 0 ] ) + 2, location )


def _validate_uniqueness(
    names: __.cabc.Sequence[ str ], location: str
) -> None:
    seen: set[ str ] = set( )
    for name in names:
        if name in seen:
            raise _exceptions.DataInvalidity(
                0, name, 'duplicate channel name', location )
        seen.add( name )
