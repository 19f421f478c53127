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


''' Error measures in normalized space and per-split reports.

    Errors are averaged over every window and horizon step. Partial sums are
    reduced in window order so repeated evaluations agree bit for bit.
'''


from . import __
from . import dataio as _dataio
from . import exceptions as _exceptions
from . import models as _models


SPREAD_FLOOR = 1e-6

_chunk_size = 1024
_scribe = __.provide_scribe( __name__ )


class KlDirection( __.enum.Enum ):
    ''' Argument order of divergence between forecast and observation. '''

    ForecastToObservation = 'forecast-to-observation'
    ObservationToForecast = 'observation-to-forecast'


class GaussianForecast( __.immut.DataclassObject ):
    ''' Per-step normal distributions. '''

    mean: __.Array
    std: __.Array

    @classmethod
    def produce(
        cls, mean: __.npt.ArrayLike, std: __.npt.ArrayLike
    ) -> __.typx.Self:
        ''' Produces forecast with broadcast, strictly positive spread. '''
        means = __.np.asarray( mean, dtype = __.np.float64 )
        spreads = __.np.broadcast_to(
            __.np.asarray( std, dtype = __.np.float64 ), means.shape )
        if spreads.size and not ( spreads > 0.0 ).all( ):
            raise _exceptions.DistributionInvalidity(
                float( spreads.min( ) ) )
        return cls( mean = means, std = spreads )


class KlSettings( __.immut.DataclassObject ):
    ''' Probabilistic scoring of point forecasters.

        Forecasts become normals with per-step spread estimated from training
        residuals. Observations become normals with a fixed reference spread.
    '''

    reference_std: float
    spread: __.Array
    direction: KlDirection = KlDirection.ForecastToObservation


class MetricReport( __.immut.DataclassObject ):
    ''' Errors of one model on one split. '''

    model_name: str
    split_name: str
    samples: int
    size: int
    mse: float
    mae: __.Absential[ float ] = __.absent
    kl: __.Absential[ float ] = __.absent
    kl_direction: __.Absential[ str ] = __.absent
    kl_reference_std: __.Absential[ float ] = __.absent

    @classmethod
    def restore(
        cls, record: __.cabc.Mapping[ str, __.typx.Any ]
    ) -> __.typx.Self:
        ''' Restores report from JSON-compatible record. '''
        try:
            return cls(
                model_name = str( record[ 'model' ] ),
                split_name = str( record[ 'split' ] ),
                samples = int( record[ 'samples' ] ),
                size = int( record[ 'size' ] ),
                mse = float( record[ 'mse' ] ),
                mae = _restore_optional( record.get( 'mae' ) ),
                kl = _restore_optional( record.get( 'kl' ) ),
                kl_direction = (
                    __.absent if record.get( 'kl_direction' ) is None
                    else str( record[ 'kl_direction' ] ) ),
                kl_reference_std = _restore_optional(
                    record.get( 'kl_reference_std' ) ) )
        except ( KeyError, TypeError, ValueError ) as exc:
            raise _exceptions.RecordInvalidity(
                f"metric report: {exc}" ) from exc

    def render_as_json( self ) -> dict[ str, __.typx.Any ]:
        ''' Renders report as JSON-compatible record. '''
        return {
            'model': self.model_name,
            'split': self.split_name,
            'samples': self.samples,
            'size': self.size,
            'mae': _render_optional( self.mae ),
            'mse': self.mse,
            'kl': _render_optional( self.kl ),
            'kl_direction': _render_optional( self.kl_direction ),
            'kl_reference_std': _render_optional( self.kl_reference_std ),
        }


def mae( prediction: __.Array, target: __.Array ) -> float:
    ''' Mean absolute error over all elements. '''
    _validate_pair( 'mae', prediction, target )
    return float( __.np.mean( __.np.abs( prediction - target ) ) )


def mse( prediction: __.Array, target: __.Array ) -> float:
    ''' Mean squared error over all elements. '''
    _validate_pair( 'mse', prediction, target )
    residual = prediction - target
    return float( __.np.mean( residual * residual ) )


def gaussian_kl( p: GaussianForecast, q: GaussianForecast ) -> float:
    ''' Mean per-step divergence of normal ``p`` from normal ``q``. '''
    if p.mean.shape != q.mean.shape:
        raise _exceptions.ShapeIncompatibility(
            'gaussian forecast', p.mean.shape, q.mean.shape )
    if not p.mean.size:
        raise _exceptions.MetricInputInvalidity( 'gaussian_kl' )
    for spread in ( p.std, q.std ):
        if not ( spread > 0.0 ).all( ):
            raise _exceptions.DistributionInvalidity( float( spread.min( ) ) )
    divergences = _divergences( p.mean, p.std, q.mean, q.std )
    return max( float( __.np.mean( divergences ) ), 0.0 )


def estimate_residual_spread(
    params: _models.Parameters, windows: _dataio.WindowSet
) -> __.Array:
    ''' Root-mean-square residual per horizon step, floored. '''
    squares = __.np.zeros( windows.horizon )
    for batch in windows.batches( _chunk_size ):
        residual = _models.forecast( params, batch.inputs ) - batch.targets
        squares = squares + ( residual * residual ).sum( axis = 0 )
    return __.np.maximum(
        __.np.sqrt( squares / windows.count ), SPREAD_FLOOR )


def evaluate_windows( # noqa: PLR0913
    params: _models.Parameters,
    windows: _dataio.WindowSet,
    model_name: __.Absential[ str ] = __.absent,
    size: __.Absential[ int ] = __.absent,
    include_mae: bool = True,
    kl: __.Absential[ KlSettings ] = __.absent,
) -> MetricReport:
    ''' Accumulates errors over every window of set. '''
    if windows.count < 1:
        raise _exceptions.WindowInsufficiency(
            windows.split, 0, windows.lookback, windows.horizon )
    absolutes, squares, divergences = _accumulate( params, windows, kl )
    elements = windows.count * windows.horizon
    name = params.kind.value if __.is_absent( model_name ) else model_name
    report = MetricReport(
        model_name = name,
        split_name = windows.split,
        samples = windows.count,
        size = windows.count if __.is_absent( size ) else size,
        mse = squares / elements,
        mae = (
            absolutes / elements
            if include_mae else __.absent ),
        kl = (
            __.absent if __.is_absent( kl )
            else max( divergences / elements, 0.0 ) ),
        kl_direction = (
            __.absent if __.is_absent( kl ) else kl.direction.value ),
        kl_reference_std = (
            __.absent if __.is_absent( kl ) else kl.reference_std ) )
    _scribe.info(
        "Evaluated '%s' on %d '%s' windows: mae=%s mse=%.6f.",
        name, windows.count, windows.split,
        'n/a' if __.is_absent( report.mae ) else f"{report.mae:.6f}",
        report.mse )
    return report


def evaluate_split( # noqa: PLR0913
    params: _models.Parameters,
    view: _dataio.SplitView,
    stats: _dataio.NormStats,
    lookback: int,
    horizon: int,
    target_index: int,
    include_mae: bool = True,
    kl: __.Absential[ KlSettings ] = __.absent,
) -> MetricReport:
    ''' Evaluates forecaster on every stride-1 window of split.

        Errors stay in normalized units. The report size is the split row
        count.
    '''
    windows = _dataio.assemble_windows(
        view, stats, lookback, horizon, target_index )
    return evaluate_windows(
        params, windows,
        size = view.length, include_mae = include_mae, kl = kl )


def measure_mae(
    params: _models.Parameters, windows: _dataio.WindowSet
) -> float:
    ''' Mean absolute error of forecaster over window set. '''
    absolutes, _, _ = _accumulate( params, windows )
    return absolutes / ( windows.count * windows.horizon )


def _accumulate(
    params: _models.Parameters,
    windows: _dataio.WindowSet,
    kl: __.Absential[ KlSettings ] = __.absent,
) -> tuple[ float, float, float ]:
    absolutes: list[ float ] = [ ]
    squares: list[ float ] = [ ]
    divergences: list[ float ] = [ ]
    for batch in windows.batches( _chunk_size ):
        prediction = _models.forecast( params, batch.inputs )
        residual = prediction - batch.targets
        absolutes.append( float( __.np.abs( residual ).sum( ) ) )
        squares.append( float( ( residual * residual ).sum( ) ) )
        if not __.is_absent( kl ):
            divergences.append( float(
                _score_divergences( prediction, batch.targets, kl ).sum( ) ) )
    return (
        __.math.fsum( absolutes ),
        __.math.fsum( squares ),
        __.math.fsum( divergences ) )


def _divergences(
    mean_p: __.Array,
    std_p: __.Array,
    mean_q: __.Array,
    std_q: __.Array,
) -> __.Array:
    variance_q = std_q * std_q
    offset = mean_p - mean_q
    return (
        __.np.log( std_q / std_p )
        + ( std_p * std_p + offset * offset ) / ( 2.0 * variance_q )
        - 0.5 )


def _render_optional( value: __.Absential[ __.typx.Any ] ) -> __.typx.Any:
    return None if __.is_absent( value ) else value


def _restore_optional( value: __.typx.Any ) -> __.Absential[ float ]:
    return __.absent if value is None else float( value )


def _score_divergences(
    prediction: __.Array, targets: __.Array, settings: KlSettings
) -> __.Array:
    spread = __.np.broadcast_to( settings.spread, prediction.shape )
    reference = __.np.full( prediction.shape, settings.reference_std )
    match settings.direction:
        case KlDirection.ForecastToObservation:
            return _divergences( prediction, spread, targets, reference )
        case KlDirection.ObservationToForecast:
            return _divergences( targets, reference, prediction, spread )


def _validate_pair(
    metric: str, prediction: __.Array, target: __.Array
) -> None:
    if prediction.shape != target.shape:
        raise _exceptions.ShapeIncompatibility(
            metric, target.shape, prediction.shape )
    if not prediction.size:
        raise _exceptions.MetricInputInvalidity( metric )
