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


''' Linear, NLinear, and DLinear forecasters with analytic gradients.

    Every forecaster maps an exogenous input window of shape
    ``[batch, lookback, channels]`` to a target horizon of shape
    ``[batch, horizon]`` through a full affine map of the flattened window.
    Flattening is time-major: element ``( t, c )`` lands at ``t * channels +
    c``.
'''


from . import __
from . import exceptions as _exceptions


FLATTENING = 'time-major'


class ModelKind( __.enum.Enum ):
    ''' Forecaster families. '''

    Linear = 'linear'
    NLinear = 'nlinear'
    DLinear = 'dlinear'
    Persistence = 'persistence'

    @property
    def trainable( self ) -> bool:
        ''' Whether forecaster has learnable parameters. '''
        return self is not ModelKind.Persistence


class Parameters( __.immut.DataclassObject ):
    ''' Base for parameter records.

        Gradients share the record type of the parameters they describe.
    '''

    kind: __.typx.ClassVar[ ModelKind ]

    lookback: int
    channels: int
    horizon: int

    def survey_arrays( self ) -> dict[ str, __.Array ]:
        ''' Learnable arrays by name, in fixed order. '''
        return { }

    def survey_settings( self ) -> dict[ str, __.typx.Any ]:
        ''' Non-learnable configuration of record. '''
        return {
            'lookback': self.lookback,
            'channels': self.channels,
            'horizon': self.horizon,
        }

    def with_arrays(
        self, arrays: __.cabc.Mapping[ str, __.Array ]
    ) -> __.typx.Self:
        ''' Produces record of same kind and settings with new arrays. '''
        return type( self )( **self.survey_settings( ), **arrays )


class LinearParams( Parameters ):
    ''' Affine map from flattened window to horizon. '''

    kind = ModelKind.Linear

    weights: __.Array
    bias: __.Array

    def survey_arrays( self ) -> dict[ str, __.Array ]:
        return { 'weights': self.weights, 'bias': self.bias }


class NLinearParams( Parameters ):
    ''' Affine map of last-value-centered window.

        When an anchor is present, the last value of that exogenous channel
        is added back to every horizon step.
    '''

    kind = ModelKind.NLinear

    weights: __.Array
    bias: __.Array
    anchor: __.Absential[ int ] = __.absent

    def survey_arrays( self ) -> dict[ str, __.Array ]:
        return { 'weights': self.weights, 'bias': self.bias }

    def survey_settings( self ) -> dict[ str, __.typx.Any ]:
        return { **super( ).survey_settings( ), 'anchor': self.anchor }


class DLinearParams( Parameters ):
    ''' Separate affine maps for trend and seasonal components. '''

    kind = ModelKind.DLinear

    trend_weights: __.Array
    trend_bias: __.Array
    seasonal_weights: __.Array
    seasonal_bias: __.Array
    kernel: int = 25

    def survey_arrays( self ) -> dict[ str, __.Array ]:
        return {
            'trend_weights': self.trend_weights,
            'trend_bias': self.trend_bias,
            'seasonal_weights': self.seasonal_weights,
            'seasonal_bias': self.seasonal_bias,
        }

    def survey_settings( self ) -> dict[ str, __.typx.Any ]:
        return { **super( ).survey_settings( ), 'kernel': self.kernel }


class PersistenceParams( Parameters ):
    ''' Naive baseline which repeats anchor channel's last value. '''

    kind = ModelKind.Persistence

    anchor: __.Absential[ int ] = __.absent

    def survey_settings( self ) -> dict[ str, __.typx.Any ]:
        return { **super( ).survey_settings( ), 'anchor': self.anchor }


class DecomposedWindow( __.immut.DataclassObject ):
    ''' Moving-average trend and residual seasonal parts of window. '''

    trend: __.Array
    seasonal: __.Array


def moving_average( window: __.Array, kernel: int ) -> __.Array:
    ''' Sliding mean along time with replicate padding at both ends. '''
    _validate_kernel( kernel )
    if window.ndim != 3 or window.shape[ 1 ] < 1: # noqa: PLR2004
        raise _exceptions.ShapeIncompatibility(
            'window', '[batch, lookback, channels]', window.shape )
    reach = ( kernel - 1 ) // 2
    front = __.np.repeat( window[ :, : 1, : ], reach, axis = 1 )
    back = __.np.repeat( window[ :, -1 :, : ], reach, axis = 1 )
    padded = __.np.concatenate( ( front, window, back ), axis = 1 )
    return __.sliding_window_view(
        padded, kernel, axis = 1 ).mean( axis = -1 )


def decompose( window: __.Array, kernel: int ) -> DecomposedWindow:
    ''' Splits window into trend and seasonal components. '''
    trend = moving_average( window, kernel )
    return DecomposedWindow( trend = trend, seasonal = window - trend )


def linear_forward( params: LinearParams, inputs: __.Array ) -> __.Array:
    ''' Forecasts horizon from flattened window. '''
    _validate_inputs( params, inputs )
    return _project( inputs, params.weights, params.bias )


def nlinear_forward( params: NLinearParams, inputs: __.Array ) -> __.Array:
    ''' Forecasts horizon from window centered on its last time step. '''
    _validate_inputs( params, inputs )
    centered = inputs - inputs[ :, -1 :, : ]
    prediction = _project( centered, params.weights, params.bias )
    if __.is_absent( params.anchor ): return prediction
    _validate_anchor( params.anchor, params.channels )
    return prediction + inputs[ :, -1, params.anchor ][ :, None ]


def dlinear_forward( params: DLinearParams, inputs: __.Array ) -> __.Array:
    ''' Forecasts horizon from trend and seasonal components. '''
    _validate_inputs( params, inputs )
    parts = decompose( inputs, params.kernel )
    return (
        _project( parts.trend, params.trend_weights, params.trend_bias )
        + _project(
            parts.seasonal, params.seasonal_weights, params.seasonal_bias ) )


def persistence_forward(
    params: PersistenceParams, inputs: __.Array
) -> __.Array:
    ''' Repeats anchor channel's last value, or zero, across horizon. '''
    _validate_inputs( params, inputs )
    batch = inputs.shape[ 0 ]
    if __.is_absent( params.anchor ):
        return __.np.zeros( ( batch, params.horizon ) )
    _validate_anchor( params.anchor, params.channels )
    return __.np.repeat(
        inputs[ :, -1, params.anchor ][ :, None ], params.horizon, axis = 1 )


def forecast( params: Parameters, inputs: __.Array ) -> __.Array:
    ''' Forecasts horizon with forecaster matching parameter record. '''
    match params:
        case LinearParams( ): return linear_forward( params, inputs )
        case NLinearParams( ): return nlinear_forward( params, inputs )
        case DLinearParams( ): return dlinear_forward( params, inputs )
        case PersistenceParams( ):
            return persistence_forward( params, inputs )
        case _:
            raise _exceptions.CheckpointInvalidity(
                f"unknown parameters record {type( params ).__qualname__}" )


def model_grad(
    params: Parameters, inputs: __.Array, targets: __.Array
) -> Parameters:
    ''' Gradient of mean squared error over batch and horizon.

        Centering and decomposition are fixed linear transforms of the
        inputs, so each weight gradient is the outer product of the scaled
        residual with the transformed, flattened window.
    '''
    return model_loss_and_grad( params, inputs, targets )[ 1 ]


def model_loss_and_grad(
    params: Parameters, inputs: __.Array, targets: __.Array
) -> tuple[ float, Parameters ]:
    ''' Mean squared error over batch and horizon, with its gradient. '''
    prediction = forecast( params, inputs )
    if targets.shape != prediction.shape:
        raise _exceptions.ShapeIncompatibility(
            'targets', prediction.shape, targets.shape )
    error = prediction - targets
    loss = float( __.np.mean( error * error ) )
    return loss, _differentiate( params, inputs, error )


def _differentiate(
    params: Parameters, inputs: __.Array, error: __.Array
) -> Parameters:
    residual = error * ( 2.0 / error.size )
    bias = residual.sum( axis = 0 )
    match params:
        case LinearParams( ):
            return params.with_arrays( {
                'weights': residual.T @ _flatten( inputs ),
                'bias': bias } )
        case NLinearParams( ):
            centered = inputs - inputs[ :, -1 :, : ]
            return params.with_arrays( {
                'weights': residual.T @ _flatten( centered ),
                'bias': bias } )
        case DLinearParams( ):
            parts = decompose( inputs, params.kernel )
            return params.with_arrays( {
                'trend_weights': residual.T @ _flatten( parts.trend ),
                'trend_bias': bias,
                'seasonal_weights': residual.T @ _flatten( parts.seasonal ),
                'seasonal_bias': bias.copy( ) } )
        case _: return params.with_arrays( { } )


def init_params( # noqa: PLR0913
    kind: ModelKind,
    lookback: int,
    horizon: int,
    channels: int,
    kernel: int = 25,
    seed: int = 0,
    anchor: __.Absential[ int ] = __.absent,
) -> Parameters:
    ''' Draws weights uniformly within inverse root of fan-in.

        Biases start at zero. Identical seeds give identical records.
    '''
    for name, value in (
        ( 'lookback', lookback ),
        ( 'horizon', horizon ),
        ( 'channels', channels ),
    ):
        if value < 1: raise _exceptions.DimensionInvalidity( name, value )
    if not __.is_absent( anchor ): _validate_anchor( anchor, channels )
    generator = __.np.random.default_rng( seed )
    bound = 1.0 / __.math.sqrt( lookback * channels )
    shape = ( horizon, lookback * channels )
    settings: dict[ str, __.typx.Any ] = dict(
        lookback = lookback, channels = channels, horizon = horizon )
    match kind:
        case ModelKind.Linear:
            return LinearParams(
                **settings,
                weights = generator.uniform( -bound, bound, size = shape ),
                bias = __.np.zeros( horizon ) )
        case ModelKind.NLinear:
            return NLinearParams(
                **settings,
                weights = generator.uniform( -bound, bound, size = shape ),
                bias = __.np.zeros( horizon ),
                anchor = anchor )
        case ModelKind.DLinear:
            _validate_kernel( kernel )
            return DLinearParams(
                **settings,
                trend_weights = generator.uniform(
                    -bound, bound, size = shape ),
                trend_bias = __.np.zeros( horizon ),
                seasonal_weights = generator.uniform(
                    -bound, bound, size = shape ),
                seasonal_bias = __.np.zeros( horizon ),
                kernel = kernel )
        case ModelKind.Persistence:
            return PersistenceParams( **settings, anchor = anchor )


def _flatten( inputs: __.Array ) -> __.Array:
    return inputs.reshape( inputs.shape[ 0 ], -1 )


def _project(
    inputs: __.Array, weights: __.Array, bias: __.Array
) -> __.Array:
    return _flatten( inputs ) @ weights.T + bias


def _validate_anchor( anchor: int, channels: int ) -> None:
    if not 0 <= anchor < channels:
        raise _exceptions.AnchorInvalidity( anchor, channels )


def _validate_inputs( params: Parameters, inputs: __.Array ) -> None:
    expected = ( params.lookback, params.channels )
    if inputs.ndim != 3 or inputs.shape[ 1 : ] != expected: # noqa: PLR2004
        raise _exceptions.ShapeIncompatibility(
            'inputs', f"[batch, {expected[ 0 ]}, {expected[ 1 ]}]",
            inputs.shape )


def _validate_kernel( kernel: int ) -> None:
    if kernel < 1 or kernel % 2 == 0:
        raise _exceptions.KernelInvalidity( kernel )
