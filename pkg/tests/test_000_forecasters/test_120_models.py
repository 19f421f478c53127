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


''' Assert forward passes, decomposition, and gradients of forecasters. '''


import numpy as np
import pytest

from . import __


exceptions = __.cache_import_module( f"{__.PACKAGE_NAME}.exceptions" )
models = __.cache_import_module( f"{__.PACKAGE_NAME}.models" )


def _as_window( sequence ):
    return np.asarray( sequence, dtype = np.float64 ).reshape( 1, -1, 1 )


def _produce_linear( weights, bias = None ):
    weights = np.asarray( weights, dtype = np.float64 )
    horizon = weights.shape[ 0 ]
    return models.LinearParams(
        lookback = weights.shape[ 1 ], channels = 1, horizon = horizon,
        weights = weights,
        bias = np.zeros( horizon ) if bias is None else np.asarray( bias ) )


def test_100_moving_average_example( ):
    ''' Replicate padding keeps length and averages edges. '''
    trend = models.moving_average( _as_window( [ 1, 2, 3, 4, 5 ] ), 3 )
    assert np.allclose(
        trend.ravel( ), [ 4 / 3, 2.0, 3.0, 4.0, 14 / 3 ],
        rtol = 0.0, atol = 1e-15 )


@pytest.mark.parametrize( 'kernel', ( 1, 3, 7, 25 ) )
def test_110_moving_average_constant( kernel ):
    ''' Constant sequence is its own trend for every odd kernel. '''
    window = np.full( ( 2, 5, 2 ), 0.375 )
    assert np.array_equal( models.moving_average( window, kernel ), window )


def test_120_moving_average_identity_kernel( ):
    ''' Unit kernel leaves window untouched. '''
    window = np.random.default_rng( 0 ).standard_normal( ( 3, 6, 2 ) )
    assert np.array_equal( models.moving_average( window, 1 ), window )


@pytest.mark.parametrize( 'kernel', ( 0, 2, -1, 24 ) )
def test_130_moving_average_rejects_kernel( kernel ):
    ''' Kernel must be odd and positive. '''
    with pytest.raises( exceptions.KernelInvalidity ):
        models.moving_average( np.zeros( ( 1, 4, 1 ) ), kernel )


def test_140_moving_average_shift_equivariance( ):
    ''' Shifting window shifts trend by same constant. '''
    window = np.random.default_rng( 1 ).standard_normal( ( 4, 16, 3 ) )
    shifted = models.moving_average( window + 2.5, 5 )
    assert np.allclose(
        shifted, models.moving_average( window, 5 ) + 2.5,
        rtol = 0.0, atol = 1e-10 )


def test_200_decompose_example( ):
    ''' Seasonal part is window minus trend. '''
    parts = models.decompose( _as_window( [ 1, 2, 3, 4, 5 ] ), 3 )
    assert np.allclose(
        parts.seasonal.ravel( ), [ -1 / 3, 0.0, 0.0, 0.0, 1 / 3 ],
        rtol = 0.0, atol = 1e-15 )


def test_210_decompose_constant( ):
    ''' Constant window has zero seasonal part. '''
    window = np.full( ( 1, 8, 2 ), -1.25 )
    parts = models.decompose( window, 25 )
    assert np.array_equal( parts.trend, window )
    assert not parts.seasonal.any( )


@pytest.mark.parametrize( 'kernel', ( 1, 3, 25 ) )
def test_220_decompose_reconstructs( kernel ):
    ''' Trend plus seasonal restores window to within rounding. '''
    generator = np.random.default_rng( kernel )
    window = generator.normal( 0.0, 10.0, size = ( 1000, 32, 3 ) )
    parts = models.decompose( window, kernel )
    tolerance = np.spacing( np.maximum.reduce( (
        np.abs( window ), np.abs( parts.trend ), np.abs( parts.seasonal ) ) ) )
    error = np.abs( parts.trend + parts.seasonal - window )
    assert ( error <= tolerance ).all( )


def test_300_linear_forward_examples( ):
    ''' Hand-computed and zero-map projections. '''
    params = _produce_linear( [ [ 0.5, 0.5 ] ] )
    prediction = models.linear_forward( params, _as_window( [ 2, 4 ] ) )
    assert prediction[ 0, 0 ] == 3.0
    zero = _produce_linear( np.zeros( ( 3, 4 ) ) )
    assert not models.linear_forward( zero, np.ones( ( 2, 4, 1 ) ) ).any( )


def test_310_linear_time_major_flattening( ):
    ''' Weight column t * channels + c reads time t of channel c. '''
    weights = np.zeros( ( 1, 6 ) )
    weights[ 0, 1 * 2 + 1 ] = 1.0
    params = models.LinearParams(
        lookback = 3, channels = 2, horizon = 1,
        weights = weights, bias = np.zeros( 1 ) )
    inputs = np.arange( 6.0 ).reshape( 1, 3, 2 )
    assert models.linear_forward( params, inputs )[ 0, 0 ] == inputs[ 0, 1, 1 ]


def test_320_linear_is_linear( ):
    ''' Zero-bias projection is additive and homogeneous. '''
    generator = np.random.default_rng( 2 )
    params = models.init_params( models.ModelKind.Linear, 6, 3, 2, seed = 4 )
    first = generator.standard_normal( ( 5, 6, 2 ) )
    second = generator.standard_normal( ( 5, 6, 2 ) )
    forward = models.linear_forward
    assert np.allclose(
        forward( params, first + second ),
        forward( params, first ) + forward( params, second ),
        rtol = 0.0, atol = 1e-10 )
    assert np.allclose(
        forward( params, 3.5 * first ), 3.5 * forward( params, first ),
        rtol = 0.0, atol = 1e-10 )


def test_330_forward_rejects_shape( ):
    ''' Inputs must match lookback and channel count. '''
    params = models.init_params( models.ModelKind.Linear, 4, 2, 3 )
    with pytest.raises( exceptions.ShapeIncompatibility ):
        models.forecast( params, np.zeros( ( 1, 4, 2 ) ) )
    with pytest.raises( exceptions.ShapeIncompatibility ):
        models.forecast( params, np.zeros( ( 4, 3 ) ) )


def test_400_nlinear_constant_window( ):
    ''' Centering removes constant windows when anchor is absent. '''
    params = models.init_params( models.ModelKind.NLinear, 5, 3, 2, seed = 1 )
    params = params.with_arrays( {
        'weights': params.weights, 'bias': np.array( [ 1.0, 2.0, 3.0 ] ) } )
    window = np.broadcast_to( np.array( [ 7.0, -2.0 ] ), ( 1, 5, 2 ) )
    assert np.array_equal(
        models.nlinear_forward( params, window ), [ [ 1.0, 2.0, 3.0 ] ] )


def test_410_nlinear_anchor_example( ):
    ''' Anchor last value is added back after projection. '''
    params = models.NLinearParams(
        lookback = 2, channels = 1, horizon = 1,
        weights = np.array( [ [ 0.5, 0.5 ] ] ), bias = np.zeros( 1 ),
        anchor = 0 )
    prediction = models.nlinear_forward( params, _as_window( [ 2, 4 ] ) )
    assert prediction[ 0, 0 ] == 3.0


@pytest.mark.parametrize( 'shift', ( -5.0, 0.1, 1e3 ) )
def test_420_nlinear_translation( shift ):
    ''' Anchored forecasts follow shifts; unanchored ones ignore them. '''
    generator = np.random.default_rng( 5 )
    inputs = generator.standard_normal( ( 8, 6, 3 ) )
    anchored = models.init_params(
        models.ModelKind.NLinear, 6, 4, 3, seed = 2, anchor = 1 )
    plain = models.init_params( models.ModelKind.NLinear, 6, 4, 3, seed = 2 )
    assert np.allclose(
        models.forecast( anchored, inputs + shift ),
        models.forecast( anchored, inputs ) + shift,
        rtol = 0.0, atol = 1e-9 )
    assert np.allclose(
        models.forecast( plain, inputs + shift ),
        models.forecast( plain, inputs ),
        rtol = 0.0, atol = 1e-9 )


def test_430_nlinear_rejects_anchor( ):
    ''' Anchor must index an exogenous channel. '''
    with pytest.raises( exceptions.AnchorInvalidity ):
        models.init_params(
            models.ModelKind.NLinear, 4, 2, 2, anchor = 2 )


def test_500_dlinear_example( ):
    ''' Trend and seasonal maps read their own components. '''
    params = models.DLinearParams(
        lookback = 3, channels = 1, horizon = 1,
        trend_weights = np.array( [ [ 1.0, 0.0, 0.0 ] ] ),
        trend_bias = np.zeros( 1 ),
        seasonal_weights = np.array( [ [ 0.0, 0.0, 1.0 ] ] ),
        seasonal_bias = np.zeros( 1 ),
        kernel = 3 )
    prediction = models.dlinear_forward( params, _as_window( [ 1, 2, 3 ] ) )
    assert prediction[ 0, 0 ] == pytest.approx( 5 / 3, abs = 1e-15 )


def test_510_dlinear_zero_input( ):
    ''' Zero window yields sum of biases. '''
    params = models.init_params(
        models.ModelKind.DLinear, 5, 2, 2, kernel = 3 )
    params = params.with_arrays( {
        **params.survey_arrays( ),
        'trend_bias': np.array( [ 1.0, 2.0 ] ),
        'seasonal_bias': np.array( [ 0.5, 0.25 ] ) } )
    prediction = models.dlinear_forward( params, np.zeros( ( 1, 5, 2 ) ) )
    assert np.array_equal( prediction, [ [ 1.5, 2.25 ] ] )


def test_520_dlinear_tied_weights_collapse( ):
    ''' Tied maps with zero biases agree with linear forecaster. '''
    linear = models.init_params( models.ModelKind.Linear, 8, 3, 2, seed = 9 )
    tied = models.DLinearParams(
        lookback = 8, channels = 2, horizon = 3,
        trend_weights = linear.weights, trend_bias = np.zeros( 3 ),
        seasonal_weights = linear.weights, seasonal_bias = np.zeros( 3 ),
        kernel = 5 )
    inputs = np.random.default_rng( 6 ).standard_normal( ( 10, 8, 2 ) )
    assert np.allclose(
        models.forecast( tied, inputs ), models.forecast( linear, inputs ),
        rtol = 0.0, atol = 1e-10 )


def test_600_persistence_forecasts( ):
    ''' Baseline repeats anchor last value or predicts zero. '''
    inputs = np.arange( 12.0 ).reshape( 2, 3, 2 )
    anchored = models.init_params(
        models.ModelKind.Persistence, 3, 4, 2, anchor = 1 )
    assert np.array_equal(
        models.forecast( anchored, inputs ),
        [ [ 5.0 ] * 4, [ 11.0 ] * 4 ] )
    plain = models.init_params( models.ModelKind.Persistence, 3, 4, 2 )
    assert np.array_equal(
        models.forecast( plain, inputs ), np.zeros( ( 2, 4 ) ) )
    assert not plain.survey_arrays( )
    assert not models.ModelKind.Persistence.trainable


@pytest.mark.parametrize(
    'kind', ( models.ModelKind.Linear, models.ModelKind.NLinear,
              models.ModelKind.DLinear ) )
def test_700_gradient_vanishes_at_fit( kind ):
    ''' Exact predictions yield zero gradient. '''
    params = models.init_params( kind, 4, 2, 2, kernel = 3, seed = 1 )
    inputs = np.random.default_rng( 7 ).standard_normal( ( 3, 4, 2 ) )
    targets = models.forecast( params, inputs )
    loss, gradient = models.model_loss_and_grad( params, inputs, targets )
    assert loss == 0.0
    for array in gradient.survey_arrays( ).values( ):
        assert not array.any( )


def test_710_gradient_scalar_closed_form( ):
    ''' Single-weight gradient equals two times input times residual. '''
    params = models.LinearParams(
        lookback = 1, channels = 1, horizon = 1,
        weights = np.array( [ [ 0.75 ] ] ), bias = np.array( [ 0.25 ] ) )
    inputs = np.array( [ [ [ 2.0 ] ] ] )
    targets = np.array( [ [ 1.0 ] ] )
    residual = 0.75 * 2.0 + 0.25 - 1.0
    gradient = models.model_grad( params, inputs, targets )
    assert gradient.weights[ 0, 0 ] == pytest.approx( 2.0 * 2.0 * residual )
    assert gradient.bias[ 0 ] == pytest.approx( 2.0 * residual )
    assert isinstance( gradient, models.LinearParams )


def test_720_gradient_rejects_targets( ):
    ''' Targets must match prediction shape. '''
    params = models.init_params( models.ModelKind.Linear, 4, 2, 1 )
    with pytest.raises( exceptions.ShapeIncompatibility ):
        models.model_grad(
            params, np.zeros( ( 3, 4, 1 ) ), np.zeros( ( 3, 3 ) ) )


def test_800_init_deterministic( ):
    ''' Same seed gives bit-identical records; biases start at zero. '''
    first = models.init_params( models.ModelKind.DLinear, 6, 3, 2, seed = 8 )
    second = models.init_params( models.ModelKind.DLinear, 6, 3, 2, seed = 8 )
    for name, array in first.survey_arrays( ).items( ):
        assert np.array_equal( array, second.survey_arrays( )[ name ] )
    assert not first.trend_bias.any( )
    assert not first.seasonal_bias.any( )
    other = models.init_params( models.ModelKind.DLinear, 6, 3, 2, seed = 9 )
    assert not np.array_equal( first.trend_weights, other.trend_weights )


def test_810_init_within_bound( ):
    ''' Ten thousand draws respect inverse root of fan-in. '''
    params = models.init_params( models.ModelKind.Linear, 100, 10, 10 )
    assert params.weights.size == 10_000
    assert np.abs( params.weights ).max( ) <= 1.0 / np.sqrt( 1000 )


@pytest.mark.parametrize(
    'lookback, horizon, channels',
    ( ( 0, 1, 1 ), ( 1, 0, 1 ), ( 1, 1, 0 ) )
)
def test_820_init_rejects_dimensions( lookback, horizon, channels ):
    ''' Dimensions must be positive. '''
    with pytest.raises( exceptions.DimensionInvalidity ):
        models.init_params(
            models.ModelKind.Linear, lookback, horizon, channels )
