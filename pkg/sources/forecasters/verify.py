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


''' Independent oracles: least squares and finite differences.

    Gradient agreement is relative error with a unit floor on the
    denominator by default. Entries below one in magnitude are thereby held
    to an absolute bound of the same size.
'''


from . import __
from . import exceptions as _exceptions
from . import models as _models


RIDGE_DEFAULT = 1e-9
DISCREPANCY_FLOOR_DEFAULT = 1.0
STEP_DEFAULT = 1e-5


LossFunction: __.typx.TypeAlias = __.cabc.Callable[
    [ _models.Parameters ], float ]


class OlsSolution( __.immut.DataclassObject ):
    ''' Least-squares affine map and its residual error. '''

    weights: __.Array
    bias: __.Array
    residual_mse: float

    def predict( self, inputs: __.Array ) -> __.Array:
        ''' Applies affine map to design rows. '''
        return inputs @ self.weights.T + self.bias


def ols_solve(
    inputs: __.typx.Annotated[
        __.Array, __.typx.Doc( ''' Design matrix of shape [N, D]. ''' ),
    ],
    targets: __.typx.Annotated[
        __.Array, __.typx.Doc( ''' Targets of shape [N, H]. ''' ),
    ],
    ridge: float = RIDGE_DEFAULT,
    intercept: bool = True,
) -> OlsSolution:
    ''' Minimizes mean squared error of affine map via normal equations.

        A small ridge keeps collinear designs solvable. It also applies to
        the intercept.
    '''
    if inputs.ndim != 2 or targets.ndim != 2 or ( # noqa: PLR2004
        inputs.shape[ 0 ] != targets.shape[ 0 ]
    ):
        raise _exceptions.ShapeIncompatibility(
            'design', '[N, D] with targets [N, H]',
            inputs.shape + targets.shape )
    if inputs.shape[ 0 ] < 1:
        raise _exceptions.MetricInputInvalidity( 'ols_solve' )
    for name, matrix in ( ( 'inputs', inputs ), ( 'targets', targets ) ):
        invalid = __.np.argwhere( ~__.np.isfinite( matrix ) )
        if invalid.size:
            raise _exceptions.DataInvalidity(
                int( invalid[ 0 ][ 0 ] ) + 1, name,
                'non-finite entry', 'least-squares design' )
    design = (
        __.np.hstack( ( inputs, __.np.ones( ( inputs.shape[ 0 ], 1 ) ) ) )
        if intercept else inputs )
    gram = design.T @ design + ridge * __.np.eye( design.shape[ 1 ] )
    coefficients = __.np.linalg.solve( gram, design.T @ targets )
    if intercept:
        weights = coefficients[ : -1 ].T
        bias = coefficients[ -1 ]
    else:
        weights = coefficients.T
        bias = __.np.zeros( targets.shape[ 1 ] )
    return OlsSolution(
        weights = weights,
        bias = bias,
        residual_mse = measure_affine_mse( inputs, targets, weights, bias ) )


def measure_affine_mse(
    inputs: __.Array,
    targets: __.Array,
    weights: __.Array,
    bias: __.Array,
) -> float:
    ''' Mean squared error of affine map over design. '''
    residual = inputs @ weights.T + bias - targets
    return float( __.np.mean( residual * residual ) )


def finite_diff_grad(
    loss: LossFunction,
    params: _models.Parameters,
    step: float = STEP_DEFAULT,
) -> _models.Parameters:
    ''' Central-difference gradient for every learnable coordinate. '''
    if step <= 0.0:
        raise _exceptions.ConfigurationInvalidity(
            'step', 'finite-difference step must be positive' )
    arrays = params.survey_arrays( )
    gradients: dict[ str, __.Array ] = { }
    for name, array in arrays.items( ):
        gradient = __.np.zeros_like( array, dtype = __.np.float64 )
        for position in __.np.ndindex( array.shape ):
            probes: list[ float ] = [ ]
            for offset in ( step, -step ):
                probe = array.astype( __.np.float64, copy = True )
                probe[ position ] += offset
                value = loss( params.with_arrays(
                    { **arrays, name: probe } ) )
                if not __.math.isfinite( value ):
                    raise _exceptions.LossNonfinitude( 0, value )
                probes.append( value )
            gradient[ position ] = ( probes[ 0 ] - probes[ 1 ] ) / ( 2 * step )
        gradients[ name ] = gradient
    return params.with_arrays( gradients )


def measure_gradient_discrepancy(
    analytic: _models.Parameters,
    numeric: _models.Parameters,
    floor: __.typx.Annotated[
        float,
        __.typx.Doc( ''' Least denominator of relative error. ''' ),
    ] = DISCREPANCY_FLOOR_DEFAULT,
) -> float:
    ''' Largest relative disagreement between two gradient records.

        Each entry is divided by the larger magnitude of the pair, but never
        by less than the floor. Entries smaller than the floor are thus
        compared absolutely. With the unit default, relative error is only
        measured for gradient entries of magnitude one or more.
    '''
    if not floor > 0.0:
        raise _exceptions.ConfigurationInvalidity(
            'floor', 'must be positive' )
    discrepancy = 0.0
    numerics = numeric.survey_arrays( )
    for name, array in analytic.survey_arrays( ).items( ):
        other = numerics[ name ]
        if array.shape != other.shape:
            raise _exceptions.ShapeIncompatibility(
                name, array.shape, other.shape )
        scale = __.np.maximum(
            floor, __.np.maximum( __.np.abs( array ), __.np.abs( other ) ) )
        if array.size:
            discrepancy = max(
                discrepancy,
                float( __.np.max( __.np.abs( array - other ) / scale ) ) )
    return discrepancy
