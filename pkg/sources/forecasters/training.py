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


''' Adam optimization of forecasters with early stopping. '''


from . import __
from . import dataio as _dataio
from . import exceptions as _exceptions
from . import metrics as _metrics
from . import models as _models


BATCH_SIZE_GRID = frozenset( ( 16, 32 ) )
LEARNING_RATE_GRID = frozenset( ( 1e-4, 5e-4 ) )
SETTING_NAMES = (
    'learning_rate', 'weight_decay', 'batch_size', 'patience', 'max_epochs',
    'seed', 'beta1', 'beta2', 'epsilon',
)

_integral_settings = frozenset( (
    'batch_size', 'max_epochs', 'patience', 'seed' ) )
_scribe = __.provide_scribe( __name__ )


Validator: __.typx.TypeAlias = __.cabc.Callable[
    [ _models.Parameters, _dataio.WindowSet ], float ]


class TrainConfig( __.immut.DataclassObject ):
    ''' Optimizer and schedule settings for one forecaster. '''

    learning_rate: float = 1e-4
    weight_decay: float = 1e-4
    batch_size: int = 32
    patience: int = 3
    max_epochs: int = 50
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def produce( cls, **settings: __.typx.Any ) -> __.typx.Self:
        ''' Produces validated configuration from loose settings. '''
        for name in settings:
            if name not in SETTING_NAMES:
                raise _exceptions.ConfigurationInvalidity(
                    name, 'unknown training setting' )
        configuration = cls( **{
            name: _coerce_setting( name, value )
            for name, value in settings.items( ) } )
        configuration.validate( )
        return configuration

    @classmethod
    def restore(
        cls, record: __.cabc.Mapping[ str, __.typx.Any ]
    ) -> __.typx.Self:
        ''' Restores configuration from JSON-compatible record. '''
        return cls.produce( **record )

    def render_as_json( self ) -> dict[ str, __.typx.Any ]:
        ''' Renders configuration as JSON-compatible record. '''
        return {
            name: getattr( self, name ) for name in SETTING_NAMES }

    def validate( self ) -> None:
        ''' Raises on settings which cannot drive optimization. '''
        if not self.learning_rate > 0.0:
            raise _exceptions.ConfigurationInvalidity(
                'learning_rate', 'must be positive' )
        if not self.weight_decay >= 0.0:
            raise _exceptions.ConfigurationInvalidity(
                'weight_decay', 'must not be negative' )
        if not self.epsilon > 0.0:
            raise _exceptions.ConfigurationInvalidity(
                'epsilon', 'must be positive' )
        for name in ( 'beta1', 'beta2' ):
            if not 0.0 < getattr( self, name ) < 1.0:
                raise _exceptions.ConfigurationInvalidity(
                    name, 'must lie strictly between 0 and 1' )
        for name in ( 'batch_size', 'patience', 'max_epochs' ):
            if getattr( self, name ) < 1:
                raise _exceptions.ConfigurationInvalidity(
                    name, 'must be at least 1' )
        if self.seed < 0:
            raise _exceptions.ConfigurationInvalidity(
                'seed', 'must not be negative' )

    def with_overrides(
        self, overrides: __.cabc.Mapping[ str, __.typx.Any ]
    ) -> __.typx.Self:
        ''' Produces configuration with some settings replaced. '''
        return self.produce( **{ **self.render_as_json( ), **overrides } )


class TrainReport( __.immut.DataclassObject ):
    ''' Per-epoch history of one fit.

        Epochs are numbered from one. The best epoch is the one whose
        parameters were returned.
    '''

    model_name: str
    train_losses: tuple[ float, ... ]
    validation_maes: tuple[ float, ... ]
    best_epoch: int
    stop_epoch: int
    durations: tuple[ float, ... ]
    configuration: TrainConfig

    @property
    def best_validation_mae( self ) -> float:
        ''' Validation error of returned parameters. '''
        return self.validation_maes[ self.best_epoch - 1 ]

    @classmethod
    def restore(
        cls, record: __.cabc.Mapping[ str, __.typx.Any ]
    ) -> __.typx.Self:
        ''' Restores report from JSON-compatible record. '''
        try:
            return cls(
                model_name = str( record[ 'model' ] ),
                train_losses = tuple(
                    float( value ) for value in record[ 'train_losses' ] ),
                validation_maes = tuple(
                    float( value ) for value in record[ 'validation_maes' ] ),
                best_epoch = int( record[ 'best_epoch' ] ),
                stop_epoch = int( record[ 'stop_epoch' ] ),
                durations = tuple(
                    float( value ) for value in record[ 'durations' ] ),
                configuration = TrainConfig.restore(
                    record[ 'configuration' ] ) )
        except ( KeyError, TypeError, ValueError ) as exc:
            raise _exceptions.RecordInvalidity(
                f"training report: {exc}" ) from exc

    def render_as_json( self ) -> dict[ str, __.typx.Any ]:
        ''' Renders report as JSON-compatible record. '''
        return {
            'model': self.model_name,
            'train_losses': list( self.train_losses ),
            'validation_maes': list( self.validation_maes ),
            'best_epoch': self.best_epoch,
            'stop_epoch': self.stop_epoch,
            'durations': list( self.durations ),
            'configuration': self.configuration.render_as_json( ),
        }


class AdamState( __.immut.DataclassObject ):
    ''' Moment estimates and step counter of Adam optimizer. '''

    first_moments: __.immut.Dictionary[ str, __.Array ]
    second_moments: __.immut.Dictionary[ str, __.Array ]
    step: int = 0

    @classmethod
    def produce( cls, params: _models.Parameters ) -> __.typx.Self:
        ''' Produces zero moments shaped like learnable arrays. '''
        arrays = params.survey_arrays( )
        return cls(
            first_moments = __.immut.Dictionary( {
                name: __.np.zeros_like( array )
                for name, array in arrays.items( ) } ),
            second_moments = __.immut.Dictionary( {
                name: __.np.zeros_like( array )
                for name, array in arrays.items( ) } ) )


class FitOptions( __.immut.DataclassObject ):
    ''' Architectural settings fixed during fit. '''

    kernel: __.typx.Annotated[
        int, __.typx.Doc( ''' Moving-average kernel for DLinear. ''' ),
    ] = 25
    anchor: __.typx.Annotated[
        __.Absential[ int ],
        __.typx.Doc( ''' Exogenous channel re-added by NLinear. ''' ),
    ] = __.absent


class EarlyStopper:
    ''' Tracks running best of validation error and patience.

        Only strict improvements reset the patience counter.
    '''

    def __init__( self, patience: int ) -> None:
        if patience < 1:
            raise _exceptions.ConfigurationInvalidity(
                'patience', 'must be at least 1' )
        self.patience = patience
        self.best_epoch = 0
        self.best_value = __.math.inf
        self.waiting = 0

    @property
    def exhausted( self ) -> bool:
        ''' Whether patience has run out. '''
        return self.waiting >= self.patience

    def observe( self, epoch: int, value: float ) -> bool:
        ''' Records epoch result. Returns whether it is the new best. '''
        if value < self.best_value:
            self.best_epoch = epoch
            self.best_value = value
            self.waiting = 0
            return True
        self.waiting += 1
        return False


def mse_loss( prediction: __.Array, target: __.Array ) -> float:
    ''' Mean squared error over batch and horizon. '''
    if prediction.shape != target.shape:
        raise _exceptions.ShapeIncompatibility(
            'prediction', target.shape, prediction.shape )
    if not prediction.size:
        raise _exceptions.MetricInputInvalidity( 'mse_loss' )
    residual = prediction - target
    return float( __.np.mean( residual * residual ) )


def adam_step(
    params: _models.Parameters,
    grads: _models.Parameters,
    state: AdamState,
    configuration: TrainConfig,
) -> tuple[ _models.Parameters, AdamState ]:
    ''' Applies one bias-corrected Adam update.

        Weight decay enters as an L2 term added to the gradient before the
        moment updates. Inputs are left untouched; fresh arrays are returned.
    '''
    arrays = params.survey_arrays( )
    gradients = grads.survey_arrays( )
    if type( grads ) is not type( params ) or (
        arrays.keys( ) != gradients.keys( )
    ):
        raise _exceptions.ShapeIncompatibility(
            'gradients', str( tuple( arrays ) ), tuple( ) )
    step = state.step + 1
    beta1, beta2 = configuration.beta1, configuration.beta2
    updated: dict[ str, __.Array ] = { }
    firsts: dict[ str, __.Array ] = { }
    seconds: dict[ str, __.Array ] = { }
    for name, array in arrays.items( ):
        gradient = gradients[ name ]
        _validate_moments( name, array, gradient, state )
        if not __.np.isfinite( gradient ).all( ):
            raise _exceptions.GradientNonfinitude( name, step )
        gradient = gradient + configuration.weight_decay * array
        first = (
            beta1 * state.first_moments[ name ]
            + ( 1.0 - beta1 ) * gradient )
        second = (
            beta2 * state.second_moments[ name ]
            + ( 1.0 - beta2 ) * gradient * gradient )
        corrected_first = first / ( 1.0 - beta1 ** step )
        corrected_second = second / ( 1.0 - beta2 ** step )
        updated[ name ] = array - configuration.learning_rate * (
            corrected_first
            / ( __.np.sqrt( corrected_second ) + configuration.epsilon ) )
        firsts[ name ] = first
        seconds[ name ] = second
    return (
        params.with_arrays( updated ),
        AdamState(
            first_moments = __.immut.Dictionary( firsts ),
            second_moments = __.immut.Dictionary( seconds ),
            step = step ) )


def fit( # noqa: PLR0913
    kind: _models.ModelKind,
    training: _dataio.WindowSet,
    validation: _dataio.WindowSet,
    configuration: TrainConfig = TrainConfig( ),
    options: FitOptions = FitOptions( ),
    validator: __.Absential[ Validator ] = __.absent,
) -> tuple[ _models.Parameters, TrainReport ]:
    ''' Trains forecaster and returns parameters of best validation epoch.

        Every epoch visits training windows in a seeded permutation, takes
        one Adam step per mini-batch, and then scores the full validation
        set. Training stops once the validation error has not strictly
        improved for as many epochs as the patience allows.
    '''
    if not kind.trainable:
        raise _exceptions.ConfigurationInvalidity(
            'models', f"'{kind.value}' has no learnable parameters" )
    configuration.validate( )
    _warn_off_grid( kind, configuration )
    _validate_window_sets( training, validation )
    if __.is_absent( validator ): validator = _metrics.measure_mae
    params = _models.init_params(
        kind, training.lookback, training.horizon, training.channels,
        kernel = options.kernel, seed = configuration.seed,
        anchor = options.anchor )
    state = AdamState.produce( params )
    stopper = EarlyStopper( configuration.patience )
    best = params
    losses: list[ float ] = [ ]
    maes: list[ float ] = [ ]
    durations: list[ float ] = [ ]
    epoch = 0
    for epoch in range( 1, configuration.max_epochs + 1 ):
        began = __.time.perf_counter( )
        params, state, loss = _run_epoch(
            params, state, training, configuration, epoch )
        losses.append( loss )
        score = validator( params, validation )
        if not __.math.isfinite( score ):
            raise _exceptions.LossNonfinitude( epoch, score )
        maes.append( score )
        if stopper.observe( epoch, score ): best = params
        durations.append( __.time.perf_counter( ) - began )
        _scribe.debug(
            "Epoch %d of '%s': train loss %.6g, validation mae %.6g.",
            epoch, kind.value, losses[ -1 ], score )
        if stopper.exhausted: break
    _scribe.info(
        "Fitted '%s' in %d epochs; best epoch %d with validation mae %.6f.",
        kind.value, epoch, stopper.best_epoch, stopper.best_value )
    return best, TrainReport(
        model_name = kind.value,
        train_losses = tuple( losses ),
        validation_maes = tuple( maes ),
        best_epoch = stopper.best_epoch,
        stop_epoch = epoch,
        durations = tuple( durations ),
        configuration = configuration )


def _coerce_setting( name: str, value: __.typx.Any ) -> int | float:
    if isinstance( value, bool ) or not isinstance( value, ( int, float ) ):
        raise _exceptions.ConfigurationInvalidity(
            name, f"expected a number; received {value!r}" )
    if name in _integral_settings:
        if not float( value ).is_integer( ):
            raise _exceptions.ConfigurationInvalidity(
                name, f"expected an integer; received {value!r}" )
        return int( value )
    return float( value )


def _run_epoch(
    params: _models.Parameters,
    state: AdamState,
    training: _dataio.WindowSet,
    configuration: TrainConfig,
    epoch: int,
) -> tuple[ _models.Parameters, AdamState, float ]:
    order = __.np.random.default_rng(
        [ configuration.seed, epoch ] ).permutation( training.count )
    weighted: list[ float ] = [ ]
    for batch in training.batches( configuration.batch_size, order ):
        loss, grads = _models.model_loss_and_grad(
            params, batch.inputs, batch.targets )
        if not __.math.isfinite( loss ):
            raise _exceptions.LossNonfinitude( epoch, loss )
        weighted.append( loss * batch.size )
        params, state = adam_step( params, grads, state, configuration )
    return params, state, __.math.fsum( weighted ) / training.count


def _validate_moments(
    name: str, array: __.Array, gradient: __.Array, state: AdamState
) -> None:
    for label, moments in (
        ( 'first moments', state.first_moments ),
        ( 'second moments', state.second_moments ),
    ):
        if name not in moments:
            raise _exceptions.ShapeIncompatibility(
                f"{label} of '{name}'", array.shape, ( ) )
        if moments[ name ].shape != array.shape:
            raise _exceptions.ShapeIncompatibility(
                f"{label} of '{name}'", array.shape, moments[ name ].shape )
    if gradient.shape != array.shape:
        raise _exceptions.ShapeIncompatibility(
            f"gradient of '{name}'", array.shape, gradient.shape )


def _validate_window_sets(
    training: _dataio.WindowSet, validation: _dataio.WindowSet
) -> None:
    for windows in ( training, validation ):
        if windows.count < 1:
            raise _exceptions.WindowInsufficiency(
                windows.split, 0, windows.lookback, windows.horizon )
    expected = ( training.lookback, training.channels, training.horizon )
    received = (
        validation.lookback, validation.channels, validation.horizon )
    if expected != received:
        raise _exceptions.ShapeIncompatibility(
            'validation windows', expected, received )


def _warn_off_grid(
    kind: _models.ModelKind, configuration: TrainConfig
) -> None:
    if configuration.learning_rate not in LEARNING_RATE_GRID:
        _scribe.warning(
            "Learning rate %g for '%s' lies outside the tuning grid %s.",
            configuration.learning_rate, kind.value,
            sorted( LEARNING_RATE_GRID ) )
    if configuration.batch_size not in BATCH_SIZE_GRID:
        _scribe.warning(
            "Batch size %d for '%s' lies outside the tuning grid %s.",
            configuration.batch_size, kind.value,
            sorted( BATCH_SIZE_GRID ) )
