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


''' Benchmark pipeline: split, normalize, train, evaluate, persist.

    Outputs land in the configured directory:

    * ``<model>.params.json`` and ``<model>.training.json`` per trainable
      model.
    * ``metrics.json`` with every metric report, free of timings.
    * ``record.json`` with the complete run record.
'''


from . import __
from . import checkpoints as _checkpoints
from . import configuration as _configuration
from . import dataio as _dataio
from . import exceptions as _exceptions
from . import metrics as _metrics
from . import models as _models
from . import training as _training


METRICS_FILE = 'metrics.json'
RECORD_FILE = 'record.json'
SCHEMA_VERSION = 1

_scribe = __.provide_scribe( __name__ )


class FailureMarker( __.immut.DataclassObject ):
    ''' Stage at which model pipeline failed. '''

    model_name: str
    stage: str
    error: str
    message: str

    @classmethod
    def produce( cls, failure: _exceptions.BenchFailure ) -> __.typx.Self:
        ''' Produces marker from benchmark failure. '''
        return cls(
            model_name = failure.context[ 'model' ],
            stage = failure.context[ 'stage' ],
            error = failure.context[ 'cause' ],
            message = str( failure ) )

    def render_as_json( self ) -> dict[ str, __.typx.Any ]:
        ''' Renders marker as JSON-compatible record. '''
        return {
            'model': self.model_name,
            'stage': self.stage,
            'error': self.error,
            'message': self.message,
        }


class RunRecord( __.immut.DataclassObject ):
    ''' Provenance and results of one benchmark run. '''

    configuration: __.typx.Annotated[
        str, __.typx.Doc( ''' Verbatim configuration text. ''' ),
    ]
    version: str
    seed: int
    started: str
    finished: str
    models: tuple[ str, ... ]
    trainings: tuple[ _training.TrainReport, ... ]
    metrics: tuple[ _metrics.MetricReport, ... ]
    failures: tuple[ FailureMarker, ... ] = ( )
    schema_version: int = SCHEMA_VERSION

    @property
    def complete( self ) -> bool:
        ''' Whether every model passed every stage. '''
        return not self.failures

    @classmethod
    def restore(
        cls, record: __.cabc.Mapping[ str, __.typx.Any ]
    ) -> __.typx.Self:
        ''' Restores run record from JSON-compatible record. '''
        version = record.get( 'schema_version' )
        if version != SCHEMA_VERSION:
            raise _exceptions.RecordInvalidity(
                f"unsupported schema version {version!r}" )
        try:
            return cls(
                configuration = str( record[ 'configuration' ] ),
                version = str( record[ 'version' ] ),
                seed = int( record[ 'seed' ] ),
                started = str( record[ 'started' ] ),
                finished = str( record[ 'finished' ] ),
                models = tuple( str( name ) for name in record[ 'models' ] ),
                trainings = tuple(
                    _training.TrainReport.restore( entry )
                    for entry in record[ 'trainings' ] ),
                metrics = tuple(
                    _metrics.MetricReport.restore( entry )
                    for entry in record[ 'metrics' ] ),
                failures = tuple(
                    FailureMarker(
                        model_name = str( entry[ 'model' ] ),
                        stage = str( entry[ 'stage' ] ),
                        error = str( entry[ 'error' ] ),
                        message = str( entry[ 'message' ] ) )
                    for entry in record.get( 'failures', ( ) ) ) )
        except ( KeyError, TypeError, ValueError ) as exc:
            raise _exceptions.RecordInvalidity( str( exc ) ) from exc

    def render_as_json( self ) -> dict[ str, __.typx.Any ]:
        ''' Renders run record as JSON-compatible record. '''
        return {
            'schema_version': self.schema_version,
            'version': self.version,
            'seed': self.seed,
            'started': self.started,
            'finished': self.finished,
            'configuration': self.configuration,
            'models': list( self.models ),
            'trainings': [
                report.render_as_json( ) for report in self.trainings ],
            'metrics': [ report.render_as_json( ) for report in self.metrics ],
            'failures': [
                failure.render_as_json( ) for failure in self.failures ],
        }


class BenchData( __.immut.DataclassObject ):
    ''' Loaded series with its splits and normalized windows. '''

    frame: _dataio.SeriesFrame
    splits: _dataio.Splits
    stats: _dataio.NormStats
    windows: __.immut.Dictionary[ str, _dataio.WindowSet ]
    anchor: __.Absential[ int ] = __.absent

    def access_windows( self, view: _dataio.SplitView ) -> _dataio.WindowSet:
        ''' Window set of split view. '''
        return self.windows[ view.name ]


def prepare_data( configuration: _configuration.BenchConfig ) -> BenchData:
    ''' Loads series, splits it, and assembles windows of every split.

        Normalization statistics come from training rows only.
    '''
    frame = _dataio.load_csv( configuration.data, configuration.target )
    splits = _dataio.make_splits( frame, configuration.splits )
    stats = _dataio.fit_norm_stats( splits.training )
    windows = {
        view.name: _dataio.assemble_windows(
            view, stats, configuration.lookback, configuration.horizon,
            frame.target_index )
        for view in splits.survey( ) }
    for summary in _dataio.summarize_splits(
        splits, configuration.lookback, configuration.horizon
    ):
        _scribe.info(
            "Split '%s' spans rows %d to %d with %d windows.",
            summary[ 'split' ], summary[ 'start' ], summary[ 'stop' ],
            summary[ 'windows' ] )
    anchor = (
        __.absent if __.is_absent( configuration.anchor )
        else frame.locate_exogenous( configuration.anchor ) )
    return BenchData(
        frame = frame,
        splits = splits,
        stats = stats,
        windows = __.immut.Dictionary( windows ),
        anchor = anchor )


def run_bench( configuration: _configuration.BenchConfig ) -> RunRecord:
    ''' Trains and evaluates every configured model and persists results.

        A failing model does not stop the others. Its failure is marked in
        the persisted record and then raised once every model had its turn.
    '''
    started = _stamp_now( )
    data = prepare_data( configuration )
    audit = _dataio.ExogenousAudit( data.frame.target_index )
    trainings: list[ _training.TrainReport ] = [ ]
    reports: list[ _metrics.MetricReport ] = [ ]
    failures: list[ _exceptions.BenchFailure ] = [ ]
    for kind in configuration.models:
        stage = 'training'
        try:
            params, training = _produce_params(
                configuration, data, kind, audit )
            if not __.is_absent( training ):
                _persist_model( configuration.output, params, training )
                trainings.append( training )
            settings = _produce_kl_settings( configuration, data, params )
            for view in data.splits.survey( ):
                stage = view.name
                reports.append( _evaluate_view(
                    data, params, view, kind, audit, settings ) )
        except _exceptions.Omnierror as exc:
            failure = _exceptions.BenchFailure( kind.value, stage, exc )
            _scribe.error( "%s", failure )
            failures.append( failure )
    audit.verify( )
    record = RunRecord(
        configuration = configuration.snapshot,
        version = _provide_version( ),
        seed = configuration.seed,
        started = started,
        finished = _stamp_now( ),
        models = tuple( kind.value for kind in configuration.models ),
        trainings = tuple( trainings ),
        metrics = tuple( reports ),
        failures = tuple(
            FailureMarker.produce( failure ) for failure in failures ) )
    persist_record( record, configuration.output )
    if failures:
        _scribe.warning(
            "Persisted partial record with %d failed models.",
            len( failures ) )
        raise failures[ 0 ]
    return record


def train_models(
    configuration: _configuration.BenchConfig
) -> dict[ str, _training.TrainReport ]:
    ''' Fits trainable models and saves checkpoints with their reports. '''
    data = prepare_data( configuration )
    audit = _dataio.ExogenousAudit( data.frame.target_index )
    trainings: dict[ str, _training.TrainReport ] = { }
    for kind in configuration.models:
        if not kind.trainable: continue
        try:
            params, training = _produce_params(
                configuration, data, kind, audit )
        except _exceptions.Omnierror as exc:
            raise _exceptions.BenchFailure(
                kind.value, 'training', exc ) from exc
        if __.is_absent( training ): continue
        _persist_model( configuration.output, params, training )
        trainings[ kind.value ] = training
    audit.verify( )
    return trainings


def evaluate_models(
    configuration: _configuration.BenchConfig
) -> tuple[ _metrics.MetricReport, ... ]:
    ''' Evaluates saved checkpoints on every split and saves metrics. '''
    data = prepare_data( configuration )
    audit = _dataio.ExogenousAudit( data.frame.target_index )
    reports: list[ _metrics.MetricReport ] = [ ]
    for kind in configuration.models:
        stage = 'loading'
        try:
            params = _restore_params( configuration, data, kind )
            settings = _produce_kl_settings( configuration, data, params )
            for view in data.splits.survey( ):
                stage = view.name
                reports.append( _evaluate_view(
                    data, params, view, kind, audit, settings ) )
        except _exceptions.Omnierror as exc:
            raise _exceptions.BenchFailure( kind.value, stage, exc ) from exc
    audit.verify( )
    save_metrics( reports, configuration.output )
    return tuple( reports )


def persist_record( record: RunRecord, output: __.pathlib.Path ) -> None:
    ''' Writes run record and its metrics into output directory. '''
    output.mkdir( parents = True, exist_ok = True )
    _write_json( output / RECORD_FILE, record.render_as_json( ) )
    save_metrics( record.metrics, output )
    _scribe.info( "Persisted run record to '%s'.", output / RECORD_FILE )


def restore_record( location: __.pathlib.Path ) -> RunRecord:
    ''' Reads run record from file or from output directory holding it. '''
    if location.is_dir( ): location = location / RECORD_FILE
    if not location.is_file( ): raise _exceptions.DataAbsence( location )
    try:
        record = __.json.loads( location.read_text( encoding = 'utf-8' ) )
    except __.json.JSONDecodeError as exc:
        raise _exceptions.RecordInvalidity( str( exc ) ) from exc
    if not isinstance( record, dict ):
        raise _exceptions.RecordInvalidity( 'expected a JSON object' )
    return RunRecord.restore( record )


def save_metrics(
    reports: __.cabc.Sequence[ _metrics.MetricReport ],
    output: __.pathlib.Path,
) -> None:
    ''' Writes metric reports, which repeat exactly for repeated runs. '''
    output.mkdir( parents = True, exist_ok = True )
    _write_json(
        output / METRICS_FILE,
        [ report.render_as_json( ) for report in reports ] )


def _evaluate_view( # noqa: PLR0913
    data: BenchData,
    params: _models.Parameters,
    view: _dataio.SplitView,
    kind: _models.ModelKind,
    audit: _dataio.ExogenousAudit,
    settings: __.Absential[ _metrics.KlSettings ],
) -> _metrics.MetricReport:
    windows = data.access_windows( view )
    audit.record( kind.value, windows )
    training = view is data.splits.training
    return _metrics.evaluate_windows(
        params, windows,
        model_name = kind.value,
        size = view.length,
        include_mae = not training,
        kl = __.absent if training else settings )


def _persist_model(
    output: __.pathlib.Path,
    params: _models.Parameters,
    training: _training.TrainReport,
) -> None:
    name = params.kind.value
    _checkpoints.save_params( params, output / f"{name}.params.json" )
    _write_json( output / f"{name}.training.json", training.render_as_json( ) )


def _produce_kl_settings(
    configuration: _configuration.BenchConfig,
    data: BenchData,
    params: _models.Parameters,
) -> __.Absential[ _metrics.KlSettings ]:
    if __.is_absent( configuration.kl_reference_std ): return __.absent
    spread = _metrics.estimate_residual_spread(
        params, data.access_windows( data.splits.training ) )
    return _metrics.KlSettings(
        reference_std = configuration.kl_reference_std,
        spread = spread,
        direction = configuration.kl_direction )


def _produce_params(
    configuration: _configuration.BenchConfig,
    data: BenchData,
    kind: _models.ModelKind,
    audit: _dataio.ExogenousAudit,
) -> tuple[ _models.Parameters, __.Absential[ _training.TrainReport ] ]:
    training = data.access_windows( data.splits.training )
    validation = data.access_windows( data.splits.validation )
    if not kind.trainable:
        params = _models.init_params(
            kind, configuration.lookback, configuration.horizon,
            training.channels, anchor = data.anchor )
        return params, __.absent
    audit.record( kind.value, training )
    audit.record( kind.value, validation )
    options = _training.FitOptions(
        kernel = configuration.kernel,
        anchor = (
            data.anchor if kind is _models.ModelKind.NLinear
            else __.absent ) )
    return _training.fit(
        kind, training, validation,
        configuration = configuration.provide_training( kind ),
        options = options )


def _provide_version( ) -> str:
    from . import __version__
    return __version__


def _restore_params(
    configuration: _configuration.BenchConfig,
    data: BenchData,
    kind: _models.ModelKind,
) -> _models.Parameters:
    if not kind.trainable:
        return _models.init_params(
            kind, configuration.lookback, configuration.horizon,
            len( data.frame.exogenous_indices ), anchor = data.anchor )
    return _checkpoints.load_params(
        configuration.output / f"{kind.value}.params.json" )


def _stamp_now( ) -> str:
    return __.datetime.datetime.now( __.datetime.timezone.utc ).isoformat( )


def _write_json( location: __.pathlib.Path, document: __.typx.Any ) -> None:
    location.write_text(
        __.json.dumps( document, indent = 2 ) + '\n', encoding = 'utf-8' )
