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


''' Command-line interface. '''


from . import __
from . import benchmarks as _benchmarks
from . import configuration as _configuration
from . import dataio as _dataio
from . import exceptions as _exceptions
from . import reports as _reports


class _Command( __.immut.DataclassObject ):

    config: __.typx.Annotated[
        __.pathlib.Path,
        __.typx.Doc( ''' Benchmark configuration file (TOML). ''' ),
    ]
    seed: __.typx.Annotated[
        int | None, __.typx.Doc( ''' Replaces configured seed. ''' ),
    ] = None
    out: __.typx.Annotated[
        __.pathlib.Path | None,
        __.typx.Doc( ''' Replaces configured output directory. ''' ),
    ] = None

    @__.abc.abstractmethod
    def __call__( self, stream: __.typx.TextIO ) -> None:
        raise NotImplementedError

    def provide_configuration( self ) -> _configuration.BenchConfig:
        ''' Loads configuration with command-line overrides applied. '''
        return _configuration.load_config(
            self.config,
            seed = __.absent if self.seed is None else self.seed,
            output = __.absent if self.out is None else self.out )


class SplitInfoCommand( _Command ):
    ''' Shows split boundaries and window counts as JSON. '''

    def __call__( self, stream: __.typx.TextIO ) -> None:
        configuration = self.provide_configuration( )
        frame = _dataio.load_csv( configuration.data, configuration.target )
        splits = _dataio.make_splits( frame, configuration.splits )
        summaries = _dataio.summarize_splits(
            splits, configuration.lookback, configuration.horizon )
        _emit_json( stream, summaries )


class TrainCommand( _Command ):
    ''' Trains configured models and saves checkpoints. '''

    def __call__( self, stream: __.typx.TextIO ) -> None:
        trainings = _benchmarks.train_models( self.provide_configuration( ) )
        _emit_json( stream, {
            name: {
                'best_epoch': report.best_epoch,
                'stop_epoch': report.stop_epoch,
                'best_validation_mae': report.best_validation_mae,
            }
            for name, report in trainings.items( ) } )


class EvaluateCommand( _Command ):
    ''' Evaluates saved checkpoints on every split. '''

    def __call__( self, stream: __.typx.TextIO ) -> None:
        reports = _benchmarks.evaluate_models( self.provide_configuration( ) )
        _emit_json(
            stream, [ report.render_as_json( ) for report in reports ] )


class BenchCommand( _Command ):
    ''' Trains, evaluates, and reports every configured model. '''

    format: _reports.ReportFormat = _reports.ReportFormat.Markdown

    def __call__( self, stream: __.typx.TextIO ) -> None:
        record = _benchmarks.run_bench( self.provide_configuration( ) )
        stream.write( _reports.render_report( record, self.format ) )


class ReportCommand( __.immut.DataclassObject ):
    ''' Renders comparison table of persisted run record. '''

    config: __.typx.Annotated[
        __.pathlib.Path | None,
        __.typx.Doc( ''' Configuration naming output directory. ''' ),
    ] = None
    out: __.typx.Annotated[
        __.pathlib.Path | None,
        __.typx.Doc( ''' Output directory or record file. ''' ),
    ] = None
    format: _reports.ReportFormat = _reports.ReportFormat.Markdown

    def __call__( self, stream: __.typx.TextIO ) -> None:
        if self.out is not None: location = self.out
        elif self.config is not None:
            location = _configuration.load_config( self.config ).output
        else:
            raise _exceptions.ConfigurationInvalidity(
                'out', 'either --out or --config is required' )
        record = _benchmarks.restore_record( location )
        stream.write( _reports.render_report( record, self.format ) )


class Cli( __.immut.DataclassObject ):
    ''' Linear forecaster benchmarks. '''

    command: __.typx.Union[
        __.typx.Annotated[
            SplitInfoCommand,
            __.tyro.conf.subcommand( 'split-info', prefix_name = False ),
        ],
        __.typx.Annotated[
            TrainCommand,
            __.tyro.conf.subcommand( 'train', prefix_name = False ),
        ],
        __.typx.Annotated[
            EvaluateCommand,
            __.tyro.conf.subcommand( 'evaluate', prefix_name = False ),
        ],
        __.typx.Annotated[
            BenchCommand,
            __.tyro.conf.subcommand( 'bench', prefix_name = False ),
        ],
        __.typx.Annotated[
            ReportCommand,
            __.tyro.conf.subcommand( 'report', prefix_name = False ),
        ],
    ]
    verbose: bool = False

    def __call__( self, stream: __.typx.TextIO ) -> None:
        _prepare_scribes( self.verbose )
        self.command( stream )


def execute( arguments: __.cabc.Sequence[ str ] | None = None ) -> None:
    ''' Entrypoint for CLI execution. '''
    config = (
        __.tyro.conf.EnumChoicesFromValues,
        __.tyro.conf.HelptextFromCommentsOff,
        __.tyro.conf.OmitSubcommandPrefixes,
    )
    try:
        __.tyro.cli( Cli, args = arguments, config = config )( __.sys.stdout )
    except SystemExit: raise
    except _exceptions.Omnierror as exc:
        _emit_json( __.sys.stderr, exc.render_as_json( ) )
        raise SystemExit( 1 ) from None
    except Exception as exc:
        _emit_json( __.sys.stderr, {
            'error': type( exc ).__name__, 'message': str( exc ) } )
        raise SystemExit( 2 ) from None


def _emit_json( stream: __.typx.TextIO, document: __.typx.Any ) -> None:
    stream.write( __.json.dumps( document, indent = 2 ) + '\n' )


def _prepare_scribes( verbose: bool ) -> None:
    __.logging.basicConfig(
        format = '%(levelname)s %(name)s: %(message)s',
        level = __.logging.DEBUG if verbose else __.logging.WARNING,
        stream = __.sys.stderr )
