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


''' Assert command-line surface of benchmark harness. '''


import json

import pytest

from . import __


cli = __.cache_import_module( f"{__.PACKAGE_NAME}.cli" )


def _prepare( location, **entries ):
    __.write_series( location / 'series.csv', __.produce_series( 300 ) )
    settings = dict(
        data = 'series.csv', target = 'load',
        training_size = 200, validation_size = 50, test_size = 50,
        lookback = 8, horizon = 4, models = [ 'linear', 'persistence' ],
        learning_rate = 5e-4, batch_size = 16, max_epochs = 2 )
    settings.update( entries )
    return __.write_config( location / 'bench.toml', **settings )


def _extract_error( text ):
    ''' Error document which follows any log lines. '''
    return json.loads( text[ text.index( '{\n' ) : ] )


def test_100_split_info( tmp_path, capsys ):
    ''' Split summary is emitted as JSON. '''
    location = _prepare( tmp_path )
    cli.execute( [ 'split-info', '--config', str( location ) ] )
    summaries = json.loads( capsys.readouterr( ).out )
    assert [ summary[ 'split' ] for summary in summaries ] == [
        'training', 'validation', 'test' ]
    assert [ summary[ 'windows' ] for summary in summaries ] == [
        189, 39, 39 ]


def test_110_train_then_evaluate( tmp_path, capsys ):
    ''' Training summary precedes evaluation of saved checkpoints. '''
    location = _prepare( tmp_path )
    cli.execute( [ 'train', '--config', str( location ) ] )
    summary = json.loads( capsys.readouterr( ).out )
    assert tuple( summary ) == ( 'linear', )
    assert 1 <= summary[ 'linear' ][ 'best_epoch' ] <= 2
    cli.execute( [ 'evaluate', '--config', str( location ) ] )
    reports = json.loads( capsys.readouterr( ).out )
    assert len( reports ) == 6
    assert { report[ 'model' ] for report in reports } == {
        'linear', 'persistence' }


def test_120_bench_renders_markdown( tmp_path, capsys ):
    ''' Full run prints comparison table. '''
    location = _prepare( tmp_path )
    cli.execute( [ 'bench', '--config', str( location ) ] )
    text = capsys.readouterr( ).out
    assert text.startswith( '| Model | Split | Size | MAE | MSE |' )
    assert ( tmp_path / 'runs' / 'record.json' ).is_file( )


def test_130_bench_overrides( tmp_path, capsys ):
    ''' Seed and output directory come from command line. '''
    location = _prepare( tmp_path )
    output = tmp_path / 'elsewhere'
    cli.execute( [
        'bench', '--config', str( location ), '--seed', '7',
        '--out', str( output ), '--format', 'csv' ] )
    text = capsys.readouterr( ).out
    assert text.startswith( 'model,split,size,samples,mae,mse,kl,best' )
    record = json.loads(
        ( output / 'record.json' ).read_text( encoding = 'utf-8' ) )
    assert record[ 'seed' ] == 7
    assert not ( tmp_path / 'runs' ).exists( )


def test_140_report_from_record( tmp_path, capsys ):
    ''' Persisted record is tabulated again. '''
    location = _prepare( tmp_path )
    cli.execute( [ 'bench', '--config', str( location ) ] )
    rendered = capsys.readouterr( ).out
    cli.execute( [ 'report', '--out', str( tmp_path / 'runs' ) ] )
    assert capsys.readouterr( ).out == rendered
    cli.execute( [ 'report', '--config', str( location ) ] )
    assert capsys.readouterr( ).out == rendered


def test_200_errors_render_as_json( tmp_path, capsys ):
    ''' Package errors exit with status one and JSON on stderr. '''
    with pytest.raises( SystemExit ) as info:
        cli.execute(
            [ 'split-info', '--config', str( tmp_path / 'absent.toml' ) ] )
    assert info.value.code == 1
    error = _extract_error( capsys.readouterr( ).err )
    assert error[ 'error' ] == 'DataAbsence'
    assert error[ 'location' ] == str( tmp_path / 'absent.toml' )


def test_210_report_requires_location( capsys ):
    ''' Report without record location is refused. '''
    with pytest.raises( SystemExit ) as info:
        cli.execute( [ 'report' ] )
    assert info.value.code == 1
    error = _extract_error( capsys.readouterr( ).err )
    assert error[ 'error' ] == 'ConfigurationInvalidity'
    assert error[ 'entry' ] == 'out'


def test_220_bench_failure_context( tmp_path, capsys ):
    ''' Failing model is named in error output. '''
    location = _prepare(
        tmp_path, models = [ 'linear' ],
        training = { 'linear': { 'learning_rate': 1e200 } } )
    with pytest.raises( SystemExit ) as info:
        cli.execute( [ 'bench', '--config', str( location ) ] )
    assert info.value.code == 1
    error = _extract_error( capsys.readouterr( ).err )
    assert error[ 'error' ] == 'BenchFailure'
    assert error[ 'model' ] == 'linear'
    assert error[ 'stage' ] == 'training'
    assert error[ 'cause' ] == 'LossNonfinitude'


def test_230_missing_command( ):
    ''' Absent subcommand is a usage error. '''
    with pytest.raises( SystemExit ) as info:
        cli.execute( [ ] )
    assert info.value.code != 0


@pytest.mark.parametrize(
    'name',
    ( 'SplitInfoCommand', 'TrainCommand', 'EvaluateCommand', 'BenchCommand' ),
)
def test_240_subcommands_implement_invocation( name ):
    ''' Configured subcommands replace abstract invocation. '''
    assert cli._Command.__call__.__isabstractmethod__
    command_class = getattr( cli, name )
    assert not getattr(
        command_class.__call__, '__isabstractmethod__', False )
