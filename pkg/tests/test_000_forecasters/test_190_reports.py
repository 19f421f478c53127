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


''' Assert comparison tables rendered from run records. '''


import pytest

from absence import absent, is_absent

from . import __


benchmarks = __.cache_import_module( f"{__.PACKAGE_NAME}.benchmarks" )
exceptions = __.cache_import_module( f"{__.PACKAGE_NAME}.exceptions" )
metrics = __.cache_import_module( f"{__.PACKAGE_NAME}.metrics" )
reports = __.cache_import_module( f"{__.PACKAGE_NAME}.reports" )


def _produce_report( model, split, mse, mae = None, kl = None ):
    sizes = { 'training': 36105, 'validation': 10275, 'test': 10563 }
    return metrics.MetricReport(
        model_name = model, split_name = split,
        samples = sizes[ split ] - 191, size = sizes[ split ],
        mse = mse,
        mae = absent if mae is None else mae,
        kl = absent if kl is None else kl )


def _produce_record( reports_, failures = ( ) ):
    return benchmarks.RunRecord(
        configuration = '', version = '0', seed = 0,
        started = '', finished = '',
        models = ( 'linear', 'nlinear', 'persistence' ),
        trainings = ( ), metrics = tuple( reports_ ),
        failures = tuple( failures ) )


def _produce_table_record( ):
    return _produce_record( (
        _produce_report( 'nlinear', 'test', 0.5220, 0.2461 ),
        _produce_report( 'linear', 'test', 0.5532, 0.2617 ),
        _produce_report( 'linear', 'training', 0.2114 ),
        _produce_report( 'nlinear', 'validation', 0.3001, 0.2012 ),
        _produce_report( 'linear', 'validation', 0.3120, 0.2143 ),
        _produce_report( 'nlinear', 'training', 0.2057 ),
        _produce_report( 'persistence', 'test', 1.1, 0.7 ),
    ) )


def test_100_markdown_orders_rows( ):
    ''' Rows follow split order, then configured model order. '''
    text = reports.render_report( _produce_table_record( ) )
    rows = [ line for line in text.splitlines( )[ 2 : ] if line ]
    labels = [
        tuple( cell.strip( ).strip( '*' )
               for cell in row.strip( '|' ).split( '|' )[ : 2 ] )
        for row in rows[ : 7 ] ]
    assert labels == [
        ( 'linear', 'Training' ), ( 'nlinear', 'Training' ),
        ( 'linear', 'Validation' ), ( 'nlinear', 'Validation' ),
        ( 'linear', 'Official Test' ), ( 'nlinear', 'Official Test' ),
        ( 'persistence\\', 'Official Test' ) ]


def test_110_markdown_emphasizes_best_test_row( ):
    ''' Lowest test error is bold with its values. '''
    text = reports.render_report( _produce_table_record( ) )
    bold = [ line for line in text.splitlines( ) if '**' in line ]
    assert bold == [
        '| **nlinear** | **Official Test** | **10,563** | **0.2461** '
        '| **0.5220** |' ]
    assert 'Best test MAE in bold.' in text


def test_120_markdown_marks_missing_values( ):
    ''' Absent training error renders as placeholder. '''
    text = reports.render_report( _produce_table_record( ) )
    assert '| linear | Training | 36,105 | -- | 0.2114 |' in text
    assert 'KL' not in text.splitlines( )[ 0 ]


def test_130_markdown_footnotes( ):
    ''' Baseline and failures receive notes. '''
    failure = benchmarks.FailureMarker(
        model_name = 'dlinear', stage = 'training',
        error = 'LossNonfinitude', message = 'diverged' )
    record = _produce_record(
        _produce_table_record( ).metrics, failures = ( failure, ) )
    text = reports.render_report( record )
    assert '| persistence\\* | Official Test |' in text
    assert 'Persistence repeats the last anchor value' in text
    assert 'Failed: dlinear during training (LossNonfinitude).' in text


def test_140_markdown_divergence_column( ):
    ''' Divergence column appears once any report carries it. '''
    record = _produce_record( (
        _produce_report( 'linear', 'training', 0.2 ),
        _produce_report( 'linear', 'test', 0.5, 0.25, kl = 0.125 ),
    ) )
    lines = reports.render_report( record ).splitlines( )
    assert lines[ 0 ] == '| Model | Split | Size | MAE | MSE | KL |'
    assert lines[ 2 ].endswith( '| -- | 0.2000 | -- |' )
    assert lines[ 3 ].endswith( '**0.1250** |' )


def test_200_csv_round_trip( ):
    ''' Parsed table reproduces every numeric cell. '''
    record = _produce_table_record( )
    rows = reports.parse_csv_report(
        reports.render_report( record, reports.ReportFormat.Csv ) )
    assert len( rows ) == len( record.metrics )
    expected = {
        ( report.model_name, report.split_name ): report
        for report in record.metrics }
    for row in rows:
        report = expected[ ( row.model_name, row.split_name ) ]
        assert row.size == report.size
        assert row.samples == report.samples
        assert row.mse == report.mse
        assert is_absent( row.mae ) == is_absent( report.mae )
        if not is_absent( row.mae ): assert row.mae == report.mae
        assert is_absent( row.kl )
    assert [ row.best for row in rows ].count( True ) == 1
    best = next( row for row in rows if row.best )
    assert ( best.model_name, best.mae ) == ( 'nlinear', 0.2461 )


def test_210_csv_keeps_full_precision( ):
    ''' Floats survive without rounding. '''
    value = 0.1 + 0.2
    record = _produce_record( (
        _produce_report( 'linear', 'test', value, value / 3.0 ), ) )
    ( row, ) = reports.parse_csv_report(
        reports.render_report( record, reports.ReportFormat.Csv ) )
    assert row.mse == value
    assert row.mae == value / 3.0


def test_300_rejects_empty_record( ):
    ''' Record without reports cannot be tabulated. '''
    for format_ in reports.ReportFormat:
        with pytest.raises( exceptions.RecordInvalidity ):
            reports.render_report( _produce_record( ( ) ), format_ )


def test_310_parse_rejects_foreign_tables( ):
    ''' Tables lacking columns or numbers are refused. '''
    with pytest.raises( exceptions.RecordInvalidity ):
        reports.parse_csv_report( '' )
    with pytest.raises( exceptions.RecordInvalidity ):
        reports.parse_csv_report( 'model,split\nlinear,test\n' )
    with pytest.raises( exceptions.RecordInvalidity ):
        reports.parse_csv_report(
            'model,split,size,samples,mae,mse,kl,best\n'
            'linear,test,many,1,--,0.5,--,false\n' )
