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


''' Comparison tables of run records in Markdown and CSV. '''


from . import __
from . import benchmarks as _benchmarks
from . import exceptions as _exceptions
from . import metrics as _metrics
from . import models as _models


MISSING = '--'

_csv_columns = (
    'model', 'split', 'size', 'samples', 'mae', 'mse', 'kl', 'best' )
_extension_marker = '*'
_split_labels: __.cabc.Mapping[ str, str ] = __.types.MappingProxyType( {
    'training': 'Training',
    'validation': 'Validation',
    'test': 'Official Test',
} )


class ReportFormat( __.enum.Enum ):
    ''' Output formats of comparison tables. '''

    Markdown = 'markdown'
    Csv = 'csv'


class ReportRow( __.immut.DataclassObject ):
    ''' One model on one split, as read back from CSV table. '''

    model_name: str
    split_name: str
    size: int
    samples: int
    mse: float
    mae: __.Absential[ float ] = __.absent
    kl: __.Absential[ float ] = __.absent
    best: bool = False


def render_report(
    record: _benchmarks.RunRecord,
    format: ReportFormat = ReportFormat.Markdown, # noqa: A002
) -> str:
    ''' Renders metric reports grouped by split in time order.

        The test row with the lowest mean absolute error is emphasized.
    '''
    reports = _order_reports( record )
    best = _locate_best( reports )
    match format:
        case ReportFormat.Markdown:
            return _render_markdown( record, reports, best )
        case ReportFormat.Csv:
            return _render_csv( reports, best )


def parse_csv_report( text: str ) -> tuple[ ReportRow, ... ]:
    ''' Reads rows of CSV comparison table. '''
    try:
        table = __.pd.read_csv(
            __.io.StringIO( text ), dtype = str, keep_default_na = False )
    except __.pd.errors.EmptyDataError as exc:
        raise _exceptions.RecordInvalidity( 'empty report table' ) from exc
    absent = [ column for column in _csv_columns if column not in table ]
    if absent:
        raise _exceptions.RecordInvalidity(
            f"report table lacks columns {absent}" )
    try:
        return tuple(
            ReportRow(
                model_name = row[ 'model' ],
                split_name = row[ 'split' ],
                size = int( row[ 'size' ] ),
                samples = int( row[ 'samples' ] ),
                mse = float( row[ 'mse' ] ),
                mae = _parse_optional( row[ 'mae' ] ),
                kl = _parse_optional( row[ 'kl' ] ),
                best = row[ 'best' ] == 'true' )
            for row in table.to_dict( orient = 'records' ) )
    except ValueError as exc:
        raise _exceptions.RecordInvalidity( str( exc ) ) from exc


def _format_optional(
    value: __.Absential[ float ], template: str = '{:.4f}'
) -> str:
    return MISSING if __.is_absent( value ) else template.format( value )


def _label_model( name: str ) -> str:
    if name == _models.ModelKind.Persistence.value:
        return f"{name}\\{_extension_marker}"
    return name


def _locate_best(
    reports: __.cabc.Sequence[ _metrics.MetricReport ]
) -> __.Absential[ _metrics.MetricReport ]:
    candidates = [
        report for report in reports
        if report.split_name == 'test' and not __.is_absent( report.mae ) ]
    if not candidates: return __.absent
    return min( candidates, key = lambda report: report.mae )


def _order_reports(
    record: _benchmarks.RunRecord
) -> list[ _metrics.MetricReport ]:
    if not record.metrics:
        raise _exceptions.RecordInvalidity( 'record holds no metric reports' )
    splits = list( _split_labels )
    models = list( record.models )

    def rank( report: _metrics.MetricReport ) -> tuple[ int, int ]:
        split = (
            splits.index( report.split_name )
            if report.split_name in splits else len( splits ) )
        model = (
            models.index( report.model_name )
            if report.model_name in models else len( models ) )
        return split, model

    return sorted( record.metrics, key = rank )


def _parse_optional( text: str ) -> __.Absential[ float ]:
    return __.absent if text in ( '', MISSING ) else float( text )


def _render_csv(
    reports: __.cabc.Sequence[ _metrics.MetricReport ],
    best: __.Absential[ _metrics.MetricReport ],
) -> str:
    table = __.pd.DataFrame(
        [   {
                'model': report.model_name,
                'split': report.split_name,
                'size': str( report.size ),
                'samples': str( report.samples ),
                'mae': _format_optional( report.mae, '{!r}' ),
                'mse': repr( report.mse ),
                'kl': _format_optional( report.kl, '{!r}' ),
                'best': 'true' if report is best else 'false',
            }
            for report in reports ],
        columns = list( _csv_columns ) )
    return table.to_csv( index = False, lineterminator = '\n' )


def _render_markdown(
    record: _benchmarks.RunRecord,
    reports: __.cabc.Sequence[ _metrics.MetricReport ],
    best: __.Absential[ _metrics.MetricReport ],
) -> str:
    with_kl = any( not __.is_absent( report.kl ) for report in reports )
    header = [ 'Model', 'Split', 'Size', 'MAE', 'MSE' ]
    alignment = [ '---', '---', '---:', '---:', '---:' ]
    if with_kl:
        header.append( 'KL' )
        alignment.append( '---:' )
    lines = [
        '| {} |'.format( ' | '.join( header ) ),
        '| {} |'.format( ' | '.join( alignment ) ) ]
    for report in reports:
        cells = [
            _label_model( report.model_name ),
            _split_labels.get( report.split_name, report.split_name ),
            f"{report.size:,}",
            _format_optional( report.mae ),
            f"{report.mse:.4f}" ]
        if with_kl: cells.append( _format_optional( report.kl ) )
        if report is best: cells = [ f"**{cell}**" for cell in cells ]
        lines.append( '| {} |'.format( ' | '.join( cells ) ) )
    notes: list[ str ] = [ ]
    if any(
        report.model_name == _models.ModelKind.Persistence.value
        for report in reports
    ):
        notes.append(
            f"\\{_extension_marker} Persistence repeats the last anchor "
            "value and serves as a sanity floor; it is an extension of the "
            "compared models." )
    if not __.is_absent( best ):
        notes.append( 'Best test MAE in bold.' )
    notes.extend(
        f"Failed: {failure.model_name} during {failure.stage} "
        f"({failure.error})."
        for failure in record.failures )
    if notes: lines.extend( [ '', *notes ] )
    return '\n'.join( lines ) + '\n'
