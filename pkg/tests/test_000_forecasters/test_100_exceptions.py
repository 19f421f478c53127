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


''' Assert rendering and hierarchy of package exceptions. '''


import json

from pathlib import Path

import pytest

from . import __


exceptions = __.cache_import_module( f"{__.PACKAGE_NAME}.exceptions" )


@pytest.mark.parametrize(
    'exception',
    (
        exceptions.AnchorInvalidity( 3, 2 ),
        exceptions.ChannelAbsence( 'humidity', 'series.csv' ),
        exceptions.DataAbsence( Path( 'absent.csv' ) ),
        exceptions.DataInvalidity( 7, 'hum', 'non-finite value', 'x.csv' ),
        exceptions.KernelInvalidity( 4 ),
        exceptions.SplitOverflow( 10, 9 ),
        exceptions.TimestampDisorder( 2, 'x.csv' ),
        exceptions.WindowInsufficiency( 'test', 100, 96, 96 ),
    )
)
def test_100_hierarchy( exception ):
    ''' Every error descends from package base. '''
    assert isinstance( exception, exceptions.Omnierror )
    assert isinstance( exception, exceptions.Omniexception )


def test_110_builtin_bases( ):
    ''' Errors remain catchable by conventional builtin families. '''
    assert isinstance( exceptions.KernelInvalidity( 2 ), ValueError )
    assert isinstance(
        exceptions.ChannelAbsence( 'x', 'y' ), LookupError )
    assert isinstance(
        exceptions.LossNonfinitude( 1, float( 'nan' ) ), FloatingPointError )


def test_200_render_as_json( ):
    ''' JSON rendering carries class name, message, and context. '''
    exception = exceptions.DataInvalidity(
        7, 'hum', 'non-finite value', 'x.csv' )
    rendition = exception.render_as_json( )
    assert rendition[ 'error' ] == 'DataInvalidity'
    assert rendition[ 'row' ] == 7
    assert rendition[ 'column' ] == 'hum'
    assert 'row 7' in rendition[ 'message' ]
    assert json.loads( json.dumps( rendition ) ) == rendition


def test_210_render_stringifies_foreign_values( ):
    ''' Context values outside JSON types become text. '''
    exception = exceptions.DataAbsence( Path( 'absent.csv' ) )
    assert exception.render_as_json( )[ 'location' ] == 'absent.csv'
    mismatch = exceptions.ShapeIncompatibility( 'inputs', ( 2, 3 ), ( 4, ) )
    assert mismatch.render_as_json( )[ 'expected' ] == '(2, 3)'


def test_300_bench_failure_context( ):
    ''' Benchmark failure names model, stage, and cause. '''
    cause = exceptions.WindowInsufficiency( 'test', 100, 96, 96 )
    failure = exceptions.BenchFailure( 'linear', 'test', cause )
    assert failure.context[ 'model' ] == 'linear'
    assert failure.context[ 'stage' ] == 'test'
    assert failure.context[ 'cause' ] == 'WindowInsufficiency'
    assert "'test'" in str( failure )
