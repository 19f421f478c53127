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


''' Family of exceptions for package API. '''


from . import __


class Omniexception( __.immut.exceptions.Omniexception ):
    ''' Base for all exceptions raised by package API. '''


class Omnierror( Omniexception, Exception ):
    ''' Base for error exceptions raised by package API.

        Structured context is kept alongside the message so that
        command-line callers can render errors as JSON.
    '''

    def __init__( self, message: str, **context: __.typx.Any ) -> None:
        self.context = __.immut.Dictionary( context )
        super( ).__init__( message )

    def render_as_json( self ) -> dict[ str, __.typx.Any ]:
        ''' Renders exception as JSON-compatible dictionary. '''
        return {
            'error': type( self ).__name__,
            'message': str( self ),
            **{ name: _jsonify( value )
                for name, value in self.context.items( ) },
        }


class AnchorInvalidity( Omnierror, ValueError ):
    ''' Anchor channel index outside of exogenous channels. '''

    def __init__( self, anchor: int, channels: int ) -> None:
        super( ).__init__(
            f"Anchor channel index {anchor} is invalid "
            f"for {channels} exogenous channels.",
            anchor = anchor, channels = channels )


class BenchFailure( Omnierror, RuntimeError ):
    ''' Benchmark stage failed for model and split. '''

    def __init__(
        self, model: str, stage: str, cause: BaseException
    ) -> None:
        super( ).__init__(
            f"Benchmark failed for model '{model}' during '{stage}': "
            f"{cause}",
            model = model, stage = stage,
            cause = type( cause ).__name__ )


class ChannelAbsence( Omnierror, LookupError ):
    ''' Named channel is not present in series. '''

    def __init__( self, name: str, location: str ) -> None:
        super( ).__init__(
            f"Channel '{name}' not found in {location}.",
            channel = name, location = location )


class CheckpointInvalidity( Omnierror, ValueError ):
    ''' Parameters record is malformed or of unsupported format. '''

    def __init__( self, reason: str ) -> None:
        super( ).__init__(
            f"Invalid parameters record: {reason}", reason = reason )


class ConfigurationInvalidity( Omnierror, ValueError ):
    ''' Configuration entry is missing or invalid. '''

    def __init__( self, entry: str, reason: str ) -> None:
        super( ).__init__(
            f"Invalid configuration entry '{entry}': {reason}",
            entry = entry, reason = reason )


class DataAbsence( Omnierror ):
    ''' Data file does not exist. '''

    def __init__( self, location: __.pathlib.Path ) -> None:
        super( ).__init__(
            f"Data file not found at '{location}'.",
            location = str( location ) )


class DataInvalidity( Omnierror, ValueError ):
    ''' Cell or header name of series is malformed. '''

    def __init__(
        self, row: int, column: str, reason: str, location: str
    ) -> None:
        super( ).__init__(
            f"Invalid cell at row {row}, column '{column}' "
            f"in {location}: {reason}",
            row = row, column = column, reason = reason,
            location = location )


class DimensionInvalidity( Omnierror, ValueError ):
    ''' Model or window dimension is not positive. '''

    def __init__( self, name: str, value: int ) -> None:
        super( ).__init__(
            f"Dimension '{name}' must be positive; received {value}.",
            dimension = name, value = value )


class DistributionInvalidity( Omnierror, ValueError ):
    ''' Gaussian forecast with non-positive standard deviation. '''

    def __init__( self, minimum: float ) -> None:
        super( ).__init__(
            "Standard deviations must be strictly positive; "
            f"minimum is {minimum!r}.",
            minimum = minimum )


class ExogenousLeakage( Omnierror, AssertionError ):
    ''' Target channel reached model inputs. '''

    def __init__( self, target: int, sources: str ) -> None:
        super( ).__init__(
            f"Target channel {target} appeared among model inputs "
            f"from {sources}.",
            target = target, sources = sources )


class GradientNonfinitude( Omnierror, FloatingPointError ):
    ''' Gradient contains non-finite entries. '''

    def __init__( self, name: str, step: int ) -> None:
        super( ).__init__(
            f"Non-finite gradient for '{name}' at optimizer step {step}.",
            parameter = name, step = step )


class KernelInvalidity( Omnierror, ValueError ):
    ''' Moving-average kernel is even or non-positive. '''

    def __init__( self, kernel: int ) -> None:
        super( ).__init__(
            f"Moving-average kernel must be odd and positive; "
            f"received {kernel}.",
            kernel = kernel )


class LossNonfinitude( Omnierror, FloatingPointError ):
    ''' Objective evaluated to a non-finite value. '''

    def __init__( self, epoch: int, value: float ) -> None:
        super( ).__init__(
            f"Non-finite loss {value!r} during epoch {epoch}.",
            epoch = epoch, value = value )


class MetricInputInvalidity( Omnierror, ValueError ):
    ''' Metric inputs are empty. '''

    def __init__( self, metric: str ) -> None:
        super( ).__init__(
            f"Cannot compute '{metric}' over empty inputs.",
            metric = metric )


class RecordInvalidity( Omnierror, ValueError ):
    ''' Run record is empty or malformed. '''

    def __init__( self, reason: str ) -> None:
        super( ).__init__(
            f"Invalid run record: {reason}", reason = reason )


class ShapeIncompatibility( Omnierror, ValueError ):
    ''' Array shapes do not agree. '''

    def __init__(
        self,
        name: str,
        expected: tuple[ int, ... ] | str,
        received: tuple[ int, ... ],
    ) -> None:
        super( ).__init__(
            f"Shape mismatch for {name}: expected {expected}, "
            f"received {received}.",
            name = name, expected = str( expected ),
            received = str( received ) )


class SplitOverflow( Omnierror, ValueError ):
    ''' Requested split sizes exceed available rows. '''

    def __init__( self, requested: int, available: int ) -> None:
        super( ).__init__(
            f"Splits require {requested} rows; "
            f"series has only {available}.",
            requested = requested, available = available )


class TimestampDisorder( Omnierror, ValueError ):
    ''' Timestamps are not strictly increasing. '''

    def __init__( self, row: int, location: str ) -> None:
        super( ).__init__(
            f"Timestamp at row {row} in {location} does not strictly "
            "follow its predecessor.",
            row = row, location = location )


class WindowInsufficiency( Omnierror, ValueError ):
    ''' Split is too short to hold a single window. '''

    def __init__(
        self, split: str, length: int, lookback: int, horizon: int
    ) -> None:
        super( ).__init__(
            f"Split '{split}' has {length} rows; "
            f"at least {lookback + horizon} are needed for "
            f"lookback {lookback} and horizon {horizon}.",
            split = split, length = length,
            lookback = lookback, horizon = horizon )


def _jsonify( value: __.typx.Any ) -> __.typx.Any:
    if isinstance( value, ( str, int, float, bool ) ) or value is None:
        return value
    return str( value )
