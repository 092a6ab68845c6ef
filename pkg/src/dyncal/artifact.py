"""
   The MIT License (MIT)

   Copyright (C) 2026 The dyncal developers

   Permission is hereby granted, free of charge, to any person obtaining a copy
   of this software and associated documentation files (the "Software"), to deal
   in the Software without restriction, including without limitation the rights
   to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
   copies of the Software, and to permit persons to whom the Software is
   furnished to do so, subject to the following conditions:

   The above copyright notice and this permission notice shall be included in
   all copies or substantial portions of the Software.

   THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
   IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
   FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
   AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
   LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
   OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
   THE SOFTWARE.
"""
import json
import os

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import DataIOError, InvalidInputError
from dyncal.globals import ARTIFACT_FORMAT_VERSION, VERSION
from dyncal.hyperparameters import Hyperparameters
from dyncal.outputbuffer import OutputBuffer
from dyncal.sdcm import FeatureScaler, SdcmModel
from dyncal.windowing import WindowSpec


class ModelArtifact:
    '''A trained model as persisted on disk: the full calibration dataset, hyperparameters and normalization, the window it was built with and where it came from.

    The covariance factorization is not stored; it is rebuilt on load.'''

    def __init__(self, model: SdcmModel, window: WindowSpec, provenance: Optional[Dict[str, Any]] = None) -> None:
        if window.dimension != model.dimension:
            raise InvalidInputError('window %r does not match the model dimension %d' % (window, model.dimension))
        self.model = model
        self.window = window
        self.provenance: Dict[str, Any] = dict(provenance or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format_version': ARTIFACT_FORMAT_VERSION,
            'dyncal_version': VERSION,
            'window': self.window.to_dict(),
            'theta': self.model.theta.to_dict(),
            'scaler': self.model.scaler.to_dict(),
            'target_scale': self.model.target_scale,
            'lifespan_s': self.model.lifespan_s,
            'samples': [s.to_dict() for s in self.model.samples],
            'provenance': self.provenance,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any], out: Optional[OutputBuffer] = None) -> 'ModelArtifact':
        version = d.get('format_version')
        if version != ARTIFACT_FORMAT_VERSION:
            raise InvalidInputError('unsupported artifact format version: %r (expected %d)' % (version, ARTIFACT_FORMAT_VERSION))
        try:
            samples = [CalibrationSample.from_dict(s) for s in d['samples']]
            model = SdcmModel(
                samples,
                Hyperparameters.from_dict(d['theta']),
                FeatureScaler.from_dict(d['scaler']),
                target_scale=float(d['target_scale']),
                lifespan_s=d.get('lifespan_s'),
                out=out,
            )
            window = WindowSpec.from_dict(d['window'])
        except (KeyError, TypeError) as e:
            raise InvalidInputError('malformed model artifact: %s' % e) from e
        return cls(model, window, d.get('provenance', {}))

    def save(self, path: str) -> None:
        '''Writes the artifact as JSON.  The file is replaced atomically, so an interrupted save leaves the previous artifact intact.'''
        tmp = path + '.tmp'
        try:
            with open(tmp, 'w', encoding='utf-8') as f:
                json.dump(self.to_dict(), f, sort_keys=True, indent=1)
                f.write('\n')
            os.replace(tmp, path)
        except OSError as e:
            raise DataIOError('cannot write artifact %s: %s' % (path, e)) from e

    @classmethod
    def load(cls, path: str, out: Optional[OutputBuffer] = None) -> 'ModelArtifact':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except OSError as e:
            raise DataIOError('cannot read artifact %s: %s' % (path, e)) from e
        except ValueError as e:
            raise InvalidInputError('%s is not a model artifact: %s' % (path, e)) from e
        if not isinstance(data, dict):
            raise InvalidInputError('%s is not a model artifact' % path)
        return cls.from_dict(data, out=out)
