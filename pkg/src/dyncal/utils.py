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
import base64
import hashlib
import json
import math
import sys

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401


class Utils:
    @staticmethod
    def parse_float(v: Any) -> float:
        '''Parses a float, returning NaN if it is not parseable.  Accepts "inf" / "-inf".'''
        try:
            return float(v)
        except (TypeError, ValueError):
            return math.nan

    @classmethod
    def parse_float_list(cls, v: Union[str, Sequence[Any]]) -> List[float]:
        '''Parses a comma-separated string (or a sequence) into a list of floats.  Raises ValueError on unparseable entries.'''
        items: Sequence[Any] = v.split(',') if isinstance(v, str) else v
        ret = []
        for item in items:
            if isinstance(item, str):
                item = item.strip()
                if len(item) == 0:
                    continue
            f = cls.parse_float(item)
            if math.isnan(f):
                raise ValueError('not a number: {}'.format(item))
            ret.append(f)
        return ret

    @staticmethod
    def parse_bool(v: Any) -> bool:
        if isinstance(v, str):
            lv = v.strip().lower()
            if lv in ('true', 'yes', 'on', '1'):
                return True
            if lv in ('false', 'no', 'off', '0'):
                return False
            raise ValueError('not a boolean: {}'.format(v))
        return bool(v)

    @staticmethod
    def canonical_json(obj: Any) -> str:
        '''Returns a stable JSON encoding (sorted keys, no whitespace) suitable for hashing.'''
        return json.dumps(obj, sort_keys=True, separators=(',', ':'))

    @staticmethod
    def sha256(data: Union[bytes, str]) -> str:
        '''Returns the unpadded base64 SHA256 digest of data, prefixed with "SHA256:".'''
        if isinstance(data, str):
            data = data.encode('utf-8')
        h = base64.b64encode(hashlib.sha256(data).digest())
        r = h.decode('ascii').rstrip('=')
        return 'SHA256:{}'.format(r)

    @staticmethod
    def derive_seed(seed: int, *labels: Any) -> int:
        '''Derives an independent 63-bit seed from a base seed and any number of labels (series ids, fold numbers, SNR levels).'''
        material = '|'.join([str(int(seed))] + [repr(label) for label in labels])
        digest = hashlib.sha256(material.encode('utf-8')).digest()
        return int.from_bytes(digest[0:8], 'big') >> 1

    @staticmethod
    def is_windows() -> bool:
        return sys.platform in ['win32', 'cygwin']
