# Copyright 2026 The dyncool Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Ground-state preparation by dynamical cooling."""

import json
import os

from ._core import *  # noqa: F401,F403
from ._core import run_experiment_json as _run_experiment_json

__version__ = "0.1.0"


def run_experiment(config, base_dir=None):
    """Run an experiment from a config dict or a path to a JSON config file.

    Returns the run record as a dict.
    """
    if isinstance(config, (str, os.PathLike)):
        path = os.fspath(config)
        with open(path, encoding="utf-8") as f:
            text = f.read()
        base = os.path.dirname(os.path.abspath(path)) if base_dir is None else base_dir
    else:
        text = json.dumps(config)
        base = base_dir or ""
    return json.loads(_run_experiment_json(text, base))
