# Copyright 2026 The hamid Authors
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

"""Input design for parametric models via Hamiltonian Monte Carlo.

The heavy lifting happens in the compiled ``_core`` extension. Configurations
use the same JSON schema as the ``hamid`` command-line tool.
"""

from ._core import (
    ArgumentError,
    Config,
    Model,
    ModelDims,
    NumericDomainError,
    bias_variance,
    design,
    effective_sample_size,
    evaluate,
    grad_potential,
    leapfrog,
    potential,
    run_chain,
    sample,
)

__all__ = [
    "ArgumentError",
    "Config",
    "Model",
    "ModelDims",
    "NumericDomainError",
    "bias_variance",
    "design",
    "effective_sample_size",
    "evaluate",
    "grad_potential",
    "leapfrog",
    "potential",
    "run_chain",
    "sample",
]

__version__ = "0.1.0"
