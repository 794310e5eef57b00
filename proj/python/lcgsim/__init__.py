# Copyright 2026 The lcg-sim Authors
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

"""Heralded continuous-variable circuits as linear combinations of Gaussians."""

import json as _json

from ._core import (
    HBAR,
    ConfigError,
    DegenerateState,
    InvalidArgument,
    LcgError,
    NumericalStabilityError,
    ReductionFailed,
    State,
    UnphysicalState,
    cat,
    coherent,
    fock,
    fock_superposition,
    gaussian,
    herald,
    herald_fock,
    load_state,
    log_norm,
    normalized,
    normalized_overlap,
    overlap,
    photon_moments,
    purity,
    save_state,
    set_num_threads,
    squeezing,
    tensor,
    thermal,
    vacuum,
    wigner,
    wigner_grid,
)
from ._core import rank_reduce as _rank_reduce

__version__ = "0.1.0"


def rank_reduce(state, eps_out=0.0, k_std=6.0):
    """Returns (state, report dict)."""
    out, report = _rank_reduce(state, eps_out, k_std)
    return out, _json.loads(report)
