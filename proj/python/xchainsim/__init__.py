# Copyright 2026 the xchainsim authors
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

"""Deterministic simulator for atomic crosschain transactions.

The heavy lifting lives in the C++ extension; this package re-exports the
operations: running packaged scenarios under fault injection, re-checking
stored trace/state artifacts, and the threshold-signature primitives over
the transparent (insecure, test-grade) group.
"""

try:
    from xchainsim._core import (  # type: ignore[attr-defined]
        check_artifacts,
        list_scenarios,
        run_scenario,
        scenario_config,
        tsig,
    )
except ImportError:  # running against a build tree: the module is top-level
    from _core import (  # type: ignore[no-redef]
        check_artifacts,
        list_scenarios,
        run_scenario,
        scenario_config,
        tsig,
    )

__all__ = [
    "check_artifacts",
    "list_scenarios",
    "run_scenario",
    "scenario_config",
    "tsig",
]
