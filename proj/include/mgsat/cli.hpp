// SPDX-License-Identifier: Apache-2.0
//
// mgsat - forward-link simulator for multi-gateway multibeam satellite systems
// Copyright (C) 2026 The mgsat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MGSAT_CLI_HPP
#define MGSAT_CLI_HPP

#include <iosfwd>

namespace mgsat
{
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_config_error = 1;
    inline constexpr int exit_io_error = 2;

    // The `simulate` command line. Returns the process exit code.
    int run_simulate_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}

#endif
