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

#ifndef MGSAT_ERRORS_HPP
#define MGSAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mgsat
{
    // Invalid parameters, scenario or configuration. Maps to CLI exit code 1.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // File system failures. Maps to CLI exit code 2.
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A numerical precondition was violated (e.g. singular system).
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
