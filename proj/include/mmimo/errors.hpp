// SPDX-License-Identifier: Apache-2.0
//
// mmimo-sg: stochastic-geometry uplink massive MIMO SINR toolkit
// Copyright (C) 2026 The mmimo-sg Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace mmimo
{

// Argument outside the mathematical domain of an operation (e.g. alpha <= 2).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Quadrature or another iterative method failed to converge. Carries the best estimate so far.
class NumericalError : public std::runtime_error
{
public:
    NumericalError(const std::string &what, double partial_estimate, double error_estimate)
        : std::runtime_error(what), partial_(partial_estimate), error_(error_estimate) {}

    double partial_estimate() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_; }

private:
    double partial_;
    double error_;
};

// Invalid or inconsistent run configuration. `key_path` points at the offending entry.
class ConfigError : public std::invalid_argument
{
public:
    ConfigError(const std::string &key_path, const std::string &message)
        : std::invalid_argument(key_path.empty() ? message : key_path + ": " + message), key_path_(key_path) {}

    const std::string &key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

// Data structure does not have the shape an operation requires (grid mismatch, missing pilots, ...).
class StructuralError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

} // namespace mmimo
