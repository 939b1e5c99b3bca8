// SPDX-License-Identifier: Apache-2.0
//
// oosi - decentralized out-of-system interference suppression for
// cell-free massive MIMO
// Copyright (C) 2026 The oosi authors
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

#ifndef OOSI_ERRORS_HPP
#define OOSI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oosi
{

// Invalid arguments, shapes or configuration values.
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// An iterative kernel failed or produced non-finite output.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A matrix that must be invertible / full rank is (numerically) not.
class DegeneracyError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace oosi

#endif
