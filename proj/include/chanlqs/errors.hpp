// SPDX-License-Identifier: Apache-2.0
//
// chanlqs - non-stationarity analysis of MIMO radio channels
// Copyright (C) 2026 the chanlqs authors
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

namespace chanlqs
{

/// Invalid parameter or configuration value.
struct config_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Malformed container file (bad header, payload length mismatch).
struct format_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Structurally valid input carrying unusable values (NaN/Inf samples).
struct data_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Input too short for the requested operator support.
struct insufficient_data : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// The requested measure has no defined value for this input.
struct undefined_measure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// A numerical sanity check failed (non-Hermitian drift, eigenvalues
/// negative beyond rounding).
struct numerical_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace chanlqs
