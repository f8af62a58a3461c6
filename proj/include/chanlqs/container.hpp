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

#include <string>

#include "chanlqs/types.hpp"

namespace chanlqs
{

// Container format "CTF1": one UTF-8 JSON header line terminated by '\n'
// with the fields {magic:"CTF1", n_time, n_freq, n_rx, n_tx, T_m, F_m, f_c,
// pol_rx, pol_tx, speed_per_sample}, followed by a little-endian binary
// payload of n_time*n_freq*n_rx*n_tx complex samples, each stored as two
// 32-bit IEEE-754 floats (re, im), index order time-major, then frequency,
// then rx, then tx.

/// Reads a CTF1 container. Throws format_error on malformed header or payload
/// length mismatch, data_error on non-finite samples.
channel_tensor read_container(const std::string &path);

/// Writes a CTF1 container in canonical serialization; read_container followed
/// by write_container reproduces a canonical file byte for byte.
void write_container(const channel_tensor &tensor, const std::string &path);

} // namespace chanlqs
